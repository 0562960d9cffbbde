#pragma once

#include <optional>
#include <string>

#include "growthmc/montecarlo.hpp"
#include "growthmc/stats.hpp"

namespace growthmc {

// Optional straight-line guides drawn on the log-log plot, one per bracket
// edge, anchored at the first plotted point.
struct PlotGuides {
  double slope_lo = 0.0;
  double slope_hi = 0.0;
};

// Renders a survival curve as a self-contained log-log SVG.  Output bytes
// depend only on the inputs (fixed canvas, fixed formatting, no timestamps),
// so identical inputs give byte-identical files.
std::string survival_svg(const SurvivalEstimate& est,
                         const std::optional<PlotGuides>& guides);

}  // namespace growthmc
