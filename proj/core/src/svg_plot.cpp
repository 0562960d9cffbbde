#include "growthmc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "growthmc/errors.hpp"

namespace growthmc {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginBottom = 48.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

struct LogScale {
  double lo, hi, pix_lo, pix_hi;
  double operator()(double v) const {
    const double t = (std::log10(v) - lo) / (hi - lo);
    return pix_lo + t * (pix_hi - pix_lo);
  }
};

}  // namespace

std::string survival_svg(const SurvivalEstimate& est,
                         const std::optional<PlotGuides>& guides) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < est.n_grid.size(); ++i) {
    if (est.n_grid[i] >= 1 && est.surv[i] > 0.0)
      pts.emplace_back(static_cast<double>(est.n_grid[i]), est.surv[i]);
  }
  if (pts.size() < 2)
    throw ConfigError("plot: need at least two positive survival points");

  double nmin = pts.front().first, nmax = pts.front().first;
  double smin = pts.front().second, smax = pts.front().second;
  for (const auto& [n, s] : pts) {
    nmin = std::min(nmin, n);
    nmax = std::max(nmax, n);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  if (nmax <= nmin) nmax = nmin * 10.0;
  if (smax <= smin) smax = smin * 10.0;

  const LogScale xs{std::log10(nmin), std::log10(nmax), kMarginLeft,
                    kWidth - kMarginRight};
  const LogScale ys{std::log10(smin), std::log10(smax),
                    kHeight - kMarginBottom, kMarginTop};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" "
         "height=\"480\" viewBox=\"0 0 720 480\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" "
         "fill=\"white\"/>\n";

  // decade grid lines and labels
  for (int d = static_cast<int>(std::ceil(std::log10(nmin)));
       d <= static_cast<int>(std::floor(std::log10(nmax))); ++d) {
    const double x = xs(std::pow(10.0, d));
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kMarginTop) +
           "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(kHeight - kMarginBottom) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kHeight - kMarginBottom + 18.0) +
           "\" font-size=\"12\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">1e" + std::to_string(d) + "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(std::log10(smin)));
       d <= static_cast<int>(std::floor(std::log10(smax))); ++d) {
    const double y = ys(std::pow(10.0, d));
    svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(y) +
           "\" x2=\"" + fmt(kWidth - kMarginRight) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(kMarginLeft - 6.0) + "\" y=\"" + fmt(y + 4.0) +
           "\" font-size=\"12\" text-anchor=\"end\" "
           "font-family=\"sans-serif\">1e" + std::to_string(d) + "</text>\n";
  }

  // axes
  svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(kMarginTop) +
         "\" x2=\"" + fmt(kMarginLeft) + "\" y2=\"" +
         fmt(kHeight - kMarginBottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" +
         fmt(kHeight - kMarginBottom) + "\" x2=\"" + fmt(kWidth - kMarginRight) +
         "\" y2=\"" + fmt(kHeight - kMarginBottom) + "\" stroke=\"black\"/>\n";

  // bracket guide lines through the first point
  if (guides) {
    const double n0 = pts.front().first;
    const double s0 = pts.front().second;
    for (const double slope : {guides->slope_lo, guides->slope_hi}) {
      const double s1 = s0 * std::pow(nmax / n0, -slope);
      svg += "<line x1=\"" + fmt(xs(n0)) + "\" y1=\"" + fmt(ys(s0)) +
             "\" x2=\"" + fmt(xs(nmax)) + "\" y2=\"" +
             fmt(ys(std::max(s1, smin))) +
             "\" stroke=\"#cc3333\" stroke-dasharray=\"6 4\" "
             "stroke-width=\"1\"/>\n";
    }
  }

  // the survival series itself
  svg += "<polyline fill=\"none\" stroke=\"#2255aa\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) svg += ' ';
    svg += fmt(xs(pts[i].first)) + "," + fmt(ys(pts[i].second));
  }
  svg += "\"/>\n";

  svg += "<text x=\"" + fmt(0.5 * kWidth) + "\" y=\"" + fmt(kHeight - 10.0) +
         "\" font-size=\"13\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\">n</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(0.5 * kHeight) +
         "\" font-size=\"13\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 16 " +
         fmt(0.5 * kHeight) + ")\">P(tau &gt; n)</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace growthmc
