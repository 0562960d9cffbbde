#include "growthmc/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "growthmc/errors.hpp"

namespace growthmc {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void atomic_write_file(const std::filesystem::path& path,
                       std::string_view bytes) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("rename failed: " + path.string());
  }
}

std::uint64_t fnv1a_hash(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string survival_csv(const SurvivalEstimate& est) {
  std::string out = "n,surv,ci_half,trajectories,censored\n";
  for (std::size_t i = 0; i < est.n_grid.size(); ++i) {
    out += std::to_string(est.n_grid[i]);
    out += ',';
    out += format_double(est.surv[i]);
    out += ',';
    out += format_double(est.ci_half[i]);
    out += ',';
    out += std::to_string(est.trajectories);
    out += ',';
    out += std::to_string(est.censored);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("CSV: bad numeric field '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("CSV: bad integer field '" + s + "'");
  return v;
}

}  // namespace

SurvivalEstimate read_survival_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("survival CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,surv,ci_half,trajectories,censored")
    throw ConfigError("survival CSV: bad header '" + line + "'");
  SurvivalEstimate est;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 5)
      throw ConfigError("survival CSV: expected 5 fields, got " +
                        std::to_string(fields.size()));
    est.n_grid.push_back(parse_u64(fields[0]));
    est.surv.push_back(parse_double(fields[1]));
    est.ci_half.push_back(parse_double(fields[2]));
    est.trajectories = parse_u64(fields[3]);
    est.censored = parse_u64(fields[4]);
  }
  if (est.n_grid.empty())
    throw ConfigError("survival CSV: no data rows");
  est.horizon = est.n_grid.back();
  return est;
}

std::string tv_csv(const TvDecayResult& tv) {
  std::string out = "n,tv,weight,weighted\n";
  for (const auto& p : tv.points) {
    out += std::to_string(p.n);
    out += ',';
    out += format_double(p.tv);
    out += ',';
    out += format_double(p.weight);
    out += ',';
    out += format_double(p.weighted);
    out += '\n';
  }
  return out;
}

std::string invariant_csv(const std::vector<double>& pi) {
  std::string out = "x,pi\n";
  for (std::size_t x = 0; x < pi.size(); ++x) {
    out += std::to_string(x);
    out += ',';
    out += format_double(pi[x]);
    out += '\n';
  }
  return out;
}

std::string kernel_csv(const TruncatedKernel& kernel) {
  std::string out = "row,col,prob\n";
  for (std::size_t x = 0; x < kernel.rows.size(); ++x) {
    for (const auto& [col, prob] : kernel.rows[x].entries) {
      out += std::to_string(x);
      out += ',';
      out += std::to_string(col);
      out += ',';
      out += format_double(prob);
      out += '\n';
    }
  }
  return out;
}

TruncatedKernel read_kernel_csv(const std::string& text, std::int32_t cap,
                                std::int32_t absorb_max) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("kernel CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "row,col,prob")
    throw ConfigError("kernel CSV: bad header '" + line + "'");
  TruncatedKernel kernel;
  kernel.cap = cap;
  kernel.absorb_max = absorb_max;
  kernel.rows.resize(static_cast<std::size_t>(cap) + 1);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3)
      throw ConfigError("kernel CSV: expected 3 fields");
    const auto row = parse_u64(fields[0]);
    const auto col = parse_u64(fields[1]);
    if (row > static_cast<std::uint64_t>(cap) ||
        col > static_cast<std::uint64_t>(cap))
      throw ConfigError("kernel CSV: state beyond the cap");
    kernel.rows[row].entries.emplace_back(static_cast<std::int32_t>(col),
                                          parse_double(fields[2]));
  }
  for (auto& row : kernel.rows) {
    double mass = 0.0;
    for (const auto& [col, p] : row.entries) mass += p;
    row.overflow = std::max(0.0, 1.0 - mass);
    kernel.max_overflow = std::max(kernel.max_overflow, row.overflow);
    if (row.overflow > 1e-9)
      kernel.flagged_rows.push_back(static_cast<std::int32_t>(
          &row - kernel.rows.data()));
  }
  return kernel;
}

std::string drift_power_csv(const DriftCheckReport& report) {
  std::string out = "x,mean,stderr,verdict\n";
  for (const auto& p : report.points) {
    out += format_double(p.x);
    out += ',';
    out += format_double(p.mean);
    out += ',';
    out += format_double(p.stderr_);
    out += ',';
    out += drift_verdict_name(p.verdict);
    out += '\n';
  }
  return out;
}

std::string drift_transformed_csv(const DriftCheckReport& report) {
  std::string out = "x,G,m1,se1,m2,se2\n";
  for (const auto& p : report.transformed) {
    out += format_double(p.x);
    out += ',';
    out += format_double(p.y);
    out += ',';
    out += format_double(p.m1);
    out += ',';
    out += format_double(p.se1);
    out += ',';
    out += format_double(p.m2);
    out += ',';
    out += format_double(p.se2);
    out += '\n';
  }
  return out;
}

}  // namespace growthmc
