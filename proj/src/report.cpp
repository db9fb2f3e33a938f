#include "tipsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tipsim/rng.hpp"
#include "tipsim/version.hpp"

namespace tipsim {

std::vector<double> uniform_edges(double lo, double hi, std::size_t n_bins) {
  if (!(lo < hi)) throw std::invalid_argument("uniform_edges: need lo < hi");
  if (n_bins == 0) throw std::invalid_argument("uniform_edges: need at least one bin");
  std::vector<double> edges(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
  return edges;
}

Histogram build_histogram(std::span<const double> values, std::vector<double> bin_edges) {
  if (bin_edges.size() < 2)
    throw std::invalid_argument("build_histogram: need at least two bin edges");
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (!(bin_edges[i - 1] < bin_edges[i]))
      throw std::invalid_argument("build_histogram: bin edges must be strictly ascending");

  Histogram hist;
  hist.bin_edges = std::move(bin_edges);
  hist.counts.assign(hist.bin_edges.size() - 1, 0);
  hist.n_total = values.size();
  for (const double v : values) {
    if (v < hist.bin_edges.front() || v > hist.bin_edges.back()) {
      ++hist.n_out_of_range;
      continue;
    }
    // Bins are [edge_i, edge_{i+1}); the last bin also takes its right edge.
    const auto it = std::upper_bound(hist.bin_edges.begin(), hist.bin_edges.end(), v);
    std::size_t idx = static_cast<std::size_t>(it - hist.bin_edges.begin());
    idx = idx == 0 ? 0 : idx - 1;
    if (idx >= hist.counts.size()) idx = hist.counts.size() - 1;
    ++hist.counts[idx];
  }
  return hist;
}

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double level) {
  if (n == 0) throw std::invalid_argument("wilson_interval: n must be >= 1");
  if (k > n) throw std::invalid_argument("wilson_interval: k must not exceed n");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("wilson_interval: level must lie in (0,1)");

  const double z = inverse_normal_cdf(0.5 * (1.0 + level));
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  const double lo = std::max(0.0, center - half);
  const double hi = std::min(1.0, center + half);
  return {lo, hi};
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_u64(std::uint64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("csv: malformed number '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("csv: malformed count '" + s + "'");
  return v;
}

// Returns data rows after checking the header line.
std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::string& expected_header,
                                                std::size_t n_cols) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != expected_header)
    throw std::invalid_argument("csv: expected header '" + expected_header + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != n_cols)
      throw std::invalid_argument("csv: wrong column count in row '" + line + "'");
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

std::string to_csv(const SweepTable& table) {
  std::string out = "R,sigma,p_hat,ci_low,ci_high,n_paths,n_escaped\n";
  for (std::size_t ir = 0; ir < table.r_values.size(); ++ir) {
    for (std::size_t is = 0; is < table.sigma_values.size(); ++is) {
      const EscapeEstimate& c = table.cell(ir, is);
      out += format_double(table.r_values[ir]);
      out += ',';
      out += format_double(table.sigma_values[is]);
      out += ',';
      out += format_double(c.p_hat);
      out += ',';
      out += format_double(c.ci_low);
      out += ',';
      out += format_double(c.ci_high);
      out += ',';
      out += format_u64(c.n_paths);
      out += ',';
      out += format_u64(c.n_escaped);
      out += '\n';
    }
  }
  return out;
}

std::string to_csv(const Histogram& hist) {
  std::string out = "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out += format_double(hist.bin_edges[i]);
    out += ',';
    out += format_double(hist.bin_edges[i + 1]);
    out += ',';
    out += format_u64(hist.counts[i]);
    out += '\n';
  }
  return out;
}

std::string to_csv(const PathStatistics& stats) {
  std::string out = "t,mean,std\n";
  for (std::size_t i = 0; i < stats.times.size(); ++i) {
    out += format_double(stats.times[i]);
    out += ',';
    out += format_double(stats.mean[i]);
    out += ',';
    out += format_double(stats.std_dev[i]);
    out += '\n';
  }
  return out;
}

std::string trajectories_to_csv(std::span<const PathOutcome> paths) {
  std::string out = "t,X,Y,path_id\n";
  for (std::size_t id = 0; id < paths.size(); ++id) {
    for (const TrajectoryPoint& p : paths[id].trajectory) {
      out += format_double(p.t);
      out += ',';
      out += format_double(p.x);
      out += ',';
      out += format_double(p.y);
      out += ',';
      out += format_u64(id);
      out += '\n';
    }
  }
  return out;
}

std::string escape_csv(const ModelParams& params, const EscapeEstimate& est) {
  std::string out = "R,sigma,p_hat,ci_low,ci_high,n_paths,n_escaped\n";
  out += format_double(params.rate);
  out += ',';
  out += format_double(params.sigma);
  out += ',';
  out += format_double(est.p_hat);
  out += ',';
  out += format_double(est.ci_low);
  out += ',';
  out += format_double(est.ci_high);
  out += ',';
  out += format_u64(est.n_paths);
  out += ',';
  out += format_u64(est.n_escaped);
  out += '\n';
  return out;
}

SweepTable sweep_from_csv(const std::string& text) {
  const auto rows = parse_csv(text, "R,sigma,p_hat,ci_low,ci_high,n_paths,n_escaped", 7);
  SweepTable table;
  for (const auto& row : rows) {
    const double r = parse_double(row[0]);
    const double sigma = parse_double(row[1]);
    if (table.r_values.empty() || table.r_values.back() != r) table.r_values.push_back(r);
    if (table.r_values.size() == 1) table.sigma_values.push_back(sigma);
    EscapeEstimate est;
    est.p_hat = parse_double(row[2]);
    est.ci_low = parse_double(row[3]);
    est.ci_high = parse_double(row[4]);
    est.n_paths = parse_u64(row[5]);
    est.n_escaped = parse_u64(row[6]);
    table.cells.push_back(est);
  }
  if (table.cells.size() != table.r_values.size() * table.sigma_values.size())
    throw std::invalid_argument("csv: ragged sweep table");
  return table;
}

Histogram histogram_from_csv(const std::string& text) {
  const auto rows = parse_csv(text, "bin_left,bin_right,count", 3);
  if (rows.empty()) throw std::invalid_argument("csv: empty histogram");
  Histogram hist;
  for (const auto& row : rows) {
    if (hist.bin_edges.empty()) hist.bin_edges.push_back(parse_double(row[0]));
    hist.bin_edges.push_back(parse_double(row[1]));
    hist.counts.push_back(parse_u64(row[2]));
    hist.n_total += hist.counts.back();
  }
  return hist;
}

PathStatistics statistics_from_csv(const std::string& text) {
  const auto rows = parse_csv(text, "t,mean,std", 3);
  PathStatistics stats;
  for (const auto& row : rows) {
    stats.times.push_back(parse_double(row[0]));
    stats.mean.push_back(parse_double(row[1]));
    stats.std_dev.push_back(parse_double(row[2]));
  }
  return stats;
}

nlohmann::json to_json(const ModelParams& params) {
  return {{"sigma", params.sigma},
          {"R", params.rate},
          {"delta", params.delta},
          {"x0", params.x0},
          {"y0", params.y0}};
}

nlohmann::json to_json(const TimeGrid& grid) {
  return {{"h", grid.h}, {"n_steps", grid.n_steps}, {"horizon", grid.horizon()}};
}

nlohmann::json to_json(const EscapeEstimate& est) {
  return {{"n_paths", est.n_paths}, {"n_escaped", est.n_escaped}, {"p_hat", est.p_hat},
          {"ci_low", est.ci_low},   {"ci_high", est.ci_high},     {"ci_level", est.ci_level}};
}

nlohmann::json to_json(const CriticalRateResult& res) {
  return {{"r_low", res.r_low},
          {"r_high", res.r_high},
          {"width", res.width()},
          {"t_c_at_r_low", res.t_c_at_r_low},
          {"evaluations", res.evaluations}};
}

nlohmann::json summary_json(const ModelParams& params, const TimeGrid& grid,
                            nlohmann::json seed, nlohmann::json results) {
  return {{"params", to_json(params)},
          {"grid", to_json(grid)},
          {"seed", std::move(seed)},
          {"results", std::move(results)},
          {"tool_version", kToolVersion}};
}

EscapeEstimate escape_from_json(const nlohmann::json& j) {
  EscapeEstimate est;
  est.n_paths = j.at("n_paths").get<std::uint64_t>();
  est.n_escaped = j.at("n_escaped").get<std::uint64_t>();
  est.p_hat = j.at("p_hat").get<double>();
  est.ci_low = j.at("ci_low").get<double>();
  est.ci_high = j.at("ci_high").get<double>();
  est.ci_level = j.at("ci_level").get<double>();
  return est;
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace tipsim
