#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tipsim/deterministic.hpp"
#include "tipsim/ensemble.hpp"

namespace tipsim {

struct Histogram {
  std::vector<double> bin_edges;      // strictly ascending, B+1 values
  std::vector<std::uint64_t> counts;  // B bins, [edge_i, edge_{i+1}), last closed
  std::uint64_t n_total = 0;
  std::uint64_t n_out_of_range = 0;
};

// Throws std::invalid_argument unless edges are strictly ascending with at
// least two entries.
Histogram build_histogram(std::span<const double> values, std::vector<double> bin_edges);

std::vector<double> uniform_edges(double lo, double hi, std::size_t n_bins);

// Wilson score interval for k successes in n trials; well behaved at k = 0
// and k = n.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double level);

// Shortest round-trip decimal form, '.' separator, locale-independent.
std::string format_double(double v);

// CSV renderers. Column layouts are fixed; all numbers via format_double.
std::string to_csv(const SweepTable& table);            // R,sigma,p_hat,ci_low,ci_high,n_paths,n_escaped
std::string to_csv(const Histogram& hist);              // bin_left,bin_right,count
std::string to_csv(const PathStatistics& stats);        // t,mean,std
std::string trajectories_to_csv(std::span<const PathOutcome> paths);  // t,X,Y,path_id
std::string escape_csv(const ModelParams& params, const EscapeEstimate& est);

// Matching readers; throw std::invalid_argument on malformed input.
SweepTable sweep_from_csv(const std::string& text);
Histogram histogram_from_csv(const std::string& text);
PathStatistics statistics_from_csv(const std::string& text);

// JSON summary: params, grid, seed, results, tool_version. seed may be null
// for deterministic results.
nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const TimeGrid& grid);
nlohmann::json to_json(const EscapeEstimate& est);
nlohmann::json to_json(const CriticalRateResult& res);
nlohmann::json summary_json(const ModelParams& params, const TimeGrid& grid,
                            nlohmann::json seed, nlohmann::json results);

EscapeEstimate escape_from_json(const nlohmann::json& j);

// Writes contents verbatim; throws std::runtime_error on I/O failure.
void write_file(const std::string& path, std::string_view contents);

}  // namespace tipsim
