#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dispersion/config_io.hpp"
#include "dispersion/runtime.hpp"

namespace dispersion {

enum class ReportFormat { csv, jsonl };

std::string_view to_string(ReportFormat format);
ReportFormat parse_report_format(std::string_view text);

/// Parameter grid; every combination of family, n, m, k, and algorithm is a
/// cell, and every cell runs `trials` seeds.
struct SweepSpec {
  std::vector<GraphFamily> families;
  std::vector<std::size_t> n_values;
  /// random_connected only; tokens like "64" or "2n".
  std::vector<std::string> m_values{"2n"};
  /// Tokens like "8", "n", "n/2", "2n+1".
  std::vector<std::string> k_values{"n"};
  std::vector<AlgorithmTag> algorithms;
  std::string placement = "rooted:0";
  std::size_t trials = 1;
  std::uint64_t base_seed = 1;
  std::size_t max_rounds = 1'000'000;
  unsigned c_mem = 8;
  std::string output;  // empty: caller decides
  ReportFormat format = ReportFormat::csv;
  unsigned threads = 1;
};

/// Keys: graph, n, m, k, algorithm (comma-separated lists), placement,
/// trials, base_seed, max_rounds, c_mem, output, format, threads.
SweepSpec sweep_from_key_values(const KeyValues& kv);

/// Evaluates "n", "n/2", "2n+1", "3", ... for a given n. Throws ConfigError.
std::size_t eval_size_token(std::string_view token, std::size_t n);

struct ReportRow {
  std::string digest;
  GraphFamily family = GraphFamily::ring;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  AlgorithmTag algorithm = AlgorithmTag::rooted_ring;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::completed;
  std::optional<std::size_t> dispersed_round;
  std::optional<std::size_t> terminated_round;
  std::size_t peak_bits = 0;
  std::size_t max_subrounds = 0;
  std::size_t rounds = 0;
  std::optional<bool> within_bound;
  double wall_ms = 0.0;
};

/// Fixed column order shared by CSV and JSON lines.
inline constexpr std::string_view kReportColumns =
    "digest,family,n,m,k,algorithm,seed,status,dispersed_round,terminated_round,"
    "peak_bits,max_subrounds,rounds,within_bound,wall_ms";

/// Round bound per algorithm: ring 2*max(n,k); tree 4n*ceil(k/n); both
/// graph variants 8*max(m,1)*ceil(k/n); none for the random walk.
std::optional<std::size_t> round_bound(AlgorithmTag tag, std::size_t n, std::size_t m,
                                       std::size_t k);

/// FNV-1a over the canonical text form of a configuration.
std::string config_digest(const ExperimentConfig& config);

/// Expands the grid into configurations in (cell, trial) order.
std::vector<ExperimentConfig> expand_sweep(const SweepSpec& spec);

ReportRow make_row(const ExperimentConfig& config, const SimulationResult& result, double wall_ms);

std::vector<ReportRow> run_sweep(const SweepSpec& spec);

void write_report(std::ostream& out, std::span<const ReportRow> rows, ReportFormat format,
                  bool include_wall_time = true);

/// True when some row timed out, failed an audit, or aborted.
bool any_failure(std::span<const ReportRow> rows);

struct Distribution {
  std::size_t count = 0;
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Nearest-rank quantiles over `samples`.
Distribution summarize(std::vector<double> samples);

struct CoverEstimate {
  Distribution rounds;
  std::vector<std::size_t> samples;
};

/// Independent single random walks from uniform random starts; each sample
/// is the number of steps until every node has been visited.
CoverEstimate estimate_cover_time(const PortGraph& g, std::size_t trials, std::uint64_t seed);

struct CoverComparison {
  CoverEstimate cover;
  std::vector<double> ratios;  // dispersed_round / mean cover time, one per trial
  Distribution ratio;
  std::size_t failures = 0;    // trials that did not disperse
};

/// Runs `config` (arbitrary-graph) `trials` times with derived seeds on the
/// graph built from `config.graph` and relates dispersion time to the
/// graph's estimated cover time.
CoverComparison compare_dispersion_to_cover(const ExperimentConfig& config, std::size_t trials,
                                            std::size_t cover_trials = 2000);

struct LowerBoundSpec {
  std::size_t center_degree = 8;
  unsigned bits = 2;
  bool restricted = true;
  std::size_t seeds = 20;
  std::uint64_t base_seed = 1;
  std::size_t max_rounds = 100'000;
};

struct LowerBoundReport {
  std::size_t runs = 0;
  std::size_t dispersed = 0;
  std::vector<std::optional<std::size_t>> dispersed_rounds;
};

/// Star whose center hides the port to one leaf; all n robots start on the
/// other side of that cut.
ExperimentConfig lower_bound_config(const LowerBoundSpec& spec, std::uint64_t seed);
PortGraph lower_bound_graph(const LowerBoundSpec& spec);
LowerBoundReport lower_bound_demo(const LowerBoundSpec& spec);

}  // namespace dispersion
