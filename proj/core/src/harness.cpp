#include "dispersion/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <regex>
#include <sstream>

#include "dispersion/parallel.hpp"
#include "dispersion/rng.hpp"
#include "json.hpp"

namespace dispersion {
namespace {

template <class T>
std::string optional_text(const std::optional<T>& value) {
  if (!value) return "";
  if constexpr (std::is_same_v<T, bool>) {
    return *value ? "true" : "false";
  } else {
    return std::to_string(*value);
  }
}

std::string format_ms(double ms) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << ms;
  return out.str();
}

}  // namespace

std::string_view to_string(ReportFormat format) {
  return format == ReportFormat::csv ? "csv" : "jsonl";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "jsonl" || text == "json") return ReportFormat::jsonl;
  throw ConfigError("format: expected csv or jsonl, got '" + std::string(text) + "'");
}

std::size_t eval_size_token(std::string_view token, std::size_t n) {
  static const std::regex number(R"(^\d+$)");
  static const std::regex linear(R"(^(\d*)n(?:/(\d+))?([+-]\d+)?$)");
  const std::string text(token);
  std::smatch match;
  if (std::regex_match(text, number)) return parse_uint("size", text);
  if (!std::regex_match(text, match, linear)) {
    throw ConfigError("cannot evaluate size token '" + text + "'");
  }
  long long value = static_cast<long long>(n);
  if (match[1].length() > 0) value *= std::stoll(match[1].str());
  if (match[2].matched) {
    const long long d = std::stoll(match[2].str());
    if (d == 0) throw ConfigError("division by zero in '" + text + "'");
    value /= d;
  }
  if (match[3].matched) value += std::stoll(match[3].str());
  if (value < 0) throw ConfigError("size token '" + text + "' is negative for n = " + std::to_string(n));
  return static_cast<std::size_t>(value);
}

SweepSpec sweep_from_key_values(const KeyValues& kv) {
  SweepSpec spec;
  bool have_m = false;
  bool have_k = false;
  for (const auto& [key, value] : kv) {
    if (key == "graph") {
      for (const std::string& item : split_list(value)) {
        const auto family = parse_graph_family(item);
        if (!family) throw ConfigError("graph: unknown family '" + item + "'");
        spec.families.push_back(*family);
      }
    } else if (key == "n") {
      for (const std::string& item : split_list(value)) spec.n_values.push_back(parse_uint(key, item));
    } else if (key == "m") {
      spec.m_values = split_list(value);
      have_m = true;
    } else if (key == "k") {
      spec.k_values = split_list(value);
      have_k = true;
    } else if (key == "algorithm") {
      for (const std::string& item : split_list(value)) {
        const auto tag = parse_algorithm(item);
        if (!tag) throw ConfigError("algorithm: unknown algorithm '" + item + "'");
        spec.algorithms.push_back(*tag);
      }
    } else if (key == "placement") {
      parse_placement(value);
      spec.placement = value;
    } else if (key == "trials") {
      spec.trials = parse_uint(key, value);
    } else if (key == "base_seed" || key == "seed") {
      spec.base_seed = parse_uint(key, value);
    } else if (key == "max_rounds") {
      spec.max_rounds = parse_uint(key, value);
    } else if (key == "c_mem") {
      spec.c_mem = static_cast<unsigned>(parse_uint(key, value));
    } else if (key == "output") {
      spec.output = value;
    } else if (key == "format") {
      spec.format = parse_report_format(value);
    } else if (key == "threads") {
      spec.threads = static_cast<unsigned>(parse_uint(key, value));
    } else {
      throw ConfigError("sweep: unknown key '" + key + "'");
    }
  }
  if ((have_m && spec.m_values.empty()) || (have_k && spec.k_values.empty())) {
    throw ConfigError("sweep: empty grid");
  }
  return spec;
}

std::optional<std::size_t> round_bound(AlgorithmTag tag, std::size_t n, std::size_t m,
                                       std::size_t k) {
  const std::size_t layers = dispersion_cap(k, n);
  switch (tag) {
    case AlgorithmTag::rooted_ring: return 2 * std::max(n, k);
    case AlgorithmTag::rooted_tree: return 4 * n * layers;
    case AlgorithmTag::rooted_graph_logd:
    case AlgorithmTag::rooted_graph_delta: return 8 * std::max<std::size_t>(m, 1) * layers;
    case AlgorithmTag::arbitrary_graph: return std::nullopt;
  }
  return std::nullopt;
}

std::string config_digest(const ExperimentConfig& c) {
  std::ostringstream text;
  text << to_string(c.graph.family) << '|' << c.graph.n << '|' << c.graph.m << '|' << c.graph.rows
       << '|' << c.graph.cols << '|' << c.graph.seed << '|'
       << (c.graph.port_seed ? std::to_string(*c.graph.port_seed) : "-") << '|'
       << c.graph.permute_ports << '|' << c.k << '|' << to_string(c.algorithm) << '|'
       << to_string(c.placement) << '|' << c.seed << '|' << c.max_rounds << '|' << c.c_mem << '|'
       << c.audit << '|' << c.counter_exponent;
  if (c.restriction) {
    text << "|r" << c.restriction->bits;
    if (c.restriction->hidden) text << ':' << c.restriction->hidden->node << ':' << c.restriction->hidden->port;
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

std::vector<ExperimentConfig> expand_sweep(const SweepSpec& spec) {
  if (spec.families.empty() || spec.n_values.empty() || spec.k_values.empty() ||
      spec.algorithms.empty() || spec.m_values.empty()) {
    throw ConfigError("sweep: empty grid");
  }
  if (spec.trials < 1) throw ConfigError("sweep: trials must be at least 1");
  const Placement placement = parse_placement(spec.placement);

  std::vector<ExperimentConfig> configs;
  std::uint64_t cell = 0;
  for (GraphFamily family : spec.families) {
    for (std::size_t n : spec.n_values) {
      const std::vector<std::string> ms =
          family == GraphFamily::random_connected ? spec.m_values : std::vector<std::string>{"0"};
      for (const std::string& m_token : ms) {
        for (const std::string& k_token : spec.k_values) {
          for (AlgorithmTag tag : spec.algorithms) {
            for (std::size_t t = 0; t < spec.trials; ++t) {
              ExperimentConfig c;
              c.graph.family = family;
              c.graph.n = n;
              c.graph.m = eval_size_token(m_token, n);
              c.k = eval_size_token(k_token, n);
              c.algorithm = tag;
              c.placement = placement;
              c.seed = hash_combine(hash_combine(spec.base_seed, cell), t);
              c.graph.seed = c.seed;
              c.max_rounds = spec.max_rounds;
              c.c_mem = spec.c_mem;
              validate_spec(c.graph);
              validate_config(build_graph(c.graph), c);
              configs.push_back(std::move(c));
            }
            ++cell;
          }
        }
      }
    }
  }
  return configs;
}

ReportRow make_row(const ExperimentConfig& c, const SimulationResult& r, double wall_ms) {
  ReportRow row;
  row.digest = config_digest(c);
  row.family = c.graph.family;
  row.n = c.graph.n;
  row.m = expected_edge_count(c.graph);
  row.k = c.k;
  row.algorithm = c.algorithm;
  row.seed = c.seed;
  row.status = r.status;
  row.dispersed_round = r.dispersed_round;
  row.terminated_round = r.all_terminated_round;
  row.peak_bits = r.max_peak_bits;
  row.max_subrounds = r.max_subrounds;
  row.rounds = r.rounds_executed;
  if (const auto bound = round_bound(c.algorithm, row.n, row.m, row.k)) {
    row.within_bound = r.dispersed_round && *r.dispersed_round <= *bound;
  }
  row.wall_ms = wall_ms;
  return row;
}

std::vector<ReportRow> run_sweep(const SweepSpec& spec) {
  const std::vector<ExperimentConfig> configs = expand_sweep(spec);
  std::vector<ReportRow> rows(configs.size());
  parallel_for(configs.size(), spec.threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const SimulationResult result = run_simulation(configs[i]);
    const auto end = std::chrono::steady_clock::now();
    rows[i] = make_row(configs[i], result,
                       std::chrono::duration<double, std::milli>(end - start).count());
  });
  return rows;
}

void write_report(std::ostream& out, std::span<const ReportRow> rows, ReportFormat format,
                  bool include_wall_time) {
  if (format == ReportFormat::csv) out << kReportColumns << '\n';
  for (const ReportRow& r : rows) {
    const std::string wall = include_wall_time ? format_ms(r.wall_ms) : "";
    if (format == ReportFormat::csv) {
      out << r.digest << ',' << to_string(r.family) << ',' << r.n << ',' << r.m << ',' << r.k << ','
          << to_string(r.algorithm) << ',' << r.seed << ',' << to_string(r.status) << ','
          << optional_text(r.dispersed_round) << ',' << optional_text(r.terminated_round) << ','
          << r.peak_bits << ',' << r.max_subrounds << ',' << r.rounds << ','
          << optional_text(r.within_bound) << ',' << wall << '\n';
      continue;
    }
    nlohmann::ordered_json j;
    j["digest"] = r.digest;
    j["family"] = std::string(to_string(r.family));
    j["n"] = r.n;
    j["m"] = r.m;
    j["k"] = r.k;
    j["algorithm"] = std::string(to_string(r.algorithm));
    j["seed"] = r.seed;
    j["status"] = std::string(to_string(r.status));
    j["dispersed_round"] = r.dispersed_round ? nlohmann::ordered_json(*r.dispersed_round) : nullptr;
    j["terminated_round"] = r.terminated_round ? nlohmann::ordered_json(*r.terminated_round) : nullptr;
    j["peak_bits"] = r.peak_bits;
    j["max_subrounds"] = r.max_subrounds;
    j["rounds"] = r.rounds;
    j["within_bound"] = r.within_bound ? nlohmann::ordered_json(*r.within_bound) : nullptr;
    j["wall_ms"] = include_wall_time ? nlohmann::ordered_json(r.wall_ms) : nullptr;
    out << j.dump() << '\n';
  }
}

bool any_failure(std::span<const ReportRow> rows) {
  return std::any_of(rows.begin(), rows.end(),
                     [](const ReportRow& r) { return r.status != RunStatus::completed; });
}

Distribution summarize(std::vector<double> samples) {
  Distribution d;
  d.count = samples.size();
  if (samples.empty()) return d;
  std::sort(samples.begin(), samples.end());
  auto rank = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(samples.size())));
    return samples[std::clamp<std::size_t>(idx, 1, samples.size()) - 1];
  };
  d.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  d.p50 = rank(0.50);
  d.p95 = rank(0.95);
  d.p99 = rank(0.99);
  d.min = samples.front();
  d.max = samples.back();
  return d;
}

CoverEstimate estimate_cover_time(const PortGraph& g, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("cover: trials must be at least 1");
  const std::size_t n = g.node_count();
  CoverEstimate est;
  est.samples.reserve(trials);
  std::mt19937_64 rng(mix64(seed ^ 0x636f766572ULL));
  std::vector<std::uint32_t> stamp(n, 0);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto mark = static_cast<std::uint32_t>(t + 1);
    NodeId v = std::uniform_int_distribution<NodeId>(0, static_cast<NodeId>(n - 1))(rng);
    stamp[v] = mark;
    std::size_t seen = 1;
    std::size_t steps = 0;
    while (seen < n) {
      const std::size_t deg = g.degree(v);
      v = g.follow(v, static_cast<Port>(std::uniform_int_distribution<std::size_t>(0, deg - 1)(rng))).node;
      ++steps;
      if (stamp[v] != mark) {
        stamp[v] = mark;
        ++seen;
      }
    }
    est.samples.push_back(steps);
  }
  est.rounds = summarize(std::vector<double>(est.samples.begin(), est.samples.end()));
  return est;
}

CoverComparison compare_dispersion_to_cover(const ExperimentConfig& config, std::size_t trials,
                                            std::size_t cover_trials) {
  if (config.algorithm != AlgorithmTag::arbitrary_graph) {
    throw std::invalid_argument("cover comparison needs the arbitrary-graph algorithm");
  }
  const PortGraph g = build_graph(config.graph);
  CoverComparison cmp;
  cmp.cover = estimate_cover_time(g, cover_trials, config.seed);
  const double cover = std::max(cmp.cover.rounds.mean, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    ExperimentConfig c = config;
    c.seed = hash_combine(config.seed, t);
    const SimulationResult r = run_simulation(g, c);
    if (!r.dispersed_round) {
      ++cmp.failures;
      continue;
    }
    cmp.ratios.push_back(static_cast<double>(*r.dispersed_round) / cover);
  }
  cmp.ratio = summarize(cmp.ratios);
  return cmp;
}

ExperimentConfig lower_bound_config(const LowerBoundSpec& spec, std::uint64_t seed) {
  if (spec.center_degree < 2) throw std::invalid_argument("lower-bound demo needs a center of degree >= 2");
  ExperimentConfig c;
  c.graph.family = GraphFamily::star;
  c.graph.n = spec.center_degree + 1;
  c.graph.permute_ports = false;  // center port p leads to leaf p + 1
  c.k = c.graph.n;
  c.algorithm = AlgorithmTag::arbitrary_graph;
  c.seed = seed;
  c.max_rounds = spec.max_rounds;
  // The cut separates leaf 1 (behind center port 0) from everything else.
  ExplicitPlacement near;
  std::vector<NodeId> near_side{0};
  for (NodeId v = 2; v < c.graph.n; ++v) near_side.push_back(v);
  for (std::size_t i = 0; i < c.k; ++i) near.nodes.push_back(near_side[i % near_side.size()]);
  c.placement = std::move(near);
  if (spec.restricted) c.restriction = PortRestriction{spec.bits, HiddenPort{0, 0}};
  return c;
}

PortGraph lower_bound_graph(const LowerBoundSpec& spec) {
  return build_graph(lower_bound_config(spec, 0).graph);
}

LowerBoundReport lower_bound_demo(const LowerBoundSpec& spec) {
  const PortGraph g = lower_bound_graph(spec);
  LowerBoundReport report;
  report.dispersed_rounds.resize(spec.seeds);
  parallel_for(spec.seeds, 1, [&](std::size_t i) {
    const ExperimentConfig c = lower_bound_config(spec, hash_combine(spec.base_seed, i));
    report.dispersed_rounds[i] = run_simulation(g, c).dispersed_round;
  });
  report.runs = spec.seeds;
  report.dispersed = static_cast<std::size_t>(
      std::count_if(report.dispersed_rounds.begin(), report.dispersed_rounds.end(),
                    [](const auto& r) { return r.has_value(); }));
  return report;
}

}  // namespace dispersion
