// Command-line front end: run, sweep, cover, demo-lb.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dispersion/config_io.hpp"
#include "dispersion/graph_gen.hpp"
#include "dispersion/graph_io.hpp"
#include "dispersion/harness.hpp"
#include "dispersion/result_io.hpp"
#include "dispersion/runtime.hpp"

namespace {

using namespace dispersion;

enum ExitCode : int { kOk = 0, kUsage = 1, kTimeout = 2, kAuditFailure = 3, kAborted = 4 };

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return kOk;
    case RunStatus::timeout: return kTimeout;
    case RunStatus::audit_failure: return kAuditFailure;
    case RunStatus::aborted: return kAborted;
  }
  return kAborted;
}

int exit_code(std::span<const ReportRow> rows) {
  int code = kOk;
  for (const ReportRow& r : rows) code = std::max(code, exit_code(r.status));
  return code;
}

// Graph and run flags shared by several subcommands. Strings stay empty when
// the flag is absent so config-file values survive.
struct GraphFlags {
  std::string family;
  std::string file;
  std::optional<std::size_t> n, m, rows, cols;
  std::optional<std::uint64_t> graph_seed;

  void add(CLI::App& app) {
    app.add_option("--graph", family, "ring|path|star|tree|grid|complete|random_connected");
    app.add_option("--graph-file", file, "graph in the line-oriented text format");
    app.add_option("--n", n, "node count");
    app.add_option("--m", m, "edge count (random_connected)");
    app.add_option("--rows", rows, "grid rows");
    app.add_option("--cols", cols, "grid columns");
    app.add_option("--graph-seed", graph_seed, "graph generator seed (default: --seed)");
  }

  void apply(GraphSpec& spec) const {
    if (!family.empty()) {
      const auto f = parse_graph_family(family);
      if (!f) throw ConfigError("unknown graph family '" + family + "'");
      spec.family = *f;
    }
    if (n) spec.n = *n;
    if (m) spec.m = *m;
    if (rows) spec.rows = *rows;
    if (cols) spec.cols = *cols;
    if (graph_seed) spec.seed = *graph_seed;
  }

  PortGraph load(const GraphSpec& spec) const {
    if (!file.empty()) {
      PortGraph g = read_graph_file(file);
      if (const auto issues = validate_graph(g); !issues.empty()) {
        throw ConfigError("graph file: " + std::string(to_string(issues.front().kind)) +
                          " violation at node " + std::to_string(issues.front().node) + ": " +
                          issues.front().detail);
      }
      return g;
    }
    return build_graph(spec);
  }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dispersion of anonymous mobile robots on port-labeled graphs"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run one configuration and print the result");
  GraphFlags run_graph;
  run_graph.add(*run);
  std::string config_path, algorithm, placement, audit, output, trace_path;
  std::optional<std::size_t> k, max_rounds;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> c_mem;
  run->add_option("--config", config_path, "key-value config file (flags override it)");
  run->add_option("--k", k, "robot count");
  run->add_option("--algorithm", algorithm,
                  "rooted-ring|rooted-tree|rooted-graph-logd|rooted-graph-delta|arbitrary-graph");
  run->add_option("--placement", placement, "rooted:<v>|arbitrary");
  run->add_option("--seed", seed, "64-bit run seed");
  run->add_option("--max-rounds", max_rounds, "round cap");
  run->add_option("--audit", audit, "memory audit on|off");
  run->add_option("--c-mem", c_mem, "audit constant");
  run->add_option("--output", output, "print a report row (csv|jsonl) instead of the result JSON");
  run->add_option("--trace", trace_path, "write the per-round trace as JSON lines ('-' = stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a key-value file");
  std::string sweep_path, sweep_output, sweep_out_path;
  std::optional<std::size_t> sweep_trials, sweep_max_rounds;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<unsigned> sweep_threads;
  bool no_wall = false;
  sweep->add_option("spec", sweep_path, "sweep spec file")->required();
  sweep->add_option("--output", sweep_output, "csv|jsonl");
  sweep->add_option("--out", sweep_out_path, "report path (default: spec 'output' or stdout)");
  sweep->add_option("--trials", sweep_trials, "trials per cell");
  sweep->add_option("--seed", sweep_seed, "base seed");
  sweep->add_option("--max-rounds", sweep_max_rounds, "round cap");
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = all cores)");
  sweep->add_flag("--no-wall-time", no_wall, "leave the wall_ms column empty");

  // cover
  auto* cover = app.add_subcommand("cover", "estimate the single-walk cover time of a graph");
  GraphFlags cover_graph;
  cover_graph.add(*cover);
  std::size_t cover_trials = 1000;
  std::uint64_t cover_seed = 1;
  cover->add_option("--trials", cover_trials, "independent walks");
  cover->add_option("--seed", cover_seed, "seed");

  // demo-lb
  auto* demo = app.add_subcommand("demo-lb", "port-visibility lower-bound demonstration");
  LowerBoundSpec lb;
  std::string lb_restrict = "on";
  demo->add_option("--degree", lb.center_degree, "degree of the star center");
  demo->add_option("--bits", lb.bits, "visible-port bits x (2^x ports shown)");
  demo->add_option("--restrict", lb_restrict, "on|off");
  demo->add_option("--trials,--seeds", lb.seeds, "number of seeds");
  demo->add_option("--seed", lb.base_seed, "base seed");
  demo->add_option("--max-rounds", lb.max_rounds, "round cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentConfig cfg;
      if (!config_path.empty()) cfg = experiment_from_key_values(read_key_value_file(config_path));
      run_graph.apply(cfg.graph);
      if (k) cfg.k = *k;
      if (!algorithm.empty()) {
        const auto tag = parse_algorithm(algorithm);
        if (!tag) throw ConfigError("unknown algorithm '" + algorithm + "'");
        cfg.algorithm = *tag;
      }
      if (!placement.empty()) cfg.placement = parse_placement(placement);
      if (seed) {
        cfg.seed = *seed;
        if (!run_graph.graph_seed && config_path.empty()) cfg.graph.seed = *seed;
      }
      if (max_rounds) cfg.max_rounds = *max_rounds;
      if (!audit.empty()) cfg.audit = parse_bool(audit);
      if (c_mem) cfg.c_mem = *c_mem;
      if (!trace_path.empty()) cfg.record_trace = true;

      const PortGraph g = run_graph.load(cfg.graph);
      if (!run_graph.file.empty()) {
        cfg.graph.n = g.node_count();
        cfg.graph.m = g.edge_count();
      }
      const SimulationResult result = run_simulation(g, cfg);
      if (!trace_path.empty()) {
        std::ofstream file;
        write_trace_jsonl(open_output(trace_path, file), result);
      }
      if (!output.empty()) {
        const ReportRow row = make_row(cfg, result, 0.0);
        write_report(std::cout, std::span(&row, 1), parse_report_format(output), false);
      } else {
        std::cout << result_to_json(result, 2) << '\n';
      }
      if (!result.message.empty() && result.status != RunStatus::completed) {
        std::cerr << "dispersion: " << result.message << '\n';
      }
      return exit_code(result.status);
    }

    if (*sweep) {
      SweepSpec spec = sweep_from_key_values(read_key_value_file(sweep_path));
      if (!sweep_output.empty()) spec.format = parse_report_format(sweep_output);
      if (!sweep_out_path.empty()) spec.output = sweep_out_path;
      if (sweep_trials) spec.trials = *sweep_trials;
      if (sweep_seed) spec.base_seed = *sweep_seed;
      if (sweep_max_rounds) spec.max_rounds = *sweep_max_rounds;
      if (sweep_threads) spec.threads = *sweep_threads;
      const std::vector<ReportRow> rows = run_sweep(spec);
      std::ofstream file;
      write_report(open_output(spec.output, file), rows, spec.format, !no_wall);
      return exit_code(rows);
    }

    if (*cover) {
      GraphSpec spec;
      cover_graph.apply(spec);
      const PortGraph g = cover_graph.load(spec);
      const CoverEstimate est = estimate_cover_time(g, cover_trials, cover_seed);
      nlohmann::ordered_json j;
      j["n"] = g.node_count();
      j["m"] = g.edge_count();
      j["trials"] = est.rounds.count;
      j["mean"] = est.rounds.mean;
      j["p50"] = est.rounds.p50;
      j["p95"] = est.rounds.p95;
      j["min"] = est.rounds.min;
      j["max"] = est.rounds.max;
      std::cout << j.dump(2) << '\n';
      return kOk;
    }

    if (*demo) {
      lb.restricted = parse_bool(lb_restrict);
      const LowerBoundReport report = lower_bound_demo(lb);
      nlohmann::ordered_json j;
      j["center_degree"] = lb.center_degree;
      j["bits"] = lb.bits;
      j["restricted"] = lb.restricted;
      j["max_rounds"] = lb.max_rounds;
      j["runs"] = report.runs;
      j["dispersed"] = report.dispersed;
      auto rounds = nlohmann::ordered_json::array();
      for (const auto& r : report.dispersed_rounds) {
        rounds.push_back(r ? nlohmann::ordered_json(*r) : nlohmann::ordered_json(nullptr));
      }
      j["dispersed_rounds"] = std::move(rounds);
      std::cout << j.dump(2) << '\n';
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "dispersion: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
