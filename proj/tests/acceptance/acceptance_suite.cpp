// Runs acceptance criteria 1-10 and prints one PASS/FAIL line for each.
// Usage: dispersion_acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dispersion/harness.hpp"
#include "dispersion/leader_election.hpp"
#include "dispersion/result_io.hpp"
#include "dispersion/runtime.hpp"
#include "oracles.hpp"

using namespace dispersion;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects violations; the first few are kept for the report.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++violations_;
    if (examples_.size() < 3) examples_.push_back(what);
  }
  std::size_t violations() const { return violations_; }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream out;
    out << summary << "; " << checks_ << " checks, " << violations_ << " violations";
    for (const std::string& e : examples_) out << " [" << e << "]";
    return {violations_ == 0, out.str()};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t violations_ = 0;
  std::vector<std::string> examples_;
};

ExperimentConfig make(GraphFamily family, std::size_t n, std::size_t k, AlgorithmTag tag, std::uint64_t seed,
                      std::size_t m = 0) {
  ExperimentConfig c;
  c.graph.family = family;
  c.graph.n = n;
  c.graph.m = m;
  c.graph.seed = seed;
  c.k = k;
  c.algorithm = tag;
  c.seed = seed;
  c.c_mem = 8;
  if (tag == AlgorithmTag::arbitrary_graph) c.placement = ArbitraryPlacement{};
  return c;
}

std::string label(const ExperimentConfig& c) {
  std::ostringstream out;
  out << to_string(c.graph.family) << " n=" << c.graph.n << " k=" << c.k << ' ' << to_string(c.algorithm)
      << " seed=" << c.seed;
  return out.str();
}

// ------------------------------------------------------------------ 1

Outcome correctness() {
  Tally t;
  std::size_t runs = 0;
  const GraphFamily families[] = {GraphFamily::ring, GraphFamily::path, GraphFamily::star, GraphFamily::tree,
                                  GraphFamily::grid, GraphFamily::complete, GraphFamily::random_connected};
  for (GraphFamily family : families) {
    for (std::size_t n : {4U, 5U, 8U, 13U, 16U, 32U, 64U}) {
      std::vector<AlgorithmTag> tags{AlgorithmTag::rooted_graph_logd, AlgorithmTag::rooted_graph_delta,
                                     AlgorithmTag::arbitrary_graph};
      if (family == GraphFamily::ring) tags.push_back(AlgorithmTag::rooted_ring);
      if (family == GraphFamily::path || family == GraphFamily::star || family == GraphFamily::tree) {
        tags.push_back(AlgorithmTag::rooted_tree);
      }
      const std::size_t m = family == GraphFamily::random_connected ? std::min(2 * n, n * (n - 1) / 2) : 0;
      for (AlgorithmTag tag : tags) {
        for (std::size_t k : {std::size_t{1}, n / 2, n, 2 * n + 1}) {
          for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            ExperimentConfig c = make(family, n, k, tag, seed, m);
            const bool exact = is_rooted(tag) && k == n;
            c.record_trace = exact;
            const SimulationResult r = run_simulation(c);
            ++runs;
            t.check(r.status == RunStatus::completed, label(c) + " " + std::string(to_string(r.status)));
            t.check(is_dispersed(r.final_counts, k), label(c) + " not dispersed");
            if (exact && !r.trace.empty()) {
              const auto& settled = r.trace.back().settled;
              t.check(std::all_of(settled.begin(), settled.end(), [](auto s) { return s == 1; }),
                      label(c) + " not one settler per node");
            }
          }
        }
      }
    }
  }
  return t.outcome(std::to_string(runs) + " runs");
}

// ------------------------------------------------------------------ 2

Outcome leader_election() {
  Tally t;
  std::ostringstream summary;
  constexpr std::size_t trials = 100000;
  for (std::size_t k : {1U, 2U, 3U, 8U, 64U, 1024U}) {
    std::vector<ElectionScratch> scratch(k);
    std::vector<RandomStream> rng(k);
    std::vector<double> rounds;
    rounds.reserve(trials);
    std::size_t bad_leaders = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      for (std::size_t i = 0; i < k; ++i) rng[i] = derive_stream(0xe1ec7, trial, k, i);
      SubroundChannel channel(default_subround_cap(k));
      const ElectionResult res = local_leader_election(scratch, rng, channel);
      const auto leaders = std::count_if(scratch.begin(), scratch.end(), [](const auto& s) { return s.leader; });
      if (leaders != 1 || !scratch[res.leader].leader) ++bad_leaders;
      rounds.push_back(static_cast<double>(res.sub_rounds));
    }
    const Distribution d = summarize(rounds);
    const double lg = std::log2(static_cast<double>(k));
    const bool mean_ok = k <= 2 ? (d.mean >= 1.5 && d.mean <= 3.0) : d.mean <= 2.0 * lg + 4.0;
    const double p99_limit = 10.0 * std::log2(static_cast<double>(k) + 2.0);
    t.check(bad_leaders == 0, "k=" + std::to_string(k) + " leader count");
    t.check(mean_ok, "k=" + std::to_string(k) + " mean " + std::to_string(d.mean));
    t.check(d.p99 <= p99_limit, "k=" + std::to_string(k) + " p99 " + std::to_string(d.p99));
    summary << (summary.tellp() > 0 ? ", " : "") << "k=" << k << " mean " << std::round(d.mean * 100) / 100
            << " p99 " << d.p99;
  }
  return t.outcome(summary.str());
}

// ------------------------------------------------------------------ 3 and 4

struct RoundBoundData {
  std::map<std::size_t, std::vector<std::size_t>> ring_peaks;  // n -> peak bits
};

Outcome round_bounds(RoundBoundData& data) {
  Tally t;
  std::size_t worst_permille = 0;  // worst dispersed_round relative to its bound
  auto record = [&](const ExperimentConfig& c, std::size_t bound) {
    const SimulationResult r = run_simulation(c);
    const bool ok = r.status == RunStatus::completed && r.dispersed_round && *r.dispersed_round <= bound;
    t.check(ok, label(c) + " round " + (r.dispersed_round ? std::to_string(*r.dispersed_round) : "none") +
                    " > " + std::to_string(bound));
    if (r.dispersed_round) worst_permille = std::max(worst_permille, 1000 * *r.dispersed_round / bound);
    return r;
  };
  for (std::size_t n : {16U, 256U, 4096U}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const SimulationResult r = record(make(GraphFamily::ring, n, n, AlgorithmTag::rooted_ring, seed), 2 * n);
      data.ring_peaks[n].push_back(r.max_peak_bits);
    }
  }
  for (std::size_t n : {16U, 256U, 1024U}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      record(make(GraphFamily::tree, n, n, AlgorithmTag::rooted_tree, seed), 4 * n);
    }
  }
  const std::pair<std::size_t, std::size_t> sizes[] = {{32, 64}, {128, 512}, {256, 2048}};
  for (auto [n, m] : sizes) {
    for (AlgorithmTag tag : {AlgorithmTag::rooted_graph_logd, AlgorithmTag::rooted_graph_delta}) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        record(make(GraphFamily::random_connected, n, n, tag, seed, m), 8 * m);
      }
    }
  }
  return t.outcome("worst run used " + std::to_string(worst_permille / 10) + "." +
                   std::to_string(worst_permille % 10) + "% of its bound");
}

Outcome memory_audit(const RoundBoundData& data) {
  Tally t;
  constexpr unsigned c_mem = 8;
  std::ostringstream summary;

  std::set<std::size_t> ring;
  for (const auto& [n, peaks] : data.ring_peaks) ring.insert(peaks.begin(), peaks.end());
  t.check(ring.size() == 1, "ring peak bits vary with n");
  if (!ring.empty()) summary << "ring " << *ring.begin() << " bits";

  auto peak = [&](const ExperimentConfig& c) {
    const SimulationResult r = run_simulation(c);
    t.check(r.status == RunStatus::completed, label(c) + " " + std::string(to_string(r.status)));
    return r.max_peak_bits;
  };

  const std::size_t tree_small = peak(make(GraphFamily::path, 16, 16, AlgorithmTag::rooted_tree, 1));
  const std::size_t tree_large = peak(make(GraphFamily::star, 513, 513, AlgorithmTag::rooted_tree, 1));
  t.check(tree_large >= tree_small && tree_large - tree_small <= c_mem * 9,
          "tree growth " + std::to_string(tree_large) + " - " + std::to_string(tree_small));
  summary << "; tree " << tree_small << " -> " << tree_large << " bits";

  std::vector<std::pair<double, double>> delta_points;
  for (std::size_t d : {2U, 4U, 8U, 16U, 32U, 64U, 128U, 256U}) {
    delta_points.emplace_back(static_cast<double>(d),
                              static_cast<double>(peak(make(GraphFamily::star, d + 1, d + 1,
                                                            AlgorithmTag::rooted_graph_delta, 1))));
  }
  double max_slope = 0.0;
  for (std::size_t i = 1; i < delta_points.size(); ++i) {
    const double slope = (delta_points[i].second - delta_points[i - 1].second) /
                         (delta_points[i].first - delta_points[i - 1].first);
    max_slope = std::max(max_slope, slope);
    t.check(slope >= 0.0 && slope <= c_mem, "delta slope " + std::to_string(slope));
  }
  summary << "; delta max slope " << max_slope;

  std::size_t worst_walk = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (auto [family, n, m] : {std::tuple{GraphFamily::random_connected, 64U, 256U},
                                std::tuple{GraphFamily::star, 200U, 0U}, std::tuple{GraphFamily::ring, 50U, 0U},
                                std::tuple{GraphFamily::complete, 32U, 0U}}) {
      ExperimentConfig c = make(family, n, n, AlgorithmTag::arbitrary_graph, seed, m);
      const PortGraph g = build_graph(c.graph);
      const SimulationResult r = run_simulation(g, c);
      const double limit = c_mem * (4.0 + std::log2(static_cast<double>(max_degree(g))));
      t.check(r.status == RunStatus::completed && static_cast<double>(r.max_peak_bits) <= limit,
              label(c) + " walk peak " + std::to_string(r.max_peak_bits));
      worst_walk = std::max(worst_walk, r.max_peak_bits);
    }
  }
  summary << "; walk peak " << worst_walk << " bits";
  return t.outcome(summary.str());
}

// ------------------------------------------------------------------ 5

Outcome dfs_equivalence() {
  Tally t;
  std::size_t shapes_total = 0;
  std::size_t runs = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    std::map<std::string, PortGraph> shapes;
    for (std::uint64_t seed = 1; seed <= 200000 && shapes.size() < oracle::unlabeled_tree_count(n); ++seed) {
      GraphSpec s;
      s.family = GraphFamily::tree;
      s.n = n;
      s.seed = seed;
      PortGraph g = build_graph(s);
      shapes.emplace(oracle::tree_shape(n, edge_set(g)), std::move(g));
    }
    t.check(shapes.size() == oracle::unlabeled_tree_count(n), "n=" + std::to_string(n) + " found " +
                                                                  std::to_string(shapes.size()) + " shapes");
    shapes_total += shapes.size();
    for (const auto& [shape, base] : shapes) {
      // A few port numberings of the same tree.
      for (std::uint64_t port_seed = 0; port_seed < 4; ++port_seed) {
        const PortGraph g = graph_from_edges(n, edge_set(base), port_seed == 0 ? std::nullopt
                                                                               : std::optional{port_seed});
        for (NodeId root = 0; root < n; ++root) {
          ExperimentConfig c = make(GraphFamily::tree, n, n, AlgorithmTag::rooted_tree, port_seed);
          c.placement = RootedPlacement{root};
          const SimulationResult r = run_simulation(g, c);
          ++runs;
          t.check(r.status == RunStatus::completed && settled_node_order(r) == oracle::dfs_preorder(g, root, n),
                  "shape " + shape + " root " + std::to_string(root));
        }
      }
    }
  }
  return t.outcome(std::to_string(shapes_total) + " tree shapes, " + std::to_string(runs) + " runs");
}

// ------------------------------------------------------------------ 6

Outcome termination_cascade() {
  Tally t;
  std::size_t pairs = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::uint64_t seed = 100 + i;
    const std::size_t n = 6 + i % 40;
    ExperimentConfig c;
    switch (i % 3) {
      case 0: c = make(GraphFamily::tree, n, n - i % 4, AlgorithmTag::rooted_tree, seed); break;
      case 1: c = make(GraphFamily::random_connected, n, n - i % 4, AlgorithmTag::rooted_graph_logd, seed, 2 * n); break;
      default: c = make(GraphFamily::random_connected, n, n - i % 4, AlgorithmTag::rooted_graph_delta, seed, 2 * n); break;
    }
    const SimulationResult r = run_simulation(c);
    if (r.status != RunStatus::completed) {
      t.check(false, label(c) + " " + std::string(to_string(r.status)));
      continue;
    }
    std::vector<NodeId> parent(n, kNoNode);
    std::vector<bool> settled(n, false);
    for (const SettleEvent& e : r.settle_events) {
      if (settled[e.node]) continue;
      settled[e.node] = true;
      parent[e.node] = e.from_node;
    }
    std::vector<std::size_t> term(n, 0);
    for (const TerminateEvent& e : r.terminate_events) term[e.node] = e.round;
    std::vector<bool> on_path(n, false);
    for (NodeId v = r.settle_events.back().node; v != kNoNode; v = parent[v]) on_path[v] = true;
    for (NodeId v = 0; v < n; ++v) {
      if (!settled[v]) continue;
      t.check(term[v] > 0, label(c) + " node " + std::to_string(v) + " never terminated");
      for (NodeId u = parent[v]; u != kNoNode; u = parent[u]) {
        if (on_path[u]) continue;
        ++pairs;
        t.check(term[v] < term[u], label(c) + " node " + std::to_string(v) + " after ancestor " + std::to_string(u));
      }
    }
  }
  return t.outcome("100 runs, " + std::to_string(pairs) + " descendant/ancestor pairs");
}

// ------------------------------------------------------------------ 7

Outcome cover_time() {
  Tally t;
  std::ostringstream summary;
  const std::tuple<GraphFamily, std::size_t, std::size_t, const char*> graphs[] = {
      {GraphFamily::ring, 16, 0, "cycle16"}, {GraphFamily::complete, 16, 0, "K16"},
      {GraphFamily::random_connected, 64, 256, "random64/256"}};
  for (const auto& [family, n, m, name] : graphs) {
    ExperimentConfig c = make(family, n, n, AlgorithmTag::arbitrary_graph, 11, m);
    c.max_rounds = 10'000'000;
    const CoverComparison cmp = compare_dispersion_to_cover(c, 50, 2000);
    t.check(cmp.failures == 0, std::string(name) + " failures");
    t.check(cmp.ratio.p95 <= 3.0, std::string(name) + " p95 " + std::to_string(cmp.ratio.p95));
    summary << (summary.tellp() > 0 ? ", " : "") << name << " cover " << std::round(cmp.cover.rounds.mean)
            << " p95 ratio " << std::round(cmp.ratio.p95 * 100) / 100;
  }
  return t.outcome(summary.str());
}

// ------------------------------------------------------------------ 8

Outcome k_extension() {
  Tally t;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (const ExperimentConfig& c : {make(GraphFamily::ring, 4, 10, AlgorithmTag::rooted_ring, seed),
                                      make(GraphFamily::path, 3, 7, AlgorithmTag::rooted_tree, seed),
                                      make(GraphFamily::tree, 8, 20, AlgorithmTag::rooted_tree, seed)}) {
      const SimulationResult r = run_simulation(c);
      const std::size_t cap = dispersion_cap(c.k, c.graph.n);
      t.check(r.status == RunStatus::completed, label(c) + " " + std::string(to_string(r.status)));
      t.check(std::all_of(r.final_counts.begin(), r.final_counts.end(), [&](auto x) { return x <= cap; }),
              label(c) + " over cap");
      if (c.algorithm == AlgorithmTag::rooted_ring) {
        t.check(r.dispersed_round && *r.dispersed_round <= 2 * c.k, label(c) + " slow");
      }
    }
  }
  return t.outcome("ring 4/10, path 3/7, tree 8/20 over 20 seeds");
}

// ------------------------------------------------------------------ 9

Outcome lower_bound() {
  Tally t;
  LowerBoundSpec spec;  // 8-port center, 2 visible ports, 20 seeds, 1e5 rounds
  const LowerBoundReport hidden = lower_bound_demo(spec);
  spec.restricted = false;
  const LowerBoundReport open = lower_bound_demo(spec);
  t.check(hidden.runs == 20 && hidden.dispersed == 0, std::to_string(hidden.dispersed) + " restricted runs dispersed");
  t.check(open.runs == 20 && open.dispersed == 20, std::to_string(open.dispersed) + " open runs dispersed");
  return t.outcome("restricted " + std::to_string(hidden.dispersed) + "/20 dispersed, open " +
                   std::to_string(open.dispersed) + "/20 dispersed");
}

// ------------------------------------------------------------------ 10

Outcome determinism() {
  Tally t;
  std::vector<ExperimentConfig> configs{
      make(GraphFamily::ring, 32, 40, AlgorithmTag::rooted_ring, 3),
      make(GraphFamily::tree, 40, 90, AlgorithmTag::rooted_tree, 4),
      make(GraphFamily::random_connected, 40, 40, AlgorithmTag::rooted_graph_logd, 5, 100),
      make(GraphFamily::random_connected, 30, 70, AlgorithmTag::rooted_graph_delta, 6, 80),
      make(GraphFamily::grid, 49, 49, AlgorithmTag::arbitrary_graph, 7),
      make(GraphFamily::random_connected, 40, 100, AlgorithmTag::arbitrary_graph, 8, 90),
  };
  LowerBoundSpec lb;
  configs.push_back(lower_bound_config(lb, 9));
  configs.back().max_rounds = 2000;
  for (ExperimentConfig& c : configs) {
    c.record_trace = true;
    const bool lb_case = c.restriction.has_value();
    const PortGraph g = lb_case ? lower_bound_graph(lb) : build_graph(c.graph);
    const SimulationResult a = run_simulation(g, c);
    const SimulationResult b = run_simulation(g, c);
    t.check(trace_to_jsonl(a) == trace_to_jsonl(b) && result_to_json(a) == result_to_json(b),
            label(c) + " differs between runs");
  }

  SweepSpec sweep;
  sweep.families = {GraphFamily::random_connected, GraphFamily::tree};
  sweep.n_values = {16, 32};
  sweep.k_values = {"n/2", "2n+1"};
  sweep.algorithms = {AlgorithmTag::rooted_graph_logd, AlgorithmTag::rooted_graph_delta};
  sweep.trials = 3;
  auto csv = [&](unsigned threads) {
    sweep.threads = threads;
    const auto rows = run_sweep(sweep);
    std::ostringstream out;
    write_report(out, rows, ReportFormat::csv, false);
    return out.str();
  };
  const std::string first = csv(1);
  t.check(first == csv(1), "sweep report differs between runs");
  t.check(first == csv(2), "sweep report differs across thread counts");
  return t.outcome(std::to_string(configs.size()) + " traced configs and one sweep");
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  RoundBoundData bounds;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"dispersion correctness", correctness},
      {"local leader election", leader_election},
      {"round bounds", [&] { return round_bounds(bounds); }},
      {"memory audit", [&] {
         if (bounds.ring_peaks.empty()) {
           for (std::size_t n : {16U, 256U, 4096U}) {
             bounds.ring_peaks[n].push_back(
                 run_simulation(make(GraphFamily::ring, n, n, AlgorithmTag::rooted_ring, 1)).max_peak_bits);
           }
         }
         return memory_audit(bounds);
       }},
      {"DFS oracle equivalence", dfs_equivalence},
      {"termination cascade", termination_cascade},
      {"random walk vs cover time", cover_time},
      {"more robots than nodes", k_extension},
      {"port-visibility lower bound", lower_bound},
      {"determinism", determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", number, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
