#include <benchmark/benchmark.h>

#include <vector>

#include "dispersion/leader_election.hpp"
#include "dispersion/runtime.hpp"

using namespace dispersion;

namespace {

void BM_LeaderElection(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::vector<ElectionScratch> scratch(k);
  std::vector<RandomStream> rng(k);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    for (std::size_t i = 0; i < k; ++i) rng[i] = derive_stream(trial, 0, 0, i);
    SubroundChannel channel(default_subround_cap(k));
    benchmark::DoNotOptimize(local_leader_election(scratch, rng, channel));
    ++trial;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LeaderElection)->RangeMultiplier(8)->Range(2, 1024);

ExperimentConfig rooted(GraphFamily family, std::size_t n, std::size_t m, AlgorithmTag tag) {
  ExperimentConfig c;
  c.graph.family = family;
  c.graph.n = n;
  c.graph.m = m;
  c.graph.seed = 7;
  c.k = n;
  c.algorithm = tag;
  c.seed = 7;
  return c;
}

void run(benchmark::State& state, const ExperimentConfig& c) {
  const PortGraph g = build_graph(c.graph);
  std::size_t rounds = 0;
  for (auto _ : state) {
    const SimulationResult r = run_simulation(g, c);
    rounds += r.rounds_executed;
    benchmark::DoNotOptimize(r.dispersed_round);
  }
  state.counters["rounds/s"] = benchmark::Counter(static_cast<double>(rounds), benchmark::Counter::kIsRate);
}

void BM_RootedRing(benchmark::State& state) {
  run(state, rooted(GraphFamily::ring, static_cast<std::size_t>(state.range(0)), 0, AlgorithmTag::rooted_ring));
}
BENCHMARK(BM_RootedRing)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RootedTree(benchmark::State& state) {
  run(state, rooted(GraphFamily::tree, static_cast<std::size_t>(state.range(0)), 0, AlgorithmTag::rooted_tree));
}
BENCHMARK(BM_RootedTree)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RootedGraphLogD(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  run(state, rooted(GraphFamily::random_connected, n, 4 * n, AlgorithmTag::rooted_graph_logd));
}
BENCHMARK(BM_RootedGraphLogD)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RootedGraphDelta(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  run(state, rooted(GraphFamily::random_connected, n, 4 * n, AlgorithmTag::rooted_graph_delta));
}
BENCHMARK(BM_RootedGraphDelta)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RandomWalk(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ExperimentConfig c = rooted(GraphFamily::random_connected, n, 4 * n, AlgorithmTag::arbitrary_graph);
  c.placement = ArbitraryPlacement{};
  run(state, c);
}
BENCHMARK(BM_RandomWalk)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
