#include <benchmark/benchmark.h>

#include "permatch/csbm.hpp"
#include "permatch/gibbs.hpp"
#include "permatch/permutation.hpp"
#include "permatch/rng.hpp"
#include "permatch/special_functions.hpp"
#include "permatch/summarize.hpp"

#include <vector>

using namespace permatch;

namespace {

Simulation planted(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const MixedScenario m = mixed_block_scenario(n);
  SimulationSpec spec;
  spec.n = n;
  spec.pi = uniform_given_partition(m.z, rng);
  spec.xi = m.xi;
  spec.noise = {0.01, 0.01};
  return simulate(spec, rng);
}

Permutation shuffled(std::size_t n, Rng& rng) {
  std::vector<Node> img(n);
  for (std::size_t i = 0; i < n; ++i)
    img[i] = static_cast<Node>(i);
  for (std::size_t i = n; i > 1; --i)
    std::swap(img[i - 1], img[rng.index(i)]);
  return Permutation(std::move(img));
}

} // namespace

static void BM_Sweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Simulation sim = planted(n, 1);
  SamplerConfig config;
  Rng rng(2);
  ChainState chain = init_state(sim.graphs, config, rng);
  for (auto _ : state)
    sweep(chain, sim.graphs, config, rng);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Sweep)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

static void BM_NodeMove(benchmark::State& state) {
  const Simulation sim = planted(40, 3);
  SamplerConfig config;
  Rng rng(4);
  ChainState chain = init_state(sim.graphs, config, rng);
  Node v = 0;
  for (auto _ : state) {
    node_move(chain, v, sim.graphs, config.hyper, rng);
    v = (v + 1) % 40;
  }
}
BENCHMARK(BM_NodeMove)->Unit(benchmark::kMicrosecond);

static void BM_Persalso(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  const Permutation center = shuffled(n, rng);
  std::vector<Permutation> draws;
  for (int s = 0; s < 500; ++s) {
    std::vector<Node> img(center.images().begin(), center.images().end());
    for (int t = 0; t < 3; ++t)
      std::swap(img[rng.index(n)], img[rng.index(n)]);
    draws.emplace_back(std::move(img));
  }
  const PosteriorPermSample sample(draws);
  SummaryConfig config;
  config.n_runs = 2;
  for (auto _ : state)
    benchmark::DoNotOptimize(persalso(sample, config, rng));
}
BENCHMARK(BM_Persalso)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_LogIncBeta(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(log_inc_beta(0.5, a, a + 3.0));
}
BENCHMARK(BM_LogIncBeta)->Arg(2)->Arg(50)->Arg(2000);

static void BM_CayleyDistance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(6);
  const Permutation a = shuffled(n, rng);
  const Permutation b = shuffled(n, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(cayley_distance(a, b));
}
BENCHMARK(BM_CayleyDistance)->Arg(40)->Arg(1000);

BENCHMARK_MAIN();
