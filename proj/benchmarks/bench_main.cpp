#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "cobranet/cobrad.hpp"
#include "cobranet/dcm_graph.hpp"
#include "cobranet/forward_dynamics.hpp"
#include "cobranet/gw_tree.hpp"
#include "cobranet/marks.hpp"

using namespace cobranet;

namespace {

DegreeSequence regular(std::size_t n, std::uint32_t d) {
  return DegreeSequence(std::vector<std::uint32_t>(n, d), std::vector<std::uint32_t>(n, d));
}

void BM_SampleDcm(benchmark::State& state) {
  const auto seq = regular(static_cast<std::size_t>(state.range(0)), 6);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_dcm(seq, rng));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(seq.m()));
}
BENCHMARK(BM_SampleDcm)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_SimulateDensity(benchmark::State& state) {
  Rng rng(2);
  const auto g = sample_dcm(regular(static_cast<std::size_t>(state.range(0)), 6), rng);
  const DensityOptions opts{0.3, 2, 10.0, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_density(g, opts, OpinionConfig::all_red(g.n()), rng));
  // About n * horizon events per run.
  state.SetItemsProcessed(state.iterations() * state.range(0) * 10);
}
BENCHMARK(BM_SimulateDensity)->Arg(1000)->Arg(10000);

void BM_CobradStep(benchmark::State& state) {
  Rng rng(3);
  const auto g = sample_dcm(regular(2000, 6), rng);
  std::vector<Vertex> all(g.n());
  std::iota(all.begin(), all.end(), Vertex{0});
  const auto stream = generate_marks(g, 5.0, 2, 0.3, rng).reverse();
  for (auto _ : state) {
    auto config = ParticleConfig::init_particles(all);
    for (std::size_t i = 0; i < stream.size(); ++i) step(g, config, stream[i]);
    benchmark::DoNotOptimize(config.particle_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(stream.size()));
}
BENCHMARK(BM_CobradStep);

void BM_TreeSurvival(benchmark::State& state) {
  const auto seq = regular(100, 6);
  const auto law = tree::offspring_law(seq);
  tree::TreeSimOptions opts;
  for (auto _ : state)
    benchmark::DoNotOptimize(tree::estimate_tree_survival(6, law, 0.3, opts, 1000, 4));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_TreeSurvival);

}  // namespace

BENCHMARK_MAIN();
