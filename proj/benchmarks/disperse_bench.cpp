#include <benchmark/benchmark.h>

#include <numbers>

#include "disperse/bounds.hpp"
#include "disperse/construct.hpp"
#include "disperse/dispersion.hpp"
#include "disperse/nets.hpp"

namespace {

using namespace disperse;

NetParams params(std::size_t dim, double eps) { return make_net_params(dim, eps, theorem_params(eps).delta); }

// Refined until delta*|N| >= e, as the construction needs.
NetParams construct_params(std::size_t dim, double eps, BoxKind kind) {
  NetParams p = params(dim, eps);
  p.grid_m = resolution_for_min_size(dim, eps, p.delta, kind, std::numbers::e / p.delta);
  return p;
}

void BM_BuildNet(benchmark::State& state) {
  const auto kind = state.range(1) ? BoxKind::torus : BoxKind::cube;
  const auto p = params(static_cast<std::size_t>(state.range(0)), 0.3);
  std::size_t size = 0;
  for (auto _ : state) {
    Net net = build_net(p, kind);
    size = net.size();
    benchmark::DoNotOptimize(net);
  }
  state.counters["elements"] = static_cast<double>(size);
}
BENCHMARK(BM_BuildNet)->ArgsProduct({{1, 2, 3}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_MissedBy(benchmark::State& state) {
  Net net = build_net(params(static_cast<std::size_t>(state.range(0)), 0.3), BoxKind::cube);
  const auto M = phase1_size(net.params().delta, net.size());
  auto sample = sample_uniform(M, net.dim(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(net.missed_by(sample));
  state.counters["elements"] = static_cast<double>(net.size());
  state.counters["points"] = static_cast<double>(M);
}
BENCHMARK(BM_MissedBy)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_TwoPhase(benchmark::State& state) {
  Net net = build_net(construct_params(static_cast<std::size_t>(state.range(0)), 0.5, BoxKind::cube), BoxKind::cube);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(two_phase(net, ++seed));
}
BENCHMARK(BM_TwoPhase)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_LargestEmptyBox(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto kind = state.range(2) ? BoxKind::torus : BoxKind::cube;
  auto ps = sample_uniform(static_cast<std::size_t>(state.range(1)), dim, 7);
  for (auto _ : state) benchmark::DoNotOptimize(exact_dispersion(ps, kind));
}
BENCHMARK(BM_LargestEmptyBox)
    ->ArgsProduct({{2}, {32, 64, 128, 256}, {0, 1}})
    ->ArgsProduct({{3}, {32, 64, 128}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_GridOracle(benchmark::State& state) {
  auto ps = sample_uniform(8, 2, 3);
  const auto g = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grid_oracle(ps, g, BoxKind::cube));
}
BENCHMARK(BM_GridOracle)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
