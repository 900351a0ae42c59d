#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "boxspline/brute_force.hpp"
#include "boxspline/engine.hpp"
#include "boxspline/pipelines.hpp"
#include "boxspline/shape.hpp"
#include "boxspline/solver.hpp"

using namespace boxspline;

namespace {

Image random_image(int n) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  Image img(n, n);
  for (auto& v : img.data) v = u(rng);
  return img;
}

PipelinePolicy single_thread(BasisPolicy b) {
  PipelinePolicy p;
  p.basis = b;
  p.threads = 1;
  return p;
}

// Engine time against box width: flat in the width.
void BM_EngineConstantScales(benchmark::State& state) {
  const Image img = random_image(256);
  const auto basis = static_cast<BasisId>(state.range(1));
  EngineOptions opt;
  opt.threads = 1;
  const ScaleVector a = ScaleVector::uniform(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(filter_space_variant(img, a, basis, EdgePolicy::Zero, opt));
  state.SetItemsProcessed(state.iterations() * img.size());
}
BENCHMARK(BM_EngineConstantScales)
    ->ArgsProduct({{1, 4, 16, 64}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

// Direct summation grows with the kernel area.
void BM_BruteForce(benchmark::State& state) {
  const Image img = random_image(64);
  const KernelMap km(64, 64, BasisId::Theta, ScaleVector::uniform(static_cast<double>(state.range(0))));
  BruteForceOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_filter(img, km, EdgePolicy::Zero, opt));
}
BENCHMARK(BM_BruteForce)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const int n = 256;
  const Image img = random_image(n);
  const auto method = static_cast<Method>(state.range(0));
  const double s = static_cast<double>(state.range(1));
  const auto cm = CovarianceMap::constant(n, n, covariance_from_shape({s, 2, std::numbers::pi / 6}));
  const PipelinePolicy p = single_thread(method == Method::Dual ? BasisPolicy::Dual : BasisPolicy::Theta);
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(img, cm, method, p));
  state.SetItemsProcessed(state.iterations() * img.size());
}
BENCHMARK(BM_Pipeline)
    ->ArgsProduct({{0, 1, 2}, {1, 25, 100}})
    ->Unit(benchmark::kMillisecond);

void BM_SolveScales(benchmark::State& state) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Covariance> cs;
  for (int i = 0; i < 256; ++i) cs.push_back(covariance_from_shape({1 + 50 * u(rng), 1 + 4 * u(rng), 0.2}));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_scales(cs[i++ % cs.size()], BasisId::Theta));
}
BENCHMARK(BM_SolveScales);

}  // namespace
BENCHMARK_MAIN();
