#include <benchmark/benchmark.h>

#include <random>

#include "eegsz/classifier.hpp"
#include "eegsz/phasespace.hpp"
#include "eegsz/pipeline.hpp"
#include "eegsz/spectral.hpp"
#include "eegsz/stats.hpp"

using namespace eegsz;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 50.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

FeatureTable random_table(std::size_t n_s, std::size_t n_sf) {
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> area(8.0, 1.0);
  FeatureTable t;
  for (std::size_t i = 0; i < n_s + n_sf; ++i) {
    FeatureRow row;
    row.id = std::to_string(i);
    row.label = i < n_s ? Label::seizure : Label::seizure_free;
    for (double& a : row.areas) a = area(rng) * (row.label == Label::seizure ? 3.0 : 1.0);
    t.push_back(row);
  }
  return t;
}

void BM_FilterBank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto bounds = BoundarySet::for_sampling_rate(kBonnSamplingRate);
  for (auto _ : state) benchmark::DoNotOptimize(build_filter_bank(kBonnSamplingRate, n, bounds));
}
BENCHMARK(BM_FilterBank)->Arg(4096);

void BM_Decompose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto bank = build_filter_bank(kBonnSamplingRate, n,
                                      BoundarySet::for_sampling_rate(kBonnSamplingRate));
  const auto x = noise(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(x, bank));
}
BENCHMARK(BM_Decompose)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_EllipseArea(benchmark::State& state) {
  const auto portrait = reconstruct_phase_space(noise(4096, 2));
  for (auto _ : state) benchmark::DoNotOptimize(ellipse_area(portrait));
}
BENCHMARK(BM_EllipseArea);

void BM_KruskalWallis(benchmark::State& state) {
  const auto a = noise(100, 4), b = noise(200, 5);
  for (auto _ : state) benchmark::DoNotOptimize(kruskal_wallis(a, b));
}
BENCHMARK(BM_KruskalWallis);

void BM_Sweep(benchmark::State& state) {
  const auto table = random_table(100, 200);
  std::vector<Label> labels;
  for (const auto& r : table) labels.push_back(r.label);
  const auto folds = stratified_folds(labels, 1);
  SweepOptions opt;
  opt.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_pairs(table, folds, opt));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
