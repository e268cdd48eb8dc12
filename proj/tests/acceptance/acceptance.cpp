// Acceptance suite: one line per criterion, non-zero exit if any fails.
//
// Set EEGSZ_BONN_ROOT to an unpacked Bonn archive (directories Z O N F S) to
// run the real-corpus criterion; otherwise its synthetic replacement runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "eegsz/classifier.hpp"
#include "eegsz/commands.hpp"
#include "eegsz/config.hpp"
#include "eegsz/dataset.hpp"
#include "eegsz/phasespace.hpp"
#include "eegsz/pipeline.hpp"
#include "eegsz/spectral.hpp"
#include "eegsz/stats.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace eegsz;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s;
  std::function<Outcome()> body;
};

char buf[512];

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

std::vector<Label> labels_of(const FeatureTable& t) {
  std::vector<Label> out;
  for (const auto& r : t) out.push_back(r.label);
  return out;
}

Outcome filter_bank_partition() {
  const auto bounds = BoundarySet::for_sampling_rate(kBonnSamplingRate);
  const FilterBank bank(kBonnSamplingRate, 4096, bounds);
  const double edge = kRhythmCutoffsHz.back() * (1.0 - bounds.lambda);
  double worst = 0.0;
  std::size_t bins = 0;
  for (std::size_t k = 0; k < bank.n_fft(); ++k) {
    if (bank.bin_frequency(k) > edge) continue;
    double sum = 0.0;
    for (Rhythm r : kAllRhythms) sum += bank.response(r, k) * bank.response(r, k);
    worst = std::max(worst, std::abs(sum - 1.0));
    ++bins;
  }
  const bool ok = worst <= 1e-9 && std::abs(bounds.lambda - 0.1825) <= 0.0005;
  return {ok, fmt("lambda=%.10f, max |sum-1|=%.3g over %zu bins", bounds.lambda, worst, bins)};
}

Outcome energy_partition() {
  std::mt19937_64 rng(20240101);
  const std::size_t n = 4096;
  const FilterBank bank = build_filter_bank(kBonnSamplingRate, n,
                                            BoundarySet::for_sampling_rate(kBonnSamplingRate));
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = oracle::bandlimited_signal(rng, n, kBonnSamplingRate, 55.0, 8);
    double total = 0.0;
    for (double v : x) total += v * v;
    const auto e = band_energies(decompose(x, bank));
    double sum = 0.0;
    for (double v : e) sum += v;
    const double rel = std::abs(sum - total) / total;
    worst = std::max(worst, rel);
    if (rel > 1e-6) ++failures;
  }
  return {failures == 0, fmt("worst relative error %.3g, %d/100 signals above 1e-6", worst, failures)};
}

Outcome ellipse_oracles() {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> coef(-0.99, 0.99);
  std::uniform_int_distribution<int> len(16, 4096);
  double worst_det = 0.0, worst_eig = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> v(static_cast<std::size_t>(len(rng)));
    const double a = coef(rng), scale = std::exp(3.0 * g(rng));
    double acc = 0.0;
    for (double& x : v) {
      acc = a * acc + g(rng);
      x = scale * acc;
    }
    const auto p = reconstruct_phase_space(v);
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < p.size(); ++k) {
      xs.push_back(p.x(k));
      ys.push_back(p.y(k));
    }
    const double area = ellipse_area(p).area;
    worst_det = std::max(worst_det, std::abs(area - oracle::det_area(xs, ys)) / area);
    worst_eig = std::max(worst_eig, std::abs(area - oracle::eigen_area(xs, ys)) / area);
  }
  return {worst_det <= 1e-9 && worst_eig <= 1e-9,
          fmt("worst relative error: determinant %.3g, eigen %.3g", worst_det, worst_eig)};
}

Outcome knn_oracle() {
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<int> size(10, 50);
  std::uniform_int_distribution<int> grid(-5, 5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  std::bernoulli_distribution coin(0.5);
  int checks = 0, mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const bool ties = i % 2 == 0;
    auto draw = [&] { return ties ? static_cast<double>(grid(rng)) : u(rng); };
    std::vector<TrainingPoint> train(static_cast<std::size_t>(size(rng)));
    for (auto& t : train) t = {{draw(), draw()}, coin(rng) ? Label::seizure : Label::seizure_free};
    const FeaturePoint q{draw(), draw()};
    for (Distance d : {Distance::euclidean, Distance::cityblock}) {
      for (int k = 1; k <= 10; ++k) {
        KnnConfig cfg;
        cfg.k = k;
        cfg.distance = d;
        ++checks;
        if (knn_classify(train, q, cfg) != oracle::knn_by_full_sort(train, q, k, d)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt("%d mismatches in %d classifications", mismatches, checks)};
}

Outcome kruskal_hand_case() {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const auto r = kruskal_wallis(a, b);
  return {std::abs(r.h - 3.857) <= 0.001 && std::abs(r.p - 0.0495) <= 0.0005,
          fmt("H=%.9f p=%.9f", r.h, r.p)};
}

Outcome bonn_corpus(const fs::path& root) {
  const auto manifest = load_dataset(root, DatasetLayout::bonn_archive());
  const auto table = compute_feature_table(manifest);
  const auto screening = screen_features(table);

  std::array<std::size_t, kRhythmCount> order{0, 1, 2, 3, 4};
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return screening.results[x].log_p < screening.results[y].log_p;
  });
  bool all_small = true;
  for (const auto& r : screening.results) all_small = all_small && r.log_p < std::log(1e-20);
  std::array<std::size_t, 3> top{order[0], order[1], order[2]};
  std::sort(top.begin(), top.end());
  const bool top_three = top == std::array<std::size_t, 3>{index_of(Rhythm::alpha),
                                                            index_of(Rhythm::beta),
                                                            index_of(Rhythm::gamma)};

  const auto folds = stratified_folds(labels_of(table), 1);
  const auto report = sweep_pairs(table, folds);
  const RhythmPair ab{Rhythm::alpha, Rhythm::beta};
  const auto* city = report.find_best(ab, Distance::cityblock);
  const auto* eucl = report.find_best(ab, Distance::euclidean);
  const double acc_c = *city->metrics.acc, acc_e = *eucl->metrics.acc;

  std::string pvals;
  for (Rhythm r : kAllRhythms) {
    pvals += std::string(rhythm_name(r)) + "=" +
             fmt("%.3g", screening.results[index_of(r)].log_p / std::log(10.0)) + " ";
  }
  return {all_small && top_three && acc_c >= 96.5 && acc_e >= 96.5,
          fmt("%zu records; log10 p: ", table.size()) + pvals +
              fmt("; alpha-beta best acc cityblock %.2f (k=%d), euclidean %.2f (k=%d)", acc_c,
                  city->k, acc_e, eucl->k)};
}

FeatureTable synthetic_features(std::uint64_t seed) {
  const auto specs = cli::synth_preset("separable", 20, 4096, kBonnSamplingRate, seed);
  return compute_feature_table(synth_fixture(specs));
}

Outcome synthetic_replacement() {
  const std::uint64_t seed = cli::RunConfig{}.seed;
  const auto table = synthetic_features(seed);
  const auto folds = stratified_folds(labels_of(table), seed);
  const auto report = sweep_pairs(table, folds);
  int perfect = 0;
  for (const auto& pair : all_rhythm_pairs()) {
    for (Distance d : {Distance::euclidean, Distance::cityblock}) {
      const auto* c = report.find(pair, d, 1);
      if (c && *c->metrics.acc == 100.0) ++perfect;
    }
  }

  // Same records, labels dealt by a seeded Fisher-Yates shuffle.
  auto permuted = table;
  std::mt19937_64 rng(seed);
  auto labels = labels_of(table);
  for (std::size_t i = labels.size() - 1; i > 0; --i) {
    std::swap(labels[i], labels[rng() % (i + 1)]);
  }
  for (std::size_t i = 0; i < labels.size(); ++i) permuted[i].label = labels[i];
  const auto null_report = sweep_pairs(permuted, stratified_folds(labels, seed));
  double sum = 0.0, lo = 100.0, hi = 0.0;
  for (const auto& c : null_report.cells) {
    sum += *c.metrics.acc;
    lo = std::min(lo, *c.metrics.acc);
    hi = std::max(hi, *c.metrics.acc);
  }
  const double mean = sum / static_cast<double>(null_report.cells.size());
  const double majority = 50.0;

  const auto again = sweep_pairs(synthetic_features(seed), folds);
  const bool deterministic = eval_report_csv(again) == eval_report_csv(report) &&
                             eval_report_csv(sweep_pairs(permuted, stratified_folds(labels, seed))) ==
                                 eval_report_csv(null_report);

  return {perfect == 20 && std::abs(mean - majority) <= 10.0 && deterministic,
          fmt("%d/20 pair-distance cells at 100%% for k=1; permuted mean acc %.2f%% "
              "(range %.1f-%.1f) vs majority %.1f%%; deterministic=%s",
              perfect, mean, lo, hi, majority, deterministic ? "yes" : "no")};
}

using Snapshot = std::map<fs::path, std::string>;

// Runs synth -> features -> evaluate into fixed paths and reads back every
// CSV and JSON report, so both runs see exactly the same configuration.
Snapshot run_pipeline(const fs::path& base) {
  fs::remove_all(base);
  cli::RunConfig cfg;
  cfg.out_dir = base / "corpus";
  cfg.per_class = 15;
  cli::write_outputs(cfg.out_dir, cli::run_synth(cfg));
  cfg.data_root = cfg.out_dir;
  cfg.out_dir = base / "features";
  cli::write_outputs(cfg.out_dir, cli::run_features(cfg));
  cfg.out_dir = base / "eval";
  cli::write_outputs(cfg.out_dir, cli::run_evaluate(cfg));

  Snapshot snap;
  for (const auto& entry : fs::recursive_directory_iterator(base)) {
    const auto ext = entry.path().extension();
    if (ext == ".csv" || ext == ".json") {
      snap[fs::relative(entry.path(), base)] = testing::read_file(entry.path());
    }
  }
  return snap;
}

Outcome end_to_end_determinism() {
  testing::TempDir dir;
  const auto first = run_pipeline(dir.path() / "run");
  const auto second = run_pipeline(dir.path() / "run");
  int differing = 0;
  for (const auto& [path, content] : first) {
    const auto it = second.find(path);
    if (it == second.end() || it->second != content) ++differing;
  }
  const bool ok = !first.empty() && first.size() == second.size() && differing == 0;
  return {ok, fmt("%zu CSV/JSON files compared, %d differ", first.size(), differing)};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"1 filter-bank partition of unity and lambda", 1.0, filter_bank_partition},
      {"2 energy partition below 55 Hz", 5.0, energy_partition},
      {"3 ellipse area vs determinant and eigen oracles", 5.0, ellipse_oracles},
      {"4 knn vs exhaustive-sort oracle", 5.0, knn_oracle},
      {"5 kruskal-wallis hand case", 1.0, kruskal_hand_case},
  };
  if (const char* root = std::getenv("EEGSZ_BONN_ROOT"); root && *root) {
    criteria.push_back({"6 bonn corpus screening and alpha-beta accuracy", 120.0,
                        [p = fs::path(root)] { return bonn_corpus(p); }});
  } else {
    criteria.push_back({"7 synthetic separable and permuted fixtures", 120.0, synthetic_replacement});
  }
  criteria.push_back({"8 end-to-end determinism", 120.0, end_to_end_determinism});

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("[%s] criterion %s: %s; %.3f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL",
                c.name.c_str(), o.detail.c_str(), secs, c.time_limit_s,
                in_time ? "" : " over time limit");
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
