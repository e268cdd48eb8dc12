#include "eegsz/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "eegsz/error.hpp"
#include "eegsz/format.hpp"

namespace eegsz {

std::string_view distance_name(Distance d) noexcept {
  return d == Distance::euclidean ? "euclidean" : "cityblock";
}

std::optional<Distance> parse_distance(std::string_view name) noexcept {
  if (name == "euclidean") return Distance::euclidean;
  if (name == "cityblock") return Distance::cityblock;
  return std::nullopt;
}

std::string_view scaling_name(Scaling s) noexcept { return s == Scaling::raw ? "raw" : "zscore"; }

std::optional<Scaling> parse_scaling(std::string_view name) noexcept {
  if (name == "raw") return Scaling::raw;
  if (name == "zscore") return Scaling::zscore;
  return std::nullopt;
}

double distance(Distance metric, const FeaturePoint& p, const FeaturePoint& q) noexcept {
  const double dx = p[0] - q[0];
  const double dy = p[1] - q[1];
  if (metric == Distance::cityblock) return std::abs(dx) + std::abs(dy);
  return std::sqrt(dx * dx + dy * dy);
}

namespace {

// Monotone in the true distance; skips the square root.
double ranking_key(Distance metric, const FeaturePoint& p, const FeaturePoint& q) noexcept {
  const double dx = p[0] - q[0];
  const double dy = p[1] - q[1];
  if (metric == Distance::cityblock) return std::abs(dx) + std::abs(dy);
  return dx * dx + dy * dy;
}

}  // namespace

Label knn_classify(std::span<const TrainingPoint> train, const FeaturePoint& query,
                   const KnnConfig& cfg) {
  if (train.empty()) throw InvalidArgument("knn_classify: empty training set");
  if (cfg.k < 1 || static_cast<std::size_t>(cfg.k) > train.size()) {
    throw InvalidArgument("knn_classify: k=" + std::to_string(cfg.k) + " outside 1.." +
                          std::to_string(train.size()));
  }

  struct Candidate {
    double key;
    std::size_t index;
  };
  std::vector<Candidate> candidates(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    candidates[i] = {ranking_key(cfg.distance, train[i].x, query), i};
  }
  const auto k = static_cast<std::size_t>(cfg.k);
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), [](const Candidate& l, const Candidate& r) {
                      return l.key < r.key || (l.key == r.key && l.index < r.index);
                    });

  std::size_t seizure_votes = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (train[candidates[i].index].label == Label::seizure) ++seizure_votes;
  }
  const std::size_t other_votes = k - seizure_votes;
  if (seizure_votes > other_votes) return Label::seizure;
  if (other_votes > seizure_votes) return Label::seizure_free;
  return train[candidates[0].index].label;
}

void ConfusionMatrix::add(Label truth, Label predicted) noexcept {
  if (truth == Label::seizure) {
    (predicted == Label::seizure ? tp : fn) += 1;
  } else {
    (predicted == Label::seizure_free ? tn : fp) += 1;
  }
}

namespace {

std::optional<double> percent(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Metrics compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw InvalidArgument("compute_metrics: empty confusion matrix");
  Metrics m;
  m.acc = percent(cm.tp + cm.tn, cm.total());
  m.sen = percent(cm.tp, cm.tp + cm.fn);
  m.spe = percent(cm.tn, cm.tn + cm.fp);
  m.ppv = percent(cm.tp, cm.tp + cm.fp);
  m.npv = percent(cm.tn, cm.tn + cm.fn);
  return m;
}

namespace {

// Unbiased draw from [0, bound) by rejection; std::uniform_int_distribution
// is implementation-defined.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

}  // namespace

FoldAssignment stratified_folds(std::span<const Label> labels, std::uint64_t seed, int n_folds) {
  if (n_folds < 2) throw InvalidArgument("stratified_folds: need at least 2 folds");
  std::vector<std::size_t> seizure;
  std::vector<std::size_t> seizure_free;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::seizure ? seizure : seizure_free).push_back(i);
  }
  const auto folds = static_cast<std::size_t>(n_folds);
  if (seizure.size() < folds || seizure_free.size() < folds) {
    throw InvalidArgument("stratified_folds: each class needs at least " + std::to_string(n_folds) +
                          " records (have " + std::to_string(seizure.size()) + " S, " +
                          std::to_string(seizure_free.size()) + " SF)");
  }

  std::mt19937_64 rng(seed);
  shuffle(seizure, rng);
  shuffle(seizure_free, rng);

  FoldAssignment out;
  out.seed = seed;
  out.n_folds = n_folds;
  out.fold.assign(labels.size(), -1);
  // The second class continues where the first stopped so fold sizes stay level.
  std::size_t next = 0;
  for (const auto* group : {&seizure, &seizure_free}) {
    for (std::size_t idx : *group) {
      out.fold[idx] = static_cast<int>(next % folds);
      ++next;
    }
  }
  return out;
}

std::string RhythmPair::name() const {
  return std::string(rhythm_name(first)) + "-" + std::string(rhythm_name(second));
}

std::array<RhythmPair, 10> all_rhythm_pairs() {
  std::array<RhythmPair, 10> pairs{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < kRhythmCount; ++i) {
    for (std::size_t j = i + 1; j < kRhythmCount; ++j) {
      pairs[n++] = {kAllRhythms[i], kAllRhythms[j]};
    }
  }
  return pairs;
}

namespace {

struct AxisScale {
  std::array<double, 2> mean{0.0, 0.0};
  std::array<double, 2> inv_sd{1.0, 1.0};

  FeaturePoint apply(const FeaturePoint& p) const noexcept {
    return {(p[0] - mean[0]) * inv_sd[0], (p[1] - mean[1]) * inv_sd[1]};
  }
};

AxisScale fit_zscore(std::span<const TrainingPoint> train) {
  AxisScale s;
  const double n = static_cast<double>(train.size());
  for (int axis = 0; axis < 2; ++axis) {
    double mean = 0.0;
    for (const auto& t : train) mean += t.x[axis];
    mean /= n;
    double ss = 0.0;
    for (const auto& t : train) ss += (t.x[axis] - mean) * (t.x[axis] - mean);
    const double sd = train.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.mean[axis] = mean;
    s.inv_sd[axis] = sd > 0.0 ? 1.0 / sd : 1.0;
  }
  return s;
}

}  // namespace

ConfusionMatrix cross_validate(const FeatureTable& table, RhythmPair pair, const KnnConfig& cfg,
                               const FoldAssignment& folds) {
  if (pair.first == pair.second) {
    throw InvalidArgument("cross_validate: pair must name two distinct rhythms");
  }
  if (folds.fold.size() != table.size()) {
    throw InvalidArgument("cross_validate: fold assignment does not match the feature table");
  }
  auto point_of = [&](const FeatureRow& row) -> FeaturePoint {
    return {row.area(pair.first), row.area(pair.second)};
  };

  ConfusionMatrix cm;
  std::vector<TrainingPoint> train;
  train.reserve(table.size());
  for (int f = 0; f < folds.n_folds; ++f) {
    train.clear();
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (folds.fold[i] != f) train.push_back({point_of(table[i]), table[i].label});
    }
    if (train.size() == table.size()) continue;  // empty fold

    AxisScale scale;
    if (cfg.scaling == Scaling::zscore) {
      scale = fit_zscore(train);
      for (auto& t : train) t.x = scale.apply(t.x);
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (folds.fold[i] != f) continue;
      cm.add(table[i].label, knn_classify(train, scale.apply(point_of(table[i])), cfg));
    }
  }
  return cm;
}

const EvalCell* EvalReport::find(RhythmPair pair, Distance d, int k) const noexcept {
  for (const auto& c : cells) {
    if (c.pair == pair && c.distance == d && c.k == k) return &c;
  }
  return nullptr;
}

const EvalCell* EvalReport::find_best(RhythmPair pair, Distance d) const noexcept {
  for (const auto& c : best) {
    if (c.pair == pair && c.distance == d) return &c;
  }
  return nullptr;
}

EvalReport sweep_pairs(const FeatureTable& table, const FoldAssignment& folds,
                       const SweepOptions& options) {
  if (options.k_max < 1) throw InvalidArgument("sweep_pairs: k_max must be at least 1");
  if (options.distances.empty()) throw InvalidArgument("sweep_pairs: no distance selected");

  EvalReport report;
  report.seed = folds.seed;
  report.scaling = options.scaling;
  for (const auto& pair : all_rhythm_pairs()) {
    for (Distance d : options.distances) {
      for (int k = 1; k <= options.k_max; ++k) {
        EvalCell cell;
        cell.pair = pair;
        cell.distance = d;
        cell.k = k;
        report.cells.push_back(cell);
      }
    }
  }

  // Cells are independent; each worker fills its own slots.
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(report.cells.size()));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned worker) {
    try {
      for (std::size_t i = worker; i < report.cells.size(); i += threads) {
        auto& cell = report.cells[i];
        KnnConfig cfg;
        cfg.k = cell.k;
        cfg.distance = cell.distance;
        cfg.scaling = options.scaling;
        cell.cm = cross_validate(table, cell.pair, cfg, folds);
        cell.metrics = compute_metrics(cell.cm);
      }
    } catch (...) {
      errors[worker] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (const auto& pair : all_rhythm_pairs()) {
    for (Distance d : options.distances) {
      const EvalCell* best = nullptr;
      for (int k = 1; k <= options.k_max; ++k) {
        const EvalCell* c = report.find(pair, d, k);
        if (best == nullptr || c->cm.tp + c->cm.tn > best->cm.tp + best->cm.tn) best = c;
      }
      report.best.push_back(*best);
    }
  }
  return report;
}

namespace {

std::string metric_text(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("undefined");
}

nlohmann::json metric_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json cell_json(const EvalCell& c) {
  return {{"pair", c.pair.name()},
          {"distance", distance_name(c.distance)},
          {"k", c.k},
          {"tp", c.cm.tp},
          {"fn", c.cm.fn},
          {"tn", c.cm.tn},
          {"fp", c.cm.fp},
          {"acc", metric_json(c.metrics.acc)},
          {"sen", metric_json(c.metrics.sen)},
          {"spe", metric_json(c.metrics.spe)},
          {"ppv", metric_json(c.metrics.ppv)},
          {"npv", metric_json(c.metrics.npv)}};
}

}  // namespace

std::string eval_report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "pair,distance,k,tp,fn,tn,fp,acc,sen,spe,ppv,npv\n";
  for (const auto& c : report.cells) {
    out << c.pair.name() << ',' << distance_name(c.distance) << ',' << c.k << ',' << c.cm.tp << ','
        << c.cm.fn << ',' << c.cm.tn << ',' << c.cm.fp << ',' << metric_text(c.metrics.acc) << ','
        << metric_text(c.metrics.sen) << ',' << metric_text(c.metrics.spe) << ','
        << metric_text(c.metrics.ppv) << ',' << metric_text(c.metrics.npv) << '\n';
  }
  return out.str();
}

nlohmann::json eval_report_json(const EvalReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) cells.push_back(cell_json(c));
  nlohmann::json best = nlohmann::json::array();
  for (const auto& c : report.best) best.push_back(cell_json(c));
  return {{"seed", report.seed},
          {"scaling", scaling_name(report.scaling)},
          {"cells", std::move(cells)},
          {"best", std::move(best)}};
}

std::string best_k_table_csv(const EvalReport& report, Distance d) {
  std::ostringstream out;
  out << "feature_set,acc,sen,spe,ppv,npv,k\n";
  for (const auto& c : report.best) {
    if (c.distance != d) continue;
    out << c.pair.name() << ',' << metric_text(c.metrics.acc) << ',' << metric_text(c.metrics.sen)
        << ',' << metric_text(c.metrics.spe) << ',' << metric_text(c.metrics.ppv) << ','
        << metric_text(c.metrics.npv) << ',' << c.k << '\n';
  }
  return out.str();
}

nlohmann::json best_k_table_json(const EvalReport& report, Distance d) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : report.best) {
    if (c.distance == d) rows.push_back(cell_json(c));
  }
  return {{"distance", distance_name(d)}, {"rows", std::move(rows)}};
}

}  // namespace eegsz
