#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eegsz/phasespace.hpp"
#include "eegsz/types.hpp"
#include "json.hpp"

namespace eegsz {

enum class Distance { euclidean, cityblock };

std::string_view distance_name(Distance d) noexcept;
std::optional<Distance> parse_distance(std::string_view name) noexcept;

enum class Scaling { raw, zscore };

std::string_view scaling_name(Scaling s) noexcept;
std::optional<Scaling> parse_scaling(std::string_view name) noexcept;

/// How a split vote is settled. Only one policy exists: the label of the
/// single nearest neighbour wins. Equal distances are ordered by training
/// index.
enum class TieRule { nearest_neighbor };

struct KnnConfig {
  int k = 1;
  Distance distance = Distance::euclidean;
  TieRule tie_rule = TieRule::nearest_neighbor;
  Scaling scaling = Scaling::raw;  // applied by cross_validate, not by knn_classify
};

using FeaturePoint = std::array<double, 2>;

struct TrainingPoint {
  FeaturePoint x{};
  Label label = Label::seizure_free;
};

double distance(Distance metric, const FeaturePoint& p, const FeaturePoint& q) noexcept;

/// Majority label among the k nearest training points.
/// Throws InvalidArgument for an empty training set or k outside 1..|train|.
Label knn_classify(std::span<const TrainingPoint> train, const FeaturePoint& query,
                   const KnnConfig& cfg);

/// Counts with S as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;

  std::size_t total() const noexcept { return tp + fn + tn + fp; }
  void add(Label truth, Label predicted) noexcept;
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Percentages; a ratio with a zero denominator is left empty.
struct Metrics {
  std::optional<double> acc;
  std::optional<double> sen;
  std::optional<double> spe;
  std::optional<double> ppv;
  std::optional<double> npv;
};

/// Throws InvalidArgument for an all-zero matrix.
Metrics compute_metrics(const ConfusionMatrix& cm);

struct FoldAssignment {
  std::vector<int> fold;  // fold index per record, same order as the records
  std::uint64_t seed = 0;
  int n_folds = 10;
};

/// Seeded stratified split: each class is shuffled and dealt round-robin, so
/// every fold holds floor or ceil of (class size / n_folds) of each class.
/// Throws InvalidArgument if either class has fewer than n_folds records.
FoldAssignment stratified_folds(std::span<const Label> labels, std::uint64_t seed,
                                int n_folds = 10);

struct RhythmPair {
  Rhythm first = Rhythm::delta;
  Rhythm second = Rhythm::theta;

  std::string name() const;  // e.g. "alpha-beta"
  bool operator==(const RhythmPair&) const = default;
};

/// The ten unordered pairs, delta-theta first and beta-gamma last.
std::array<RhythmPair, 10> all_rhythm_pairs();

/// Tests every fold against a model trained on the other folds and pools the
/// predictions into one matrix whose total equals the table size.
ConfusionMatrix cross_validate(const FeatureTable& table, RhythmPair pair, const KnnConfig& cfg,
                               const FoldAssignment& folds);

struct EvalCell {
  RhythmPair pair;
  Distance distance = Distance::euclidean;
  int k = 1;
  ConfusionMatrix cm;
  Metrics metrics;
};

struct SweepOptions {
  std::vector<Distance> distances{Distance::euclidean, Distance::cityblock};
  int k_max = 10;
  Scaling scaling = Scaling::raw;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct EvalReport {
  std::vector<EvalCell> cells;  // pair-major, then distance, then k
  std::vector<EvalCell> best;   // per (pair, distance): highest accuracy, lowest k on ties
  std::uint64_t seed = 0;
  Scaling scaling = Scaling::raw;

  const EvalCell* find(RhythmPair pair, Distance d, int k) const noexcept;
  const EvalCell* find_best(RhythmPair pair, Distance d) const noexcept;
};

/// Runs every pair x distance x k (1..k_max) combination.
EvalReport sweep_pairs(const FeatureTable& table, const FoldAssignment& folds,
                       const SweepOptions& options = {});

/// One row per cell: pair,distance,k,tp,fn,tn,fp,acc,sen,spe,ppv,npv.
std::string eval_report_csv(const EvalReport& report);
nlohmann::json eval_report_json(const EvalReport& report);

/// Best-k rows of one distance: feature_set,acc,sen,spe,ppv,npv,k.
std::string best_k_table_csv(const EvalReport& report, Distance d);
nlohmann::json best_k_table_json(const EvalReport& report, Distance d);

}  // namespace eegsz
