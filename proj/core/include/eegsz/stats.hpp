#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "eegsz/phasespace.hpp"
#include "eegsz/types.hpp"
#include "json.hpp"

namespace eegsz {

struct KWResult {
  double h = 0.0;
  double p = 1.0;      // may underflow to 0 for extreme H; see log_p
  double log_p = 0.0;  // natural log of the p-value
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// Natural log of the chi-squared (1 degree of freedom) survival function,
/// i.e. log(erfc(sqrt(h/2))). Accurate far beyond double underflow.
double chi2_df1_log_sf(double h);

/// Two-group Kruskal-Wallis test: average ranks for ties, standard tie
/// correction, chi-squared approximation with one degree of freedom.
/// Throws InvalidArgument on an empty group or non-finite value.
KWResult kruskal_wallis(std::span<const double> group_a, std::span<const double> group_b);

struct ScreeningReport {
  std::array<KWResult, kRhythmCount> results{};
  std::array<bool, kRhythmCount> passed{};
  double threshold = 0.05;
};

/// Tests each rhythm's area, S against SF. A rhythm passes when p < threshold.
/// Throws InvalidArgument if either class is absent.
ScreeningReport screen_features(const FeatureTable& table, double threshold = 0.05);

/// "rhythm,h,p,n_s,n_sf,pass"
std::string screening_csv(const ScreeningReport& report);
nlohmann::json screening_json(const ScreeningReport& report);

}  // namespace eegsz
