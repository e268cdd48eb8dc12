#include "eegsz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "eegsz/error.hpp"
#include "eegsz/format.hpp"

namespace eegsz {

namespace {

// log(erfc(x)) for x >= 0.
double log_erfc(double x) {
  if (x < 20.0) return std::log(std::erfc(x));
  // Asymptotic series erfc(x) ~ exp(-x^2)/(x sqrt(pi)) * sum (-1)^n (2n-1)!! / (2x^2)^n.
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n <= 10; ++n) {
    term *= -(2.0 * n - 1.0) * inv;
    sum += term;
  }
  return -x * x - std::log(x) - 0.5 * std::log(std::numbers::pi) + std::log(sum);
}

}  // namespace

double chi2_df1_log_sf(double h) {
  if (std::isnan(h)) throw InvalidArgument("chi2_df1_log_sf: NaN statistic");
  if (h <= 0.0) return 0.0;
  return log_erfc(std::sqrt(h / 2.0));
}

KWResult kruskal_wallis(std::span<const double> group_a, std::span<const double> group_b) {
  if (group_a.empty() || group_b.empty()) {
    throw InvalidArgument("kruskal_wallis: both groups must be nonempty");
  }
  struct Entry {
    double value;
    int group;
  };
  std::vector<Entry> all;
  all.reserve(group_a.size() + group_b.size());
  for (double v : group_a) all.push_back({v, 0});
  for (double v : group_b) all.push_back({v, 1});
  for (const auto& e : all) {
    if (!std::isfinite(e.value)) throw InvalidArgument("kruskal_wallis: non-finite value");
  }
  std::sort(all.begin(), all.end(),
            [](const Entry& l, const Entry& r) { return l.value < r.value; });

  const double n = static_cast<double>(all.size());
  std::array<double, 2> rank_sum{0.0, 0.0};
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    const double run = static_cast<double>(j - i);
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) rank_sum[all[k].group] += avg_rank;
    tie_term += run * run * run - run;
    i = j;
  }

  KWResult res;
  res.n1 = group_a.size();
  res.n2 = group_b.size();
  const double n1 = static_cast<double>(res.n1);
  const double n2 = static_cast<double>(res.n2);
  const double correction = 1.0 - tie_term / (n * n * n - n);
  if (correction <= 0.0) {
    // Every value identical: no evidence of any difference.
    res.h = 0.0;
  } else {
    const double raw = 12.0 / (n * (n + 1.0)) *
                           (rank_sum[0] * rank_sum[0] / n1 + rank_sum[1] * rank_sum[1] / n2) -
                       3.0 * (n + 1.0);
    res.h = std::max(0.0, raw / correction);
  }
  res.log_p = chi2_df1_log_sf(res.h);
  res.p = std::exp(res.log_p);
  return res;
}

ScreeningReport screen_features(const FeatureTable& table, double threshold) {
  if (!(threshold >= 0.0) || threshold > 1.0) {
    throw InvalidArgument("screen_features: threshold must lie in [0, 1]");
  }
  ScreeningReport report;
  report.threshold = threshold;
  for (Rhythm r : kAllRhythms) {
    std::vector<double> s;
    std::vector<double> sf;
    for (const auto& row : table) {
      (row.label == Label::seizure ? s : sf).push_back(row.area(r));
    }
    if (s.empty() || sf.empty()) {
      throw InvalidArgument("screen_features: table must contain both S and SF rows");
    }
    report.results[index_of(r)] = kruskal_wallis(s, sf);
    report.passed[index_of(r)] = report.results[index_of(r)].log_p < std::log(threshold);
  }
  return report;
}

std::string screening_csv(const ScreeningReport& report) {
  std::ostringstream out;
  out << "rhythm,h,p,n_s,n_sf,pass\n";
  for (Rhythm r : kAllRhythms) {
    const auto& res = report.results[index_of(r)];
    out << rhythm_name(r) << ',' << format_double(res.h) << ',' << format_from_log(res.log_p)
        << ',' << res.n1 << ',' << res.n2 << ',' << (report.passed[index_of(r)] ? "true" : "false")
        << '\n';
  }
  return out.str();
}

nlohmann::json screening_json(const ScreeningReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (Rhythm r : kAllRhythms) {
    const auto& res = report.results[index_of(r)];
    rows.push_back({{"rhythm", rhythm_name(r)},
                    {"h", res.h},
                    {"p", format_from_log(res.log_p)},
                    {"log_p", res.log_p},
                    {"n_s", res.n1},
                    {"n_sf", res.n2},
                    {"pass", report.passed[index_of(r)]}});
  }
  return {{"threshold", report.threshold}, {"rhythms", std::move(rows)}};
}

}  // namespace eegsz
