#include "eegsz/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <thread>
#include <utility>

#include "eegsz/error.hpp"

namespace eegsz {

FilterBank filter_bank_for(const Signal& signal, const FeatureOptions& options) {
  return build_filter_bank(signal.fs, signal.samples.size(),
                           BoundarySet::for_sampling_rate(signal.fs, options.cutoffs_hz));
}

FeatureRow compute_feature_row(const LabeledRecord& record, const FilterBank& bank,
                               const FeatureOptions& options) {
  FeatureRow row;
  row.id = record.signal.id;
  row.label = record.label;
  row.areas = extract_features(decompose(record.signal, bank), options.tau, options.dim);
  return row;
}

FeatureTable compute_feature_table(const DatasetManifest& manifest, const FeatureOptions& options) {
  if (manifest.records.empty()) throw InvalidArgument("compute_feature_table: empty dataset");

  std::map<std::pair<double, std::size_t>, FilterBank> banks;
  std::vector<const FilterBank*> bank_of(manifest.records.size());
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const Signal& s = manifest.records[i].signal;
    s.validate();
    const auto key = std::make_pair(s.fs, s.samples.size());
    auto it = banks.find(key);
    if (it == banks.end()) it = banks.emplace(key, filter_bank_for(s, options)).first;
    bank_of[i] = &it->second;
  }

  FeatureTable table(manifest.records.size());
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(table.size()));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned worker) {
    try {
      for (std::size_t i = worker; i < table.size(); i += threads) {
        table[i] = compute_feature_row(manifest.records[i], *bank_of[i], options);
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
  return table;
}

}  // namespace eegsz
