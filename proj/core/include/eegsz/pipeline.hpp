#pragma once

#include <array>

#include "eegsz/dataset.hpp"
#include "eegsz/phasespace.hpp"
#include "eegsz/spectral.hpp"

namespace eegsz {

struct FeatureOptions {
  std::array<double, kRhythmCount> cutoffs_hz = kRhythmCutoffsHz;
  int tau = 1;
  int dim = 2;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Filter bank matching a signal's sampling rate and length.
FilterBank filter_bank_for(const Signal& signal, const FeatureOptions& options = {});

FeatureRow compute_feature_row(const LabeledRecord& record, const FilterBank& bank,
                               const FeatureOptions& options = {});

/// Feature rows in manifest order. Records are processed in parallel; one
/// filter bank is built per distinct (fs, length).
FeatureTable compute_feature_table(const DatasetManifest& manifest,
                                   const FeatureOptions& options = {});

}  // namespace eegsz
