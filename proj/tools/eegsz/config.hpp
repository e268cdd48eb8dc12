#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "eegsz/classifier.hpp"
#include "eegsz/dataset.hpp"
#include "eegsz/spectral.hpp"
#include "json.hpp"

namespace eegsz::cli {

/// Everything a subcommand needs. Defaults reproduce the published setup.
struct RunConfig {
  std::filesystem::path data_root;
  std::filesystem::path out_dir;
  std::filesystem::path input_file;     // decompose: a single signal file
  std::filesystem::path features_file;  // evaluate: resume from a feature CSV
  std::string layout = "letters";       // letters | bonn
  double fs = kBonnSamplingRate;
  std::array<double, kRhythmCount> fcut = kRhythmCutoffsHz;
  int tau = 1;
  int dim = 2;
  std::vector<Distance> distances{Distance::euclidean, Distance::cityblock};
  int kmax = 10;
  std::uint64_t seed = 1;
  Scaling scaling = Scaling::raw;
  std::string signal_id;
  std::string format = "both";  // csv | json | both
  double threshold = 0.05;
  unsigned threads = 0;
  // synth
  std::string preset = "separable";
  int per_class = 20;
  std::size_t length = 4096;

  /// Canonical form; also the on-disk config file schema.
  nlohmann::json to_json() const;

  /// Overwrites the fields present in `j`. Unknown keys are rejected.
  void apply_json(const nlohmann::json& j);

  /// FNV-1a over the canonical JSON, output directory excluded. 16 hex digits.
  std::string hash() const;

  DatasetLayout dataset_layout() const;

  /// Range and consistency checks that do not touch the filesystem.
  void validate() const;
};

std::string distances_name(const std::vector<Distance>& d);
std::vector<Distance> parse_distances(std::string_view name);
std::array<double, kRhythmCount> parse_cutoff_list(std::string_view text);

}  // namespace eegsz::cli
