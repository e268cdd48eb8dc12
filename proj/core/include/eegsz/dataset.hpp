#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eegsz/types.hpp"
#include "json.hpp"

namespace eegsz {

/// Sampling rate of the Bonn University EEG recordings.
inline constexpr double kBonnSamplingRate = 173.61;

/// One single-channel EEG record.
struct Signal {
  std::vector<double> samples;
  double fs = kBonnSamplingRate;
  std::string id;

  /// Throws InvalidArgument unless there are at least two finite samples and fs > 0.
  void validate() const;
};

/// Parses one number per line. Blank lines are skipped; leading and trailing
/// whitespace is tolerated. `source` only labels error messages.
Signal parse_signal(std::istream& in, double fs, std::string id, const std::string& source);

/// Loads a Bonn-style text file. The id defaults to the file stem.
Signal load_signal(const std::filesystem::path& path, double fs = kBonnSamplingRate);

/// One sample per line with round-trip precision.
std::string format_signal(const Signal& signal);

void write_signal(const std::filesystem::path& path, const Signal& signal);

struct LabeledRecord {
  Signal signal;
  Label label = Label::seizure_free;
  char subset = '?';
  std::string relative_path;
};

struct DatasetManifest {
  std::vector<LabeledRecord> records;

  std::size_t count(Label label) const;

  /// Throws InvalidArgument on duplicate record ids.
  void validate() const;
};

/// Maps subset letters ('A'..'E') to directory names under a dataset root.
struct DatasetLayout {
  std::map<char, std::string> subdirs;
  double fs = kBonnSamplingRate;

  /// Directories named after the subset letters: A/, B/, ..., E/.
  static DatasetLayout letters();
  /// Directory names of the public archive: Z, O, N, F, S for A..E.
  static DatasetLayout bonn_archive();
};

/// S for subset E, SF for C and D, nothing for the healthy subsets A and B.
std::optional<Label> label_for_subset(char subset) noexcept;

/// Loads every file of one subset, sorted by file name. Works for A..E.
std::vector<Signal> load_subset(const std::filesystem::path& root, const DatasetLayout& layout,
                                char subset);

/// Loads the classification corpus (subsets C, D and E).
///
/// Records are ordered by subset, then by file name. A record id is the
/// subset letter, an underscore and the file stem ("E_S001"). Throws
/// InvalidArgument naming every missing required subset.
DatasetManifest load_dataset(const std::filesystem::path& root,
                             const DatasetLayout& layout = DatasetLayout::letters());

/// Writes every record as <root>/<layout dir of its subset>/<id>.txt.
void write_dataset(const std::filesystem::path& root, const DatasetManifest& manifest,
                   const DatasetLayout& layout = DatasetLayout::letters());

nlohmann::json manifest_to_json(const DatasetManifest& manifest);

struct Tone {
  double frequency_hz = 0.0;
  double amplitude = 1.0;
  double phase = 0.0;  // radians
};

/// One group of synthetic records: a sum of tones plus seeded Gaussian noise.
struct SynthSpec {
  Label label = Label::seizure_free;
  std::vector<Tone> tones;
  double noise_amplitude = 0.0;  // noise standard deviation
  std::size_t length = 4096;
  std::uint64_t seed = 0;
  std::size_t count = 1;
  double fs = kBonnSamplingRate;
};

/// Builds a deterministic synthetic corpus: identical specs give bit-identical
/// samples. Noise comes from mt19937_64 through a hand-written Box-Muller, so
/// no std::*_distribution is involved.
DatasetManifest synth_fixture(std::span<const SynthSpec> specs);

}  // namespace eegsz
