#include "eegsz/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "eegsz/error.hpp"
#include "eegsz/format.hpp"

namespace eegsz {

namespace fs = std::filesystem;

void Signal::validate() const {
  if (!(fs > 0.0) || !std::isfinite(fs)) {
    throw InvalidArgument("signal '" + id + "': sampling rate must be positive");
  }
  if (samples.size() < 2) {
    throw InvalidArgument("signal '" + id + "': needs at least two samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw InvalidArgument("signal '" + id + "': non-finite sample at index " +
                            std::to_string(i));
    }
  }
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

Signal parse_signal(std::istream& in, double fs, std::string id, const std::string& source) {
  Signal signal;
  signal.fs = fs;
  signal.id = std::move(id);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw ParseError(source, line_no, "not a number: '" + std::string(text) + "'");
    }
    if (!std::isfinite(value)) {
      throw ParseError(source, line_no, "non-finite sample '" + std::string(text) + "'");
    }
    signal.samples.push_back(value);
  }
  if (in.bad()) throw IoError(source + ": read failure");
  if (signal.samples.empty()) throw ParseError(source, 0, "file contains no samples");
  return signal;
}

Signal load_signal(const fs::path& path, double fs) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_signal(in, fs, path.stem().string(), path.string());
}

std::string format_signal(const Signal& signal) {
  std::string text;
  text.reserve(signal.samples.size() * 8);
  for (double v : signal.samples) {
    text += format_double(v);
    text += '\n';
  }
  return text;
}

void write_signal(const fs::path& path, const Signal& signal) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << format_signal(signal);
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

std::size_t DatasetManifest::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [label](const LabeledRecord& r) { return r.label == label; }));
}

void DatasetManifest::validate() const {
  std::set<std::string_view> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.signal.id).second) {
      throw InvalidArgument("duplicate record id '" + r.signal.id + "'");
    }
  }
}

DatasetLayout DatasetLayout::letters() {
  DatasetLayout layout;
  for (char c : std::string_view("ABCDE")) layout.subdirs[c] = std::string(1, c);
  return layout;
}

DatasetLayout DatasetLayout::bonn_archive() {
  DatasetLayout layout;
  layout.subdirs = {{'A', "Z"}, {'B', "O"}, {'C', "N"}, {'D', "F"}, {'E', "S"}};
  return layout;
}

std::optional<Label> label_for_subset(char subset) noexcept {
  switch (subset) {
    case 'E':
      return Label::seizure;
    case 'C':
    case 'D':
      return Label::seizure_free;
    default:
      return std::nullopt;
  }
}

namespace {

fs::path subset_dir(const fs::path& root, const DatasetLayout& layout, char subset) {
  auto it = layout.subdirs.find(subset);
  if (it == layout.subdirs.end()) {
    throw InvalidArgument(std::string("layout has no directory for subset ") + subset);
  }
  return root / it->second;
}

std::vector<fs::path> list_sample_files(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list '" + dir.string() + "': " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

std::string record_id(char subset, const fs::path& file) {
  return std::string(1, subset) + "_" + file.stem().string();
}

}  // namespace

std::vector<Signal> load_subset(const fs::path& root, const DatasetLayout& layout, char subset) {
  const fs::path dir = subset_dir(root, layout, subset);
  if (!fs::is_directory(dir)) throw IoError("missing subset directory '" + dir.string() + "'");
  std::vector<Signal> signals;
  for (const auto& file : list_sample_files(dir)) {
    Signal s = load_signal(file, layout.fs);
    s.id = record_id(subset, file);
    signals.push_back(std::move(s));
  }
  return signals;
}

DatasetManifest load_dataset(const fs::path& root, const DatasetLayout& layout) {
  constexpr std::string_view kRequired = "CDE";

  std::string missing;
  for (char subset : kRequired) {
    auto it = layout.subdirs.find(subset);
    if (it == layout.subdirs.end() || !fs::is_directory(root / it->second)) {
      if (!missing.empty()) missing += ", ";
      missing += subset;
    }
  }
  if (!missing.empty()) {
    throw InvalidArgument("dataset '" + root.string() + "' is missing required subsets: " + missing);
  }

  DatasetManifest manifest;
  for (char subset : kRequired) {
    const fs::path dir = subset_dir(root, layout, subset);
    for (const auto& file : list_sample_files(dir)) {
      LabeledRecord record;
      record.signal = load_signal(file, layout.fs);
      record.signal.id = record_id(subset, file);
      record.signal.validate();
      record.label = *label_for_subset(subset);
      record.subset = subset;
      record.relative_path = fs::relative(file, root).generic_string();
      manifest.records.push_back(std::move(record));
    }
  }
  manifest.validate();
  return manifest;
}

void write_dataset(const fs::path& root, const DatasetManifest& manifest,
                   const DatasetLayout& layout) {
  for (const auto& record : manifest.records) {
    const fs::path dir = subset_dir(root, layout, record.subset);
    fs::create_directories(dir);
    write_signal(dir / (record.signal.id + ".txt"), record.signal);
  }
}

nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : manifest.records) {
    records.push_back({{"id", r.signal.id},
                       {"label", label_name(r.label)},
                       {"subset", std::string(1, r.subset)},
                       {"path", r.relative_path},
                       {"samples", r.signal.samples.size()},
                       {"fs", r.signal.fs}});
  }
  return {{"records", std::move(records)},
          {"counts",
           {{"S", manifest.count(Label::seizure)}, {"SF", manifest.count(Label::seizure_free)}}}};
}

namespace {

// Uniform in (0, 1], built from the top 53 bits of the engine output.
double unit_open_closed(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Box-Muller; written out so that output does not depend on the standard library.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(unit_open_closed(rng_)));
    const double angle = 2.0 * std::numbers::pi * unit_open_closed(rng_);
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::string synth_id(Label label, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04zu", label == Label::seizure ? "S" : "SF", index);
  return buf;
}

}  // namespace

DatasetManifest synth_fixture(std::span<const SynthSpec> specs) {
  if (specs.empty()) throw InvalidArgument("synth_fixture: empty spec");

  DatasetManifest manifest;
  std::size_t index = 0;
  for (const auto& spec : specs) {
    if (spec.length < 2) throw InvalidArgument("synth_fixture: length must be at least 2");
    if (!(spec.fs > 0.0)) throw InvalidArgument("synth_fixture: fs must be positive");
    for (std::size_t copy = 0; copy < spec.count; ++copy, ++index) {
      // Copies of one spec differ only in their noise stream.
      GaussianSource noise(spec.seed + 0x9E3779B97F4A7C15ULL * copy);
      LabeledRecord record;
      record.label = spec.label;
      record.subset = spec.label == Label::seizure ? 'E' : (copy % 2 == 0 ? 'C' : 'D');
      record.signal.fs = spec.fs;
      record.signal.id = synth_id(spec.label, index);
      record.relative_path = "synthetic";
      record.signal.samples.resize(spec.length);
      for (std::size_t n = 0; n < spec.length; ++n) {
        const double t = static_cast<double>(n) / spec.fs;
        double value = 0.0;
        for (const auto& tone : spec.tones) {
          value += tone.amplitude *
                   std::sin(2.0 * std::numbers::pi * tone.frequency_hz * t + tone.phase);
        }
        if (spec.noise_amplitude != 0.0) value += spec.noise_amplitude * noise.next();
        record.signal.samples[n] = value;
      }
      manifest.records.push_back(std::move(record));
    }
  }
  manifest.validate();
  return manifest;
}

}  // namespace eegsz
