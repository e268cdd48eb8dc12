#include "eegsz/config.hpp"

#include <charconv>
#include <cstdio>

#include "eegsz/error.hpp"

namespace eegsz::cli {

std::string distances_name(const std::vector<Distance>& d) {
  if (d.size() == 2) return "both";
  if (d.size() == 1) return std::string(distance_name(d.front()));
  throw InvalidArgument("distance selection must hold one or two metrics");
}

std::vector<Distance> parse_distances(std::string_view name) {
  if (name == "both") return {Distance::euclidean, Distance::cityblock};
  if (auto d = parse_distance(name)) return {*d};
  throw InvalidArgument("unknown distance '" + std::string(name) +
                        "' (expected euclidean, cityblock or both)");
}

std::array<double, kRhythmCount> parse_cutoff_list(std::string_view text) {
  std::array<double, kRhythmCount> out{};
  std::size_t n = 0;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    if (n == kRhythmCount) throw InvalidArgument("--fcut takes exactly 5 frequencies");
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), out[n]);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw InvalidArgument("--fcut: bad frequency '" + std::string(item) + "'");
    }
    ++n;
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (n != kRhythmCount) throw InvalidArgument("--fcut takes exactly 5 frequencies");
  return out;
}

nlohmann::json RunConfig::to_json() const {
  return {{"data", data_root.generic_string()},
          {"out", out_dir.generic_string()},
          {"input", input_file.generic_string()},
          {"features", features_file.generic_string()},
          {"layout", layout},
          {"fs", fs},
          {"fcut", fcut},
          {"tau", tau},
          {"dim", dim},
          {"distance", distances_name(distances)},
          {"kmax", kmax},
          {"seed", seed},
          {"scaling", scaling_name(scaling)},
          {"signal", signal_id},
          {"format", format},
          {"threshold", threshold},
          {"preset", preset},
          {"per_class", per_class},
          {"length", length}};
}

void RunConfig::apply_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "data") data_root = value.get<std::string>();
      else if (key == "out") out_dir = value.get<std::string>();
      else if (key == "input") input_file = value.get<std::string>();
      else if (key == "features") features_file = value.get<std::string>();
      else if (key == "layout") layout = value.get<std::string>();
      else if (key == "fs") fs = value.get<double>();
      else if (key == "fcut") {
        const auto v = value.get<std::vector<double>>();
        if (v.size() != kRhythmCount) throw InvalidArgument("config 'fcut' needs 5 values");
        std::copy(v.begin(), v.end(), fcut.begin());
      } else if (key == "tau") tau = value.get<int>();
      else if (key == "dim") dim = value.get<int>();
      else if (key == "distance") distances = parse_distances(value.get<std::string>());
      else if (key == "kmax") kmax = value.get<int>();
      else if (key == "seed") seed = value.get<std::uint64_t>();
      else if (key == "scaling") {
        auto s = parse_scaling(value.get<std::string>());
        if (!s) throw InvalidArgument("config 'scaling' must be raw or zscore");
        scaling = *s;
      } else if (key == "signal") signal_id = value.get<std::string>();
      else if (key == "format") format = value.get<std::string>();
      else if (key == "threshold") threshold = value.get<double>();
      else if (key == "preset") preset = value.get<std::string>();
      else if (key == "per_class") per_class = value.get<int>();
      else if (key == "length") length = value.get<std::size_t>();
      else throw InvalidArgument("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config file: ") + e.what());
  }
}

std::string RunConfig::hash() const {
  auto j = to_json();
  j.erase("out");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

DatasetLayout RunConfig::dataset_layout() const {
  DatasetLayout l;
  if (layout == "letters") l = DatasetLayout::letters();
  else if (layout == "bonn") l = DatasetLayout::bonn_archive();
  else throw InvalidArgument("unknown layout '" + layout + "' (expected letters or bonn)");
  l.fs = fs;
  return l;
}

void RunConfig::validate() const {
  if (!(fs > 0.0)) throw InvalidArgument("--fs must be positive");
  BoundarySet::for_sampling_rate(fs, fcut).validate();
  if (tau < 1) throw InvalidArgument("--tau must be at least 1");
  if (dim != 2) throw InvalidArgument("--dim: ellipse features need a 2-D embedding");
  if (kmax < 1) throw InvalidArgument("--kmax must be at least 1");
  if (format != "csv" && format != "json" && format != "both") {
    throw InvalidArgument("--format must be csv, json or both");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidArgument("--threshold must lie in [0, 1]");
  if (per_class < 10) throw InvalidArgument("--per-class must be at least 10 (ten folds)");
  if (length < 2) throw InvalidArgument("--length must be at least 2");
  (void)dataset_layout();
  (void)distances_name(distances);
}

}  // namespace eegsz::cli
