#include "eegsz/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "eegsz/classifier.hpp"
#include "eegsz/error.hpp"
#include "eegsz/phasespace.hpp"
#include "eegsz/pipeline.hpp"
#include "eegsz/spectral.hpp"
#include "eegsz/stats.hpp"
#include "eegsz/svg.hpp"

namespace eegsz::cli {

namespace fs = std::filesystem;

namespace {

std::string provenance(const RunConfig& cfg) {
  return "eegsz config_hash=" + cfg.hash() + " seed=" + std::to_string(cfg.seed);
}

std::string csv_with_meta(const RunConfig& cfg, const std::string& body) {
  return "# " + provenance(cfg) + "\n" + body;
}

std::string json_with_meta(const RunConfig& cfg, nlohmann::json data) {
  auto config = cfg.to_json();
  config.erase("out");
  nlohmann::json doc = {
      {"meta", {{"config_hash", cfg.hash()}, {"seed", cfg.seed}, {"config", std::move(config)}}},
      {"data", std::move(data)}};
  return doc.dump(2) + "\n";
}

bool wants_csv(const RunConfig& cfg) { return cfg.format == "csv" || cfg.format == "both"; }
bool wants_json(const RunConfig& cfg) { return cfg.format == "json" || cfg.format == "both"; }

void require_path(const fs::path& p, const char* flag) {
  if (!fs::exists(p)) throw IoError(std::string(flag) + ": '" + p.string() + "' does not exist");
}

const LabeledRecord& find_record(const DatasetManifest& manifest, const std::string& id) {
  for (const auto& r : manifest.records) {
    if (r.signal.id == id) return r;
  }
  throw InvalidArgument("--signal: no record with id '" + id + "'");
}

DatasetManifest load_corpus(const RunConfig& cfg) {
  if (cfg.data_root.empty()) throw InvalidArgument("--data ROOT is required");
  require_path(cfg.data_root, "--data");
  auto manifest = load_dataset(cfg.data_root, cfg.dataset_layout());
  if (manifest.records.empty()) {
    throw InvalidArgument("dataset '" + cfg.data_root.string() + "' contains no records");
  }
  return manifest;
}

FeatureOptions feature_options(const RunConfig& cfg) {
  FeatureOptions opts;
  opts.cutoffs_hz = cfg.fcut;
  opts.tau = cfg.tau;
  opts.dim = cfg.dim;
  opts.threads = cfg.threads;
  return opts;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<SynthSpec> synth_preset(std::string_view name, int per_class, std::size_t length,
                                    double fs, std::uint64_t seed) {
  // One tone inside each flat passband of the default filter bank.
  constexpr std::array<double, kRhythmCount> kToneHz{2.0, 6.0, 12.0, 23.0, 45.0};
  double s_amp = 0.0;
  double sf_amp = 0.0;
  if (name == "separable") {
    s_amp = 60.0;
    sf_amp = 20.0;
  } else if (name == "overlapping") {
    s_amp = sf_amp = 30.0;
  } else {
    throw InvalidArgument("unknown synth preset '" + std::string(name) +
                          "' (expected separable or overlapping)");
  }
  if (per_class < 1) throw InvalidArgument("synth: per-class count must be positive");

  auto make = [&](Label label, double amplitude, std::uint64_t stream) {
    SynthSpec spec;
    spec.label = label;
    for (std::size_t i = 0; i < kToneHz.size(); ++i) {
      spec.tones.push_back({kToneHz[i], amplitude, 0.3 * static_cast<double>(i)});
    }
    spec.noise_amplitude = 5.0;
    spec.length = length;
    spec.fs = fs;
    spec.count = static_cast<std::size_t>(per_class);
    spec.seed = mix_seed(seed, stream);
    return spec;
  };
  return {make(Label::seizure, s_amp, 0), make(Label::seizure_free, sf_amp, 1)};
}

Outputs run_decompose(const RunConfig& cfg) {
  cfg.validate();
  std::vector<Signal> signals;
  std::vector<bool> plot;
  if (!cfg.input_file.empty()) {
    require_path(cfg.input_file, "--input");
    signals.push_back(load_signal(cfg.input_file, cfg.fs));
    plot.push_back(true);
  } else if (!cfg.data_root.empty()) {
    const auto manifest = load_corpus(cfg);
    if (!cfg.signal_id.empty()) {
      signals.push_back(find_record(manifest, cfg.signal_id).signal);
      plot.push_back(true);
    } else {
      for (const auto& r : manifest.records) signals.push_back(r.signal);
      plot.assign(signals.size(), false);
    }
  } else {
    throw InvalidArgument("decompose needs --input FILE or --data ROOT");
  }

  const auto opts = feature_options(cfg);
  std::map<std::size_t, FilterBank> banks;
  auto bank_for = [&](const Signal& s) -> const FilterBank& {
    auto it = banks.find(s.samples.size());
    if (it == banks.end()) it = banks.emplace(s.samples.size(), filter_bank_for(s, opts)).first;
    return it->second;
  };

  Outputs out;
  const std::string meta = provenance(cfg);
  const FilterBank& first_bank = bank_for(signals.front());
  out.push_back({"filter_bank.csv", csv_with_meta(cfg, filter_bank_csv(first_bank))});
  out.push_back({"filter_bank.svg", filter_bank_svg(first_bank, meta)});
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const auto& s = signals[i];
    const auto rhythms = decompose(s, bank_for(s));
    out.push_back({fs::path("rhythms") / (s.id + ".csv"), csv_with_meta(cfg, rhythms_csv(rhythms))});
    if (plot[i]) {
      out.push_back({fs::path("rhythms") / (s.id + ".svg"),
                     rhythms_svg(rhythms, s.fs, "Rhythms of " + s.id, meta)});
    }
  }
  return out;
}

Outputs run_features(const RunConfig& cfg) {
  cfg.validate();
  const auto manifest = load_corpus(cfg);
  const auto opts = feature_options(cfg);
  const auto table = compute_feature_table(manifest, opts);

  Outputs out;
  out.push_back({"features.csv", csv_with_meta(cfg, features_csv(table))});
  out.push_back({"manifest.json", json_with_meta(cfg, manifest_to_json(manifest))});

  if (!cfg.signal_id.empty()) {
    const auto& record = find_record(manifest, cfg.signal_id);
    const auto rhythms = decompose(record.signal, filter_bank_for(record.signal, opts));
    const std::string meta = provenance(cfg);
    for (Rhythm r : kAllRhythms) {
      const auto portrait = reconstruct_phase_space(rhythms[r], cfg.tau, cfg.dim);
      const auto stats = ellipse_area(portrait);
      const std::string stem = record.signal.id + "_" + std::string(rhythm_name(r));
      out.push_back({fs::path("portraits") / (stem + ".svg"),
                     portrait_svg(portrait, stats,
                                  record.signal.id + " " + std::string(rhythm_name(r)), meta)});
      out.push_back({fs::path("portraits") / (stem + ".csv"),
                     csv_with_meta(cfg, portrait_csv(portrait))});
    }
  }
  return out;
}

Outputs run_evaluate(const RunConfig& cfg) {
  cfg.validate();
  FeatureTable table;
  if (!cfg.features_file.empty()) {
    require_path(cfg.features_file, "--features");
    std::ifstream in(cfg.features_file);
    if (!in) throw IoError("cannot open '" + cfg.features_file.string() + "'");
    table = parse_features_csv(in, cfg.features_file.string());
  } else {
    table = compute_feature_table(load_corpus(cfg), feature_options(cfg));
  }

  const auto screening = screen_features(table, cfg.threshold);
  std::vector<Label> labels;
  for (const auto& row : table) labels.push_back(row.label);
  const auto folds = stratified_folds(labels, cfg.seed);

  SweepOptions sweep;
  sweep.distances = cfg.distances;
  sweep.k_max = cfg.kmax;
  sweep.scaling = cfg.scaling;
  sweep.threads = cfg.threads;
  const auto report = sweep_pairs(table, folds, sweep);

  Outputs out;
  if (wants_csv(cfg)) {
    out.push_back({"screening.csv", csv_with_meta(cfg, screening_csv(screening))});
    out.push_back({"sweep.csv", csv_with_meta(cfg, eval_report_csv(report))});
    for (Distance d : cfg.distances) {
      out.push_back({"best_k_" + std::string(distance_name(d)) + ".csv",
                     csv_with_meta(cfg, best_k_table_csv(report, d))});
    }
  }
  if (wants_json(cfg)) {
    out.push_back({"screening.json", json_with_meta(cfg, screening_json(screening))});
    out.push_back({"sweep.json", json_with_meta(cfg, eval_report_json(report))});
    for (Distance d : cfg.distances) {
      out.push_back({"best_k_" + std::string(distance_name(d)) + ".json",
                     json_with_meta(cfg, best_k_table_json(report, d))});
    }
  }
  return out;
}

Outputs run_synth(const RunConfig& cfg) {
  cfg.validate();
  const auto specs = synth_preset(cfg.preset, cfg.per_class, cfg.length, cfg.fs, cfg.seed);
  const auto manifest = synth_fixture(specs);
  const auto layout = cfg.dataset_layout();

  Outputs out;
  for (const auto& r : manifest.records) {
    out.push_back({fs::path(layout.subdirs.at(r.subset)) / (r.signal.id + ".txt"),
                   format_signal(r.signal)});
  }
  out.push_back({"manifest.json", json_with_meta(cfg, manifest_to_json(manifest))});
  return out;
}

void write_outputs(const fs::path& out_dir, const Outputs& outputs) {
  for (const auto& file : outputs) {
    const fs::path target = out_dir / file.path;
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw IoError("cannot create '" + target.parent_path().string() + "': " + ec.message());
    fs::path tmp = target;
    tmp += ".tmp";
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw IoError("cannot write '" + tmp.string() + "'");
      os << file.content;
      if (!os) throw IoError("write failure on '" + tmp.string() + "'");
    }
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename into '" + target.string() + "': " + ec.message());
  }
}

namespace {

// Raw flag values; only flags the user actually passed override the config.
struct Flags {
  std::string config, data, out, input, features, layout, fcut, distance, scaling, signal, format,
      preset;
  double fs = 0, threshold = 0;
  int tau = 0, dim = 0, kmax = 0, per_class = 0;
  std::uint64_t seed = 0;
  std::size_t length = 0;
  unsigned threads = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file (flags override it)");
  sub->add_option("--data", f.data, "Dataset root with C/, D/, E/ subset directories");
  sub->add_option("--out", f.out, "Output directory")->required();
  sub->add_option("--layout", f.layout, "Subset directory naming: letters or bonn (Z,O,N,F,S)");
  sub->add_option("--fs", f.fs, "Sampling rate in Hz");
  sub->add_option("--fcut", f.fcut, "Five band edges in Hz, comma separated");
  sub->add_option("--tau", f.tau, "Embedding delay in samples");
  sub->add_option("--dim", f.dim, "Embedding dimension");
  sub->add_option("--seed", f.seed, "Seed for folds and synthetic data");
  sub->add_option("--threads", f.threads, "Worker threads (0: all cores)");
}

RunConfig resolve(CLI::App* sub, const Flags& f) {
  RunConfig cfg;
  if (sub->count("--config") > 0) {
    std::ifstream in(f.config);
    if (!in) throw IoError("cannot open config '" + f.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("config '" + f.config + "': " + e.what());
    }
    cfg.apply_json(j);
  }
  auto given = [&](const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--data")) cfg.data_root = f.data;
  if (given("--out")) cfg.out_dir = f.out;
  if (given("--input")) cfg.input_file = f.input;
  if (given("--features")) cfg.features_file = f.features;
  if (given("--layout")) cfg.layout = f.layout;
  if (given("--fs")) cfg.fs = f.fs;
  if (given("--fcut")) cfg.fcut = parse_cutoff_list(f.fcut);
  if (given("--tau")) cfg.tau = f.tau;
  if (given("--dim")) cfg.dim = f.dim;
  if (given("--distance")) cfg.distances = parse_distances(f.distance);
  if (given("--kmax")) cfg.kmax = f.kmax;
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--scaling")) {
    auto s = parse_scaling(f.scaling);
    if (!s) throw InvalidArgument("--scaling must be raw or zscore");
    cfg.scaling = *s;
  }
  if (given("--signal")) cfg.signal_id = f.signal;
  if (given("--format")) cfg.format = f.format;
  if (given("--threshold")) cfg.threshold = f.threshold;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--preset")) cfg.preset = f.preset;
  if (given("--per-class")) cfg.per_class = f.per_class;
  if (given("--length")) cfg.length = f.length;
  return cfg;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"EWT rhythm / phase-space ellipse features and KNN seizure classification"};
  app.require_subcommand(1);
  Flags f;

  auto* decompose_cmd = app.add_subcommand("decompose", "Split signals into EEG rhythms");
  add_common(decompose_cmd, f);
  decompose_cmd->add_option("--input", f.input, "Single signal file");
  decompose_cmd->add_option("--signal", f.signal, "Record id to decompose and plot");

  auto* features_cmd = app.add_subcommand("features", "Compute ellipse-area features");
  add_common(features_cmd, f);
  features_cmd->add_option("--signal", f.signal, "Record id whose portraits are plotted");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Screen features and run the KNN sweep");
  add_common(evaluate_cmd, f);
  evaluate_cmd->add_option("--features", f.features, "Feature CSV from the features stage");
  evaluate_cmd->add_option("--distance", f.distance, "euclidean, cityblock or both");
  evaluate_cmd->add_option("--kmax", f.kmax, "Largest k of the sweep");
  evaluate_cmd->add_option("--scaling", f.scaling, "raw or zscore");
  evaluate_cmd->add_option("--format", f.format, "csv, json or both");
  evaluate_cmd->add_option("--threshold", f.threshold, "Significance threshold for screening");

  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset tree");
  add_common(synth_cmd, f);
  synth_cmd->add_option("--preset", f.preset, "separable or overlapping");
  synth_cmd->add_option("--per-class", f.per_class, "Records per class");
  synth_cmd->add_option("--length", f.length, "Samples per record");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const RunConfig cfg = resolve(sub, f);
    Outputs outputs;
    if (sub == decompose_cmd) outputs = run_decompose(cfg);
    else if (sub == features_cmd) outputs = run_features(cfg);
    else if (sub == evaluate_cmd) outputs = run_evaluate(cfg);
    else outputs = run_synth(cfg);
    write_outputs(cfg.out_dir, outputs);
    std::cout << sub->get_name() << ": wrote " << outputs.size() << " files to "
              << cfg.out_dir.string() << " (config " << cfg.hash() << ", seed " << cfg.seed
              << ")\n";
    return 0;
  } catch (const eegsz::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace eegsz::cli
