#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eegsz/config.hpp"
#include "eegsz/dataset.hpp"

namespace eegsz::cli {

/// One artifact produced by a subcommand, relative to the output directory.
struct OutputFile {
  std::filesystem::path path;
  std::string content;
};

using Outputs = std::vector<OutputFile>;

/// Subcommands compute everything in memory and return the artifacts; nothing
/// touches the output directory until write_outputs, so a failing run leaves
/// no partial tables behind.
Outputs run_decompose(const RunConfig& cfg);
Outputs run_features(const RunConfig& cfg);
Outputs run_evaluate(const RunConfig& cfg);
Outputs run_synth(const RunConfig& cfg);

/// Writes every artifact through a temporary file and a rename.
void write_outputs(const std::filesystem::path& out_dir, const Outputs& outputs);

/// Record groups behind the `synth` presets: "separable" (S tones three times
/// the SF amplitude) and "overlapping" (both classes drawn alike).
std::vector<SynthSpec> synth_preset(std::string_view name, int per_class, std::size_t length,
                                    double fs, std::uint64_t seed);

/// Entry point behind main(); returns the process exit status.
int run_cli(int argc, char** argv);

}  // namespace eegsz::cli
