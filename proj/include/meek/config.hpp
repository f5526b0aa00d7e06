#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meek/benchmark_map.hpp"
#include "meek/discrimination.hpp"
#include "meek/inference.hpp"
#include "meek/trajectory.hpp"

namespace meek {

struct OutputOptions {
  std::string format = "csv";  // "csv" or "json"
  std::optional<std::string> plot_path;
};

// Everything a CLI run needs. inference.law, inference.rates, and
// inference.sota are always kept mirroring scenario; config files set
// only the inference-specific knobs.
struct RunConfig {
  ScenarioConfig scenario;
  InferenceConfig inference;
  SprtConfig sprt;
  std::optional<SigmoidFit> sigmoid;
  std::optional<ParametricLoss> parametric_loss;
  OutputOptions outputs;
  std::uint64_t seed = 42;
};

RunConfig default_config();

// Copies scenario into the inference config's mirrored fields. Called
// by the appliers; call again after mutating scenario directly.
void sync_inference(RunConfig& config);

// Applies a JSON-with-comments document on top of the current values;
// only keys present in the document change. Unknown keys and wrong
// types raise ConfigError naming the full field path. source_name
// prefixes parse errors (usually the file path).
void apply_config_text(RunConfig& config, const std::string& text,
                       const std::string& source_name);

void apply_config_file(RunConfig& config, const std::string& path);

// Preset search order: $MEEK_PRESET_DIR, ./presets, <exe dir>/../presets,
// <exe dir>/presets. Tries <name>.jsonc then <name>.json in each.
std::vector<std::string> preset_search_dirs();
std::optional<std::string> find_preset(const std::string& name);

// Full validation with config-style diagnostics (field paths).
void validate(const RunConfig& config);

}  // namespace meek
