#include "meek/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "meek/errors.hpp"

namespace meek {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad_field(path, "expected a number");
  return j.get<double>();
}

// Durations accept the string "inf" for open-ended segments.
double as_duration(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    bad_field(path, "expected a number or \"inf\"");
  }
  return as_number(j, path);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) bad_field(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad_field(path, "expected a string");
  return j.get<std::string>();
}

const json& as_object(const json& j, const std::string& path) {
  if (!j.is_object()) bad_field(path, "expected an object");
  return j;
}

void apply_scaling_law(ScalingLaw& law, const json& j,
                       const std::string& path) {
  for (const auto& [key, value] : as_object(j, path).items()) {
    std::string field = path + "." + key;
    if (key == "a_coeff") {
      law.a_coeff = as_number(value, field);
    } else if (key == "alpha") {
      law.alpha = as_number(value, field);
    } else if (key == "l_irreducible") {
      law.l_irreducible = as_number(value, field);
    } else {
      bad_field(field, "unknown field");
    }
  }
}

void apply_rates(GrowthRates& rates, const json& j, const std::string& path) {
  for (const auto& [key, value] : as_object(j, path).items()) {
    std::string field = path + "." + key;
    if (key == "g_h") {
      rates.g_h = as_number(value, field);
    } else if (key == "g_alg") {
      rates.g_alg = as_number(value, field);
    } else if (key == "g_i") {
      rates.g_i = as_number(value, field);
    } else if (key == "g_inf") {
      rates.g_inf = as_number(value, field);
    } else if (key == "flop_per_dollar_t0") {
      rates.flop_per_dollar_t0 = as_number(value, field);
    } else if (key == "usd_per_token_budget") {
      rates.usd_per_token_budget = as_number(value, field);
    } else {
      bad_field(field, "unknown field");
    }
  }
}

InvestmentSchedule parse_schedule(const json& j, const std::string& path) {
  if (!j.is_array()) bad_field(path, "expected an array of segments");
  std::vector<InvestmentSchedule::Segment> segments;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string seg_path = path + "[" + std::to_string(i) + "]";
    InvestmentSchedule::Segment segment{};
    bool have_duration = false, have_factor = false;
    for (const auto& [key, value] : as_object(j[i], seg_path).items()) {
      std::string field = seg_path + "." + key;
      if (key == "duration_years") {
        segment.duration_years = as_duration(value, field);
        have_duration = true;
      } else if (key == "yearly_growth_factor") {
        segment.yearly_growth_factor = as_number(value, field);
        have_factor = true;
      } else {
        bad_field(field, "unknown field");
      }
    }
    if (!have_duration) bad_field(seg_path + ".duration_years", "missing");
    if (!have_factor) {
      bad_field(seg_path + ".yearly_growth_factor", "missing");
    }
    segments.push_back(segment);
  }
  try {
    return InvestmentSchedule(std::move(segments));
  } catch (const DomainError& e) {
    bad_field(path, e.what());
  }
}

void apply_scenario(ScenarioConfig& scenario, const json& j,
                    const std::string& path) {
  for (const auto& [key, value] : as_object(j, path).items()) {
    std::string field = path + "." + key;
    if (key == "law") {
      apply_scaling_law(scenario.law, value, field);
    } else if (key == "rates") {
      apply_rates(scenario.rates, value, field);
    } else if (key == "meek_budget") {
      scenario.meek_budget = as_number(value, field);
    } else if (key == "sota_budget_t0") {
      scenario.sota_budget_t0 = as_number(value, field);
    } else if (key == "sota_schedule") {
      if (value.is_null()) {
        scenario.sota_schedule.reset();
      } else {
        scenario.sota_schedule = parse_schedule(value, field);
      }
    } else if (key == "horizon") {
      scenario.horizon = as_number(value, field);
    } else if (key == "step") {
      scenario.step = as_number(value, field);
    } else {
      bad_field(field, "unknown field");
    }
  }
}

void apply_inference(InferenceConfig& inference, const json& j,
                     const std::string& path) {
  for (const auto& [key, value] : as_object(j, path).items()) {
    std::string field = path + "." + key;
    if (key == "params_per_flop_t0") {
      inference.params_per_flop_t0 = as_number(value, field);
    } else if (key == "chinchilla_kappa") {
      inference.chinchilla_kappa = as_number(value, field);
    } else if (key == "zero_algorithmic_gain") {
      inference.zero_algorithmic_gain = as_bool(value, field);
    } else {
      bad_field(field, "unknown field");
    }
  }
}

void apply_sprt(SprtConfig& sprt, const json& j, const std::string& path) {
  for (const auto& [key, value] : as_object(j, path).items()) {
    std::string field = path + "." + key;
    if (key == "alpha_err") {
      sprt.alpha_err = as_number(value, field);
    } else if (key == "beta_err") {
      sprt.beta_err = as_number(value, field);
    } else if (key == "slowdown") {
      sprt.slowdown = as_number(value, field);
    } else {
      bad_field(field, "unknown field");
    }
  }
}

void apply_sigmoid(std::optional<SigmoidFit>& sigmoid, const json& j,
                   const std::string& path) {
  if (j.is_null()) {
    sigmoid.reset();
    return;
  }
  SigmoidFit fit = sigmoid.value_or(SigmoidFit{1.0, -1.0, 0.0, 0.0});
  for (const auto& [key, value] : as_object(j, path).items()) {
    std::string field = path + "." + key;
    if (key == "amplitude") {
      fit.amplitude = as_number(value, field);
    } else if (key == "k") {
      fit.k = as_number(value, field);
    } else if (key == "x0") {
      fit.x0 = as_number(value, field);
    } else if (key == "b") {
      fit.b = as_number(value, field);
    } else {
      bad_field(field, "unknown field");
    }
  }
  sigmoid = fit;
}

void apply_parametric_loss(std::optional<ParametricLoss>& pl, const json& j,
                           const std::string& path) {
  if (j.is_null()) {
    pl.reset();
    return;
  }
  ParametricLoss loss = pl.value_or(ParametricLoss{});
  for (const auto& [key, value] : as_object(j, path).items()) {
    std::string field = path + "." + key;
    if (key == "e_irreducible") {
      loss.e_irreducible = as_number(value, field);
    } else if (key == "a_n") {
      loss.a_n = as_number(value, field);
    } else if (key == "alpha_n") {
      loss.alpha_n = as_number(value, field);
    } else if (key == "b_d") {
      loss.b_d = as_number(value, field);
    } else if (key == "beta_d") {
      loss.beta_d = as_number(value, field);
    } else {
      bad_field(field, "unknown field");
    }
  }
  pl = loss;
}

void apply_outputs(OutputOptions& outputs, const json& j,
                   const std::string& path) {
  for (const auto& [key, value] : as_object(j, path).items()) {
    std::string field = path + "." + key;
    if (key == "format") {
      outputs.format = as_string(value, field);
    } else if (key == "plot_path") {
      if (value.is_null()) {
        outputs.plot_path.reset();
      } else {
        outputs.plot_path = as_string(value, field);
      }
    } else {
      bad_field(field, "unknown field");
    }
  }
}

void apply_document(RunConfig& config, const json& doc) {
  for (const auto& [key, value] : as_object(doc, "config").items()) {
    if (key == "scenario") {
      apply_scenario(config.scenario, value, "scenario");
    } else if (key == "inference") {
      apply_inference(config.inference, value, "inference");
    } else if (key == "sprt") {
      apply_sprt(config.sprt, value, "sprt");
    } else if (key == "sigmoid") {
      apply_sigmoid(config.sigmoid, value, "sigmoid");
    } else if (key == "parametric_loss") {
      apply_parametric_loss(config.parametric_loss, value, "parametric_loss");
    } else if (key == "outputs") {
      apply_outputs(config.outputs, value, "outputs");
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        bad_field("seed", "expected a non-negative integer");
      }
      config.seed = value.get<std::uint64_t>();
    } else {
      bad_field(key, "unknown field");
    }
  }
}

}  // namespace

RunConfig default_config() {
  RunConfig config;
  sync_inference(config);
  return config;
}

void sync_inference(RunConfig& config) {
  config.inference.law = config.scenario.law;
  config.inference.rates = config.scenario.rates;
  config.inference.sota = config.scenario;
}

void apply_config_text(RunConfig& config, const std::string& text,
                       const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  apply_document(config, doc);
  sync_inference(config);
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str(), path);
}

std::vector<std::string> preset_search_dirs() {
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("MEEK_PRESET_DIR")) {
    if (*env) dirs.push_back(env);
  }
  dirs.push_back("presets");
  std::error_code ec;
  auto exe = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    auto dir = exe.parent_path();
    dirs.push_back((dir.parent_path() / "presets").string());
    dirs.push_back((dir / "presets").string());
  }
  return dirs;
}

std::optional<std::string> find_preset(const std::string& name) {
  for (const auto& dir : preset_search_dirs()) {
    for (const char* ext : {".jsonc", ".json"}) {
      std::filesystem::path candidate =
          std::filesystem::path(dir) / (name + ext);
      std::error_code ec;
      if (std::filesystem::is_regular_file(candidate, ec)) {
        return candidate.string();
      }
    }
  }
  return std::nullopt;
}

void validate(const RunConfig& config) {
  try {
    validate(config.scenario);
    validate(config.inference);
    validate(config.sprt);
    if (config.parametric_loss) validate(*config.parametric_loss);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (config.outputs.format != "csv" && config.outputs.format != "json") {
    throw ConfigError("outputs.format: must be 'csv' or 'json', got '" +
                      config.outputs.format + "'");
  }
}

}  // namespace meek
