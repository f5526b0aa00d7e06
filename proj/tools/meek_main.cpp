#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meek/config.hpp"
#include "meek/discrimination.hpp"
#include "meek/empirical.hpp"
#include "meek/errors.hpp"
#include "meek/inference.hpp"
#include "meek/io.hpp"
#include "meek/svg.hpp"
#include "meek/trajectory.hpp"

namespace {

using namespace meek;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << content;
  if (!out) throw DataError(path + ": write failed");
}

// Delivers a finished document either to --output or to stdout.
void emit(const std::optional<std::string>& output_path,
          const std::string& content) {
  if (output_path) {
    write_text_file(*output_path, content);
  } else {
    std::cout << content;
  }
}

std::string with_suffix(const std::string& base, const std::string& suffix) {
  std::filesystem::path p(base);
  std::filesystem::path renamed = p.parent_path() / p.stem();
  return renamed.string() + suffix + p.extension().string();
}

void maybe_plot(const RunConfig& cfg, const SvgChartSpec& spec,
                const std::vector<SvgSeries>& series) {
  if (!cfg.outputs.plot_path) return;
  write_text_file(*cfg.outputs.plot_path, render_line_chart(spec, series));
}

void reject_plot(const RunConfig& cfg) {
  if (cfg.outputs.plot_path) {
    throw ConfigError(
        "outputs.plot_path: this command produces no series to plot");
  }
}

std::vector<std::pair<double, double>> delta_points(
    const std::vector<TrajectoryPoint>& series) {
  std::vector<std::pair<double, double>> points;
  points.reserve(series.size());
  for (const auto& p : series) points.emplace_back(p.t, p.delta);
  return points;
}

PriceBand parse_band(const std::string& text) {
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    auto lo = parse_double(text.substr(0, colon));
    auto hi = parse_double(text.substr(colon + 1));
    if (lo && hi) return PriceBand{*lo, *hi};
  }
  throw ConfigError("--band: expected MIN:MAX in $/Mtok, got '" + text + "'");
}

BucketSpec parse_bucket(const std::string& text) {
  if (text == "monthly") return BucketSpec{};
  std::string digits = text;
  if (!digits.empty() && digits.back() == 'd') digits.pop_back();
  try {
    std::size_t used = 0;
    int days = std::stoi(digits, &used);
    if (used == digits.size() && days > 0) {
      return BucketSpec{BucketSpec::Kind::Days, days};
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("--bucket: expected 'monthly' or '<days>d', got '" +
                    text + "'");
}

double year_fraction(const std::chrono::year_month_day& date) {
  auto days = std::chrono::sys_days{date}.time_since_epoch().count();
  return 1970.0 + double(days) / 365.2425;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  return in;
}

int run_trajectory(RunConfig& cfg, const std::optional<std::string>& output,
                   const std::vector<double>& gi_sweep,
                   const std::vector<double>& capital_values) {
  if (!gi_sweep.empty() && !capital_values.empty()) {
    throw ConfigError("--gi-sweep and --capital-sweep are mutually exclusive");
  }
  if (gi_sweep.empty() && capital_values.empty()) {
    auto series = trajectory_series(cfg.scenario);
    if (cfg.outputs.format == "csv") {
      std::ostringstream out;
      write_trajectory_csv(out, series);
      emit(output, out.str());
    } else {
      emit(output, trajectory_json(series));
    }
    std::vector<SvgSeries> lines(3);
    lines[0].label = "loss_meek";
    lines[1].label = "loss_sota";
    lines[2].label = "delta";
    for (const auto& p : series) {
      lines[0].points.emplace_back(p.t, p.loss_meek);
      lines[1].points.emplace_back(p.t, p.loss_sota);
      lines[2].points.emplace_back(p.t, p.delta);
    }
    maybe_plot(cfg, {"Training loss trajectories", "years", "loss (nats/token)"},
               lines);
    return 0;
  }

  bool is_gi = !gi_sweep.empty();
  std::string key = is_gi ? "g_i" : "sota_budget_t0";
  std::string tag = is_gi ? "_gi" : "_budget";
  auto by_value = is_gi ? growth_sweep(cfg.scenario, gi_sweep)
                        : capital_sweep(cfg.scenario, capital_values);
  if (output) {
    for (const auto& [value, series] : by_value) {
      std::string path = with_suffix(*output, tag + format_double(value));
      if (cfg.outputs.format == "csv") {
        std::ostringstream out;
        write_trajectory_csv(out, series);
        write_text_file(path, out.str());
      } else {
        write_text_file(path, trajectory_json(series));
      }
    }
  } else if (cfg.outputs.format == "csv") {
    std::ostringstream out;
    write_sweep_csv(out, key, by_value);
    std::cout << out.str();
  } else {
    std::cout << sweep_json(key, by_value);
  }
  std::vector<SvgSeries> lines;
  for (const auto& [value, series] : by_value) {
    lines.push_back({key + "=" + format_double(value), delta_points(series)});
  }
  maybe_plot(cfg, {"Loss difference sweep", "years", "delta (nats/token)"},
             lines);
  return 0;
}

int run_inflection(const RunConfig& cfg,
                   const std::optional<std::string>& output) {
  reject_plot(cfg);
  const auto& rates = cfg.scenario.rates;
  double alpha = cfg.scenario.law.alpha;
  double t_closed = inflection_time(rates, alpha);
  double t_numeric = numeric_inflection_time(cfg.scenario);
  if (cfg.outputs.format == "csv") {
    std::ostringstream out;
    out << "t_star_closed_years,t_star_numeric_years,alpha,g_h,g_alg,g_i\n"
        << format_double(t_closed) << ',' << format_double(t_numeric) << ','
        << format_double(alpha) << ',' << format_double(rates.g_h) << ','
        << format_double(rates.g_alg) << ',' << format_double(rates.g_i)
        << '\n';
    emit(output, out.str());
  } else {
    std::ostringstream out;
    out << "{\n"
        << "  \"t_star_closed_years\": " << format_double(t_closed) << ",\n"
        << "  \"t_star_numeric_years\": " << format_double(t_numeric) << ",\n"
        << "  \"alpha\": " << format_double(alpha) << ",\n"
        << "  \"g_h\": " << format_double(rates.g_h) << ",\n"
        << "  \"g_alg\": " << format_double(rates.g_alg) << ",\n"
        << "  \"g_i\": " << format_double(rates.g_i) << "\n"
        << "}\n";
    emit(output, out.str());
  }
  return 0;
}

int run_inference(RunConfig& cfg, const std::optional<std::string>& output,
                  bool zero_alg) {
  if (zero_alg) cfg.inference.zero_algorithmic_gain = true;
  auto series = inference_series(cfg.inference);
  auto crossover = crossover_time(cfg.inference);
  if (cfg.outputs.format == "csv") {
    std::ostringstream out;
    write_inference_csv(out, series);
    emit(output, out.str());
  } else {
    emit(output, inference_json(series, crossover));
  }
  std::vector<SvgSeries> lines(3);
  lines[0].label = "meek_inference_loss";
  lines[1].label = "loss_sota";
  lines[2].label = "delta";
  for (const auto& p : series) {
    lines[0].points.emplace_back(p.t, p.meek_inference_loss);
    lines[1].points.emplace_back(p.t, p.sota_loss);
    lines[2].points.emplace_back(p.t, p.delta);
  }
  maybe_plot(cfg, {"Inference loss trajectories", "years", "loss (nats/token)"},
             lines);
  return 0;
}

int run_benchmark(const RunConfig& cfg, const std::optional<std::string>& output,
                  const std::vector<int>& p_values,
                  const std::string& fit_from) {
  SigmoidFit fit{};
  if (!fit_from.empty()) {
    auto in = open_input(fit_from);
    auto points = read_loss_score_csv(in, cfg.parametric_loss);
    fit = fit_sigmoid(points).fit;
  } else if (cfg.sigmoid) {
    fit = *cfg.sigmoid;
  } else {
    throw ConfigError(
        "sigmoid: missing; set the section in the config or pass --fit-from");
  }
  auto by_p = benchmark_gap_series(cfg.scenario, fit, p_values);
  if (cfg.outputs.format == "csv") {
    std::ostringstream out;
    write_benchmark_csv(out, by_p);
    emit(output, out.str());
  } else {
    emit(output, benchmark_json(by_p));
  }
  std::vector<SvgSeries> lines;
  for (const auto& [p, series] : by_p) {
    lines.push_back({"p=" + std::to_string(p), series});
  }
  maybe_plot(cfg, {"Benchmark gap by task depth", "years", "score gap"},
             lines);
  return 0;
}

int run_sprt(RunConfig& cfg, const std::optional<std::string>& output,
             bool have_delta, double delta_l, bool series_mode, bool simulate,
             long long runs, std::size_t alphabet, long long max_tokens,
             const std::string& construction) {
  if (series_mode && (simulate || have_delta)) {
    throw ConfigError("--series excludes --delta-l and --simulate");
  }
  if (simulate && !have_delta) {
    throw ConfigError("--simulate requires --delta-l");
  }
  if (!series_mode && !have_delta) {
    throw ConfigError("sprt: pass --delta-l VALUE or --series");
  }

  if (series_mode) {
    auto series = discrimination_series(cfg.scenario, cfg.sprt);
    if (cfg.outputs.format == "csv") {
      std::ostringstream out;
      write_discrimination_csv(out, series);
      emit(output, out.str());
    } else {
      emit(output, discrimination_json(series));
    }
    maybe_plot(cfg, {"Tokens to discriminate", "years", "expected tokens"},
               {{"expected_tokens", series}});
    return 0;
  }

  reject_plot(cfg);
  if (simulate) {
    CategoricalPair pair =
        construction == "lattice"
            ? make_lattice_pair(delta_l, cfg.sprt, alphabet, cfg.seed)
            : make_tilted_pair(delta_l, alphabet, cfg.seed);
    auto report = monte_carlo_expected_tokens(pair.p0, pair.p0, pair.p_b,
                                              cfg.sprt, runs, cfg.seed,
                                              max_tokens);
    double formula =
        expected_tokens_general(delta_l, cfg.sprt, Hypothesis::ABetter);
    if (cfg.outputs.format == "csv") {
      std::ostringstream out;
      out << "mean_tokens,ci95_half_width,n_runs,decided_runs,capped_runs,"
             "false_rate,formula_tokens\n"
          << format_double(report.mean_tokens) << ','
          << format_double(report.ci95_half_width) << ',' << report.n_runs
          << ',' << report.decided_runs << ',' << report.capped_runs << ','
          << format_double(report.false_rate) << ','
          << format_double(formula) << '\n';
      emit(output, out.str());
    } else {
      emit(output, mc_report_json(report, formula));
    }
    return 0;
  }

  double tokens_a = expected_tokens_general(delta_l, cfg.sprt,
                                            Hypothesis::ABetter);
  double tokens_b = expected_tokens_general(delta_l, cfg.sprt,
                                            Hypothesis::BBetter);
  if (cfg.outputs.format == "csv") {
    std::ostringstream out;
    out << "delta_l,expected_tokens_a,expected_tokens_b\n"
        << format_double(delta_l) << ',' << format_double(tokens_a) << ','
        << format_double(tokens_b) << '\n';
    emit(output, out.str());
  } else {
    std::ostringstream out;
    out << "{\n"
        << "  \"delta_l\": " << format_double(delta_l) << ",\n"
        << "  \"expected_tokens_a\": " << format_double(tokens_a) << ",\n"
        << "  \"expected_tokens_b\": " << format_double(tokens_b) << "\n"
        << "}\n";
    emit(output, out.str());
  }
  return 0;
}

int run_fit_sigmoid(const RunConfig& cfg,
                    const std::optional<std::string>& output,
                    const std::string& input_path) {
  reject_plot(cfg);
  auto in = open_input(input_path);
  auto points = read_loss_score_csv(in, cfg.parametric_loss);
  FitReport report = fit_sigmoid(points);
  if (cfg.outputs.format == "csv") {
    std::ostringstream out;
    write_fit_report_csv(out, report);
    emit(output, out.str());
  } else {
    emit(output, fit_report_json(report));
  }
  return 0;
}

int run_empirical(const RunConfig& cfg, const std::optional<std::string>& output,
                  const std::string& input_path, const std::string& band_text,
                  bool have_threshold, double param_threshold,
                  const std::string& bucket_text, double score_scale,
                  bool lenient) {
  auto in = open_input(input_path);
  ParseOptions options;
  options.strictness =
      lenient ? ParseStrictness::Lenient : ParseStrictness::Strict;
  options.score_scale = score_scale;
  auto records = parse_records(in, options);
  BucketSpec bucket = parse_bucket(bucket_text);
  std::vector<GapPoint> series;
  if (have_threshold) {
    series = param_band_gap_series(records, param_threshold, bucket);
  } else {
    series = gap_series(records, parse_band(band_text), bucket);
  }
  if (band_is_empty(series)) {
    std::cerr << "note: no records fall within the band; "
                 "in-band values are absent at every bucket\n";
  }
  if (cfg.outputs.format == "csv") {
    std::ostringstream out;
    write_gap_csv(out, series);
    emit(output, out.str());
  } else {
    emit(output, gap_json(series));
  }
  std::vector<SvgSeries> lines(3);
  lines[0].label = "best_overall";
  lines[1].label = "best_in_band";
  lines[2].label = "gap";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : series) {
    double x = year_fraction(p.date);
    lines[0].points.emplace_back(x, p.best_overall);
    lines[1].points.emplace_back(x, p.best_in_band.value_or(nan));
    lines[2].points.emplace_back(x, p.gap.value_or(nan));
  }
  maybe_plot(cfg, {"Leaderboard gap", "year", "score"}, lines);
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{
      "Forecasts SOTA-vs-meek loss gaps, inference parity, benchmark "
      "differences, and discrimination costs from scaling-law scenarios"};
  app.require_subcommand(1);

  std::string config_path, preset_name, format_flag, plot_flag, output_flag;
  std::uint64_t seed_flag = 0;
  double horizon_flag = 0.0, step_flag = 0.0;
  auto* opt_config =
      app.add_option("--config", config_path, "Config file (JSON, // comments allowed)");
  auto* opt_preset = app.add_option("--preset", preset_name,
                                    "Named preset searched in $MEEK_PRESET_DIR, "
                                    "./presets, and next to the binary");
  auto* opt_format = app.add_option("--format", format_flag, "Output format")
                         ->check(CLI::IsMember({"csv", "json"}));
  auto* opt_plot =
      app.add_option("--plot", plot_flag, "Write an SVG chart of the series");
  auto* opt_seed = app.add_option("--seed", seed_flag, "Random seed");
  auto* opt_horizon =
      app.add_option("--horizon", horizon_flag, "Series horizon in years");
  auto* opt_step = app.add_option("--step", step_flag, "Series step in years");
  auto* opt_output = app.add_option("-o,--output", output_flag,
                                    "Write to this file instead of stdout");

  auto* cmd_trajectory =
      app.add_subcommand("trajectory", "Training loss difference over time");
  std::vector<double> gi_sweep, capital_values;
  cmd_trajectory
      ->add_option("--gi-sweep", gi_sweep,
                   "Comma-separated investment growth factors, one series each")
      ->delimiter(',');
  cmd_trajectory
      ->add_option("--capital-sweep", capital_values,
                   "Comma-separated initial SOTA budgets, one series each")
      ->delimiter(',');
  cmd_trajectory->fallthrough();

  auto* cmd_inflection = app.add_subcommand(
      "inflection", "Loss-difference peak time, closed form and numeric");
  cmd_inflection->fallthrough();

  auto* cmd_inference = app.add_subcommand(
      "inference", "Served-model loss vs SOTA under a fixed $/token budget");
  bool zero_alg = false;
  cmd_inference->add_flag("--zero-alg", zero_alg,
                          "Sensitivity: no algorithmic gains on either side");
  cmd_inference->fallthrough();

  auto* cmd_benchmark = app.add_subcommand(
      "benchmark", "Score gap implied by a loss-to-score sigmoid");
  std::vector<int> p_values{1, 2, 5};
  std::string fit_from;
  cmd_benchmark
      ->add_option("--p", p_values,
                   "Comma-separated task depths (independent steps)")
      ->delimiter(',');
  cmd_benchmark->add_option("--fit-from", fit_from,
                            "Fit the sigmoid from this loss,score CSV");
  cmd_benchmark->fallthrough();

  auto* cmd_sprt = app.add_subcommand(
      "sprt", "Expected tokens to tell two models apart (Wald test)");
  double delta_l = 0.0, alpha_flag = 0.0, beta_flag = 0.0, slowdown_flag = 0.0;
  bool series_mode = false, simulate = false;
  long long runs = 100000, max_tokens = kDefaultMaxTokens;
  std::size_t alphabet = 20;
  std::string construction = "lattice";
  auto* opt_delta = cmd_sprt->add_option("--delta-l", delta_l,
                                         "Per-token loss difference in nats");
  cmd_sprt->add_flag("--series", series_mode,
                     "Expected tokens along the scenario trajectory");
  cmd_sprt->add_flag("--simulate", simulate,
                     "Monte-Carlo check of the Wald formula at --delta-l");
  auto* opt_alpha = cmd_sprt->add_option("--alpha", alpha_flag,
                                         "False-accept rate for hypothesis A");
  auto* opt_beta = cmd_sprt->add_option("--beta", beta_flag,
                                        "False-accept rate for hypothesis B");
  auto* opt_slowdown = cmd_sprt->add_option(
      "--slowdown", slowdown_flag, "Divisor on each evidence increment (>= 1)");
  cmd_sprt->add_option("--runs", runs, "Monte-Carlo run count");
  cmd_sprt->add_option("--alphabet", alphabet,
                       "Token alphabet size for simulated distributions");
  cmd_sprt->add_option("--max-tokens", max_tokens,
                       "Per-run stopping cap for the simulation");
  cmd_sprt
      ->add_option("--construction", construction,
                   "Distribution pair family for --simulate")
      ->check(CLI::IsMember({"lattice", "tilt"}));
  cmd_sprt->fallthrough();

  auto* cmd_fit = app.add_subcommand(
      "fit-sigmoid", "Fit the loss-to-score sigmoid to benchmark data");
  std::string fit_input;
  cmd_fit->add_option("input", fit_input, "CSV with loss,score[,weight]")
      ->required();
  cmd_fit->fallthrough();

  auto* cmd_empirical = app.add_subcommand(
      "empirical", "Best-overall vs best-in-price-band score gap over time");
  std::string emp_input, band_text = "0.5:1.0", bucket_text = "monthly";
  double param_threshold = 0.0, score_scale = 1.0;
  bool lenient = false;
  cmd_empirical
      ->add_option("input", emp_input,
                   "Leaderboard CSV: name,date,price_usd_per_mtok,score[,params]")
      ->required();
  cmd_empirical->add_option("--band", band_text,
                            "Price band MIN:MAX in $/Mtok, both inclusive");
  auto* opt_threshold = cmd_empirical->add_option(
      "--param-threshold", param_threshold,
      "Band by parameter count <= threshold instead of price");
  cmd_empirical->add_option("--bucket", bucket_text,
                            "'monthly' or fixed windows like '30d'");
  cmd_empirical->add_option("--score-scale", score_scale,
                            "Divide ingested scores by this (100 for percent)");
  cmd_empirical->add_flag("--lenient", lenient,
                          "Skip invalid rows instead of aborting");
  cmd_empirical->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg = default_config();
  if (opt_preset->count() > 0) {
    auto path = find_preset(preset_name);
    if (!path) {
      std::string dirs;
      for (const auto& dir : preset_search_dirs()) {
        if (!dirs.empty()) dirs += ", ";
        dirs += dir;
      }
      throw ConfigError("preset '" + preset_name + "' not found; searched: " +
                        dirs);
    }
    apply_config_file(cfg, *path);
  }
  if (opt_config->count() > 0) apply_config_file(cfg, config_path);
  if (opt_format->count() > 0) cfg.outputs.format = format_flag;
  if (opt_plot->count() > 0) cfg.outputs.plot_path = plot_flag;
  if (opt_seed->count() > 0) cfg.seed = seed_flag;
  if (opt_horizon->count() > 0) cfg.scenario.horizon = horizon_flag;
  if (opt_step->count() > 0) cfg.scenario.step = step_flag;
  if (opt_alpha->count() > 0) cfg.sprt.alpha_err = alpha_flag;
  if (opt_beta->count() > 0) cfg.sprt.beta_err = beta_flag;
  if (opt_slowdown->count() > 0) cfg.sprt.slowdown = slowdown_flag;
  sync_inference(cfg);
  validate(cfg);

  std::optional<std::string> output;
  if (opt_output->count() > 0) output = output_flag;

  if (cmd_trajectory->parsed()) {
    return run_trajectory(cfg, output, gi_sweep, capital_values);
  }
  if (cmd_inflection->parsed()) return run_inflection(cfg, output);
  if (cmd_inference->parsed()) return run_inference(cfg, output, zero_alg);
  if (cmd_benchmark->parsed()) {
    return run_benchmark(cfg, output, p_values, fit_from);
  }
  if (cmd_sprt->parsed()) {
    return run_sprt(cfg, output, opt_delta->count() > 0, delta_l, series_mode,
                    simulate, runs, alphabet, max_tokens, construction);
  }
  if (cmd_fit->parsed()) return run_fit_sigmoid(cfg, output, fit_input);
  if (cmd_empirical->parsed()) {
    return run_empirical(cfg, output, emp_input, band_text,
                         opt_threshold->count() > 0, param_threshold,
                         bucket_text, score_scale, lenient);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
