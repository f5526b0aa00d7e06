#include "meek/inference.hpp"

#include <cmath>

#include "meek/optimize.hpp"

namespace meek {

namespace {

// Scenario as seen by this module: g_alg optionally neutralized on both
// the serving curve and the SOTA reference curve.
ScenarioConfig sota_scenario(const InferenceConfig& config) {
  ScenarioConfig s = config.sota;
  if (config.zero_algorithmic_gain) s.rates.g_alg = 1.0;
  return s;
}

double module_g_alg(const InferenceConfig& config) {
  return config.zero_algorithmic_gain ? 1.0 : config.rates.g_alg;
}

}  // namespace

void validate(const InferenceConfig& config) {
  validate(config.law);
  validate(config.rates);
  if (!(config.params_per_flop_t0 > 0.0))
    throw DomainError("InferenceConfig.params_per_flop_t0: must be > 0");
  if (!(config.chinchilla_kappa > 0.0))
    throw DomainError("InferenceConfig.chinchilla_kappa: must be > 0");
  validate(config.sota);
}

double effective_params(const InferenceConfig& config, double t) {
  if (!(t >= 0.0)) throw DomainError("effective_params: t must be >= 0");
  return config.rates.usd_per_token_budget * config.rates.flop_per_dollar_t0 *
         config.params_per_flop_t0 *
         std::pow(config.rates.g_h * config.rates.g_inf, t);
}

double meek_inference_loss_unclamped(const InferenceConfig& config, double t) {
  if (!(t >= 0.0))
    throw DomainError("meek_inference_loss: t must be >= 0");
  const double log_p_eff =
      std::log(config.rates.usd_per_token_budget *
               config.rates.flop_per_dollar_t0 * config.params_per_flop_t0) +
      t * std::log(config.rates.g_h * config.rates.g_inf);
  const double log_compute_equiv = std::log(config.chinchilla_kappa) +
                                   2.0 * log_p_eff +
                                   t * std::log(module_g_alg(config));
  return loss_at_log_compute(config.law, log_compute_equiv);
}

double inference_sota_loss(const InferenceConfig& config, double t) {
  return sota_loss(sota_scenario(config), t);
}

double meek_inference_loss(const InferenceConfig& config, double t) {
  return std::max(meek_inference_loss_unclamped(config, t),
                  inference_sota_loss(config, t));
}

double inference_loss_difference(const InferenceConfig& config, double t) {
  return std::max(
      meek_inference_loss(config, t) - inference_sota_loss(config, t), 0.0);
}

std::optional<double> crossover_time(const InferenceConfig& config) {
  validate(config);
  const auto raw = [&](double t) {
    return meek_inference_loss_unclamped(config, t) -
           inference_sota_loss(config, t);
  };
  if (raw(0.0) <= 0.0) return 0.0;
  const double horizon = config.sota.horizon;
  if (raw(horizon) > 0.0) return std::nullopt;
  return bisect_root(raw, 0.0, horizon, 1e-9);
}

std::vector<InferencePoint> inference_series(const InferenceConfig& config) {
  validate(config);
  const double step = config.sota.step;
  const double horizon = config.sota.horizon;
  const long long n =
      static_cast<long long>(std::floor(horizon / step * (1.0 + 1e-12))) + 1;
  std::vector<InferencePoint> points(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * step;
    const double unclamped = meek_inference_loss_unclamped(config, t);
    const double sota = inference_sota_loss(config, t);
    const double loss = std::max(unclamped, sota);
    points[static_cast<std::size_t>(i)] = {t, loss, sota,
                                           std::max(loss - sota, 0.0),
                                           unclamped <= sota};
  }
  return points;
}

}  // namespace meek
