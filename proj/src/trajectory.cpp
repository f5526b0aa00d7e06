#include "meek/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "meek/optimize.hpp"

namespace meek {

void validate(const ScenarioConfig& config) {
  validate(config.law);
  validate(config.rates);
  if (!(config.meek_budget > 0.0))
    throw DomainError("ScenarioConfig.meek_budget: must be > 0");
  if (!(config.sota_budget_t0 > 0.0))
    throw DomainError("ScenarioConfig.sota_budget_t0: must be > 0");
  if (!(config.horizon > 0.0))
    throw DomainError("ScenarioConfig.horizon: must be > 0");
  if (!(config.step > 0.0 && config.step <= config.horizon))
    throw DomainError("ScenarioConfig.step: must satisfy 0 < step <= horizon");
}

InvestmentSchedule sota_schedule_or_default(const ScenarioConfig& config) {
  if (config.sota_schedule) return *config.sota_schedule;
  return InvestmentSchedule::constant(config.rates.g_i);
}

double meek_loss(const ScenarioConfig& config, double t) {
  return loss_at_log_compute(
      config.law, log_effective_compute(config.meek_budget, config.rates,
                                        InvestmentSchedule::unit(), t));
}

double sota_loss(const ScenarioConfig& config, double t) {
  return loss_at_log_compute(
      config.law, log_effective_compute(config.sota_budget_t0, config.rates,
                                        sota_schedule_or_default(config), t));
}

double loss_difference(const ScenarioConfig& config, double t) {
  const double log_meek = log_effective_compute(
      config.meek_budget, config.rates, InvestmentSchedule::unit(), t);
  // The irreducible term and the shared growth factors cancel
  // analytically; routing the remaining difference through expm1 keeps
  // the rounding error relative to the difference itself instead of to
  // the full losses, which the argmax search depends on.
  const double log_ratio = std::log(config.sota_budget_t0) -
                           std::log(config.meek_budget) +
                           sota_schedule_or_default(config).log_multiplier(t);
  return config.law.a_coeff * std::exp(-config.law.alpha * log_meek) *
         (-std::expm1(-config.law.alpha * log_ratio));
}

double inflection_time(const GrowthRates& rates, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("inflection_time: alpha must be in (0, 1)");
  const double gp = rates.g_h * rates.g_alg;
  if (!(gp > 1.0))
    throw DomainError("inflection_time: g_h*g_alg must be > 1");
  if (!(rates.g_i > 1.0))
    throw NoInflectionError(
        "inflection_time: g_i <= 1 gives a monotone loss difference");
  return std::log(std::log(gp * rates.g_i) / std::log(gp)) /
         (alpha * std::log(rates.g_i));
}

double numeric_inflection_time(const ScenarioConfig& config) {
  validate(config);
  const auto delta = [&](double t) { return loss_difference(config, t); };
  const double scan_hi = 100.0;
  const double scan_step = 0.25;
  double best_t = 0.0;
  double best_v = delta(0.0);
  for (double t = scan_step; t <= scan_hi; t += scan_step) {
    const double v = delta(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const double lo = std::max(0.0, best_t - scan_step);
  const double hi = std::min(scan_hi, best_t + scan_step);
  const double x = golden_section_max(delta, lo, hi, 1e-8).x;
  // On flat peaks the bracket search is limited by rounding noise in the
  // objective; a parabolic vertex over a wide stencil resolves the argmax
  // far below that floor because the curvature signal across the stencil
  // dwarfs the noise.
  const double h = 1e-4;
  const double center = std::min(std::max(x, lo + h), hi - h);
  const double f_minus = delta(center - h);
  const double f_center = delta(center);
  const double f_plus = delta(center + h);
  const double curvature = f_minus - 2.0 * f_center + f_plus;
  if (!(curvature < 0.0)) return x;
  const double vertex =
      center + 0.5 * h * (f_minus - f_plus) / curvature;
  if (!(vertex > lo && vertex < hi)) return x;
  return vertex;
}

std::vector<TrajectoryPoint> trajectory_series(const ScenarioConfig& config) {
  validate(config);
  const long long n =
      static_cast<long long>(std::floor(config.horizon / config.step *
                                        (1.0 + 1e-12))) +
      1;
  std::vector<TrajectoryPoint> points(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * config.step;
    const double lm = meek_loss(config, t);
    const double ls = sota_loss(config, t);
    points[static_cast<std::size_t>(i)] = {t, lm, ls, lm - ls};
  }
  return points;
}

std::map<double, std::vector<TrajectoryPoint>> growth_sweep(
    const ScenarioConfig& config, const std::vector<double>& g_i_values) {
  std::map<double, std::vector<TrajectoryPoint>> out;
  for (double gi : g_i_values) {
    if (!(gi > 0.0)) throw DomainError("growth_sweep: g_i values must be > 0");
    ScenarioConfig run = config;
    run.rates.g_i = gi;
    run.sota_schedule.reset();
    out[gi] = trajectory_series(run);
  }
  return out;
}

std::map<double, std::vector<TrajectoryPoint>> capital_sweep(
    const ScenarioConfig& config, const std::vector<double>& sota_budgets_t0) {
  std::map<double, std::vector<TrajectoryPoint>> out;
  for (double budget : sota_budgets_t0) {
    if (!(budget > 0.0))
      throw DomainError("capital_sweep: budgets must be > 0");
    ScenarioConfig run = config;
    run.sota_budget_t0 = budget;
    out[budget] = trajectory_series(run);
  }
  return out;
}

}  // namespace meek
