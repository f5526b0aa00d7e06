#include "meek/core_laws.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace meek {

void validate(const ScalingLaw& law) {
  if (!(law.a_coeff > 0.0)) throw DomainError("ScalingLaw.a_coeff: must be > 0");
  if (!(law.alpha > 0.0 && law.alpha < 1.0))
    throw DomainError("ScalingLaw.alpha: must be in (0, 1)");
  if (!(law.l_irreducible >= 0.0))
    throw DomainError("ScalingLaw.l_irreducible: must be >= 0");
}

void validate(const ShiftedPowerLaw& law) {
  if (!(law.a_coeff > 0.0))
    throw DomainError("ShiftedPowerLaw.a_coeff: must be > 0");
  if (!(law.c_shift > 0.0))
    throw DomainError("ShiftedPowerLaw.c_shift: must be > 0");
  if (!(law.alpha > 0.0 && law.alpha < 1.0))
    throw DomainError("ShiftedPowerLaw.alpha: must be in (0, 1)");
  if (!(law.b_floor >= 0.0))
    throw DomainError("ShiftedPowerLaw.b_floor: must be >= 0");
}

void validate(const GrowthRates& rates) {
  if (!(rates.g_h > 0.0)) throw DomainError("GrowthRates.g_h: must be > 0");
  if (!(rates.g_alg > 0.0)) throw DomainError("GrowthRates.g_alg: must be > 0");
  if (!(rates.g_i > 0.0)) throw DomainError("GrowthRates.g_i: must be > 0");
  if (!(rates.g_inf > 0.0)) throw DomainError("GrowthRates.g_inf: must be > 0");
  if (!(rates.flop_per_dollar_t0 > 0.0))
    throw DomainError("GrowthRates.flop_per_dollar_t0: must be > 0");
  if (!(rates.usd_per_token_budget > 0.0))
    throw DomainError("GrowthRates.usd_per_token_budget: must be > 0");
}

std::vector<std::string> validation_warnings(const GrowthRates& rates) {
  std::vector<std::string> notes;
  const std::pair<const char*, double> factors[] = {
      {"g_h", rates.g_h},
      {"g_alg", rates.g_alg},
      {"g_i", rates.g_i},
      {"g_inf", rates.g_inf},
  };
  for (const auto& [name, value] : factors) {
    if (value < 1.0)
      notes.push_back(std::string("GrowthRates.") + name +
                      " < 1: decline scenario, outside the usual regime");
  }
  return notes;
}

InvestmentSchedule::InvestmentSchedule(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  for (const auto& seg : segments_) {
    if (!(seg.duration_years > 0.0))
      throw DomainError("InvestmentSchedule: segment duration must be > 0");
    if (!(seg.yearly_growth_factor > 0.0) ||
        !std::isfinite(seg.yearly_growth_factor))
      throw DomainError(
          "InvestmentSchedule: segment growth factor must be finite and > 0");
  }
}

InvestmentSchedule InvestmentSchedule::constant(double yearly_growth_factor) {
  return InvestmentSchedule(
      {{std::numeric_limits<double>::infinity(), yearly_growth_factor}});
}

InvestmentSchedule InvestmentSchedule::unit() { return InvestmentSchedule(); }

double InvestmentSchedule::log_multiplier(double t) const {
  if (!(t >= 0.0)) throw DomainError("InvestmentSchedule: t must be >= 0");
  double remaining = t;
  double acc = 0.0;
  for (const auto& seg : segments_) {
    if (remaining <= 0.0) break;
    const double consumed = std::min(remaining, seg.duration_years);
    acc += consumed * std::log(seg.yearly_growth_factor);
    remaining -= consumed;
  }
  return acc;
}

double InvestmentSchedule::multiplier(double t) const {
  return std::exp(log_multiplier(t));
}

double loss_at_compute(const ScalingLaw& law, double compute) {
  if (!(compute > 0.0)) throw DomainError("loss_at_compute: compute must be > 0");
  return loss_at_log_compute(law, std::log(compute));
}

double loss_at_log_compute(const ScalingLaw& law, double log_compute) {
  return law.l_irreducible + law.a_coeff * std::exp(-law.alpha * log_compute);
}

double shifted_loss_at_compute(const ShiftedPowerLaw& law, double compute) {
  if (!(compute >= 0.0))
    throw DomainError("shifted_loss_at_compute: compute must be >= 0");
  return law.b_floor + law.a_coeff * std::pow(compute + law.c_shift, -law.alpha);
}

double log_effective_compute(double base_dollars, const GrowthRates& rates,
                             const InvestmentSchedule& schedule, double t) {
  if (!(base_dollars > 0.0))
    throw DomainError("effective_compute: base_dollars must be > 0");
  if (!(t >= 0.0)) throw DomainError("effective_compute: t must be >= 0");
  return std::log(base_dollars) + std::log(rates.flop_per_dollar_t0) +
         t * std::log(rates.g_alg * rates.g_h) + schedule.log_multiplier(t);
}

double effective_compute(double base_dollars, const GrowthRates& rates,
                         const InvestmentSchedule& schedule, double t) {
  return std::exp(log_effective_compute(base_dollars, rates, schedule, t));
}

}  // namespace meek
