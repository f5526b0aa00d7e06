#pragma once

#include <string>
#include <vector>

#include "meek/errors.hpp"

namespace meek {

// Power-law loss curve L(C) = a_coeff * C^(-alpha) + l_irreducible.
struct ScalingLaw {
  double a_coeff = 1070.0;
  double alpha = 0.155;
  double l_irreducible = 1.7;
};

// Shifted variant b_floor + a_coeff / (C + c_shift)^alpha; defined at
// C = 0 thanks to the compute offset.
struct ShiftedPowerLaw {
  double a_coeff = 0.26;
  double c_shift = 0.01;
  double alpha = 0.35;
  double b_floor = 0.09;
};

// Yearly multiplicative progress factors plus the two dollar anchors.
// flop_per_dollar_t0 applies at t = 0 and improves only through g_h;
// algorithmic progress acts as an effective-compute multiplier instead.
struct GrowthRates {
  double g_h = 1.4;        // hardware price-performance per year
  double g_alg = 2.8;      // training algorithmic efficiency per year
  double g_i = 5.0 / 1.4;  // SOTA investment growth per year
  double g_inf = 9.0 / 1.4;  // inference software efficiency per year
  double flop_per_dollar_t0 = 1e17;
  double usd_per_token_budget = 1e-8;  // meek inference budget, $/token
};

void validate(const ScalingLaw& law);
void validate(const ShiftedPowerLaw& law);
void validate(const GrowthRates& rates);

// Notes for permitted-but-unusual values (growth factors below 1).
std::vector<std::string> validation_warnings(const GrowthRates& rates);

// Piecewise-constant yearly growth. Each segment applies its factor for
// its duration; time past the end of the last segment grows with factor
// 1, and a single segment with infinite duration reproduces pure
// exponential growth g^t.
class InvestmentSchedule {
 public:
  struct Segment {
    double duration_years;        // > 0; may be +infinity
    double yearly_growth_factor;  // > 0
  };

  InvestmentSchedule() = default;  // unit schedule
  explicit InvestmentSchedule(std::vector<Segment> segments);

  static InvestmentSchedule constant(double yearly_growth_factor);
  static InvestmentSchedule unit();

  // Product over segments of factor^(time spent in segment) for the
  // interval [0, t]; continuous and piecewise-smooth in t.
  double multiplier(double t) const;
  double log_multiplier(double t) const;

  const std::vector<Segment>& segments() const { return segments_; }

 private:
  std::vector<Segment> segments_;
};

double loss_at_compute(const ScalingLaw& law, double compute);

// Same curve evaluated from log(compute); avoids overflow on
// long-horizon sweeps where compute itself exceeds double range.
double loss_at_log_compute(const ScalingLaw& law, double log_compute);

double shifted_loss_at_compute(const ShiftedPowerLaw& law, double compute);

// base_dollars * flop_per_dollar_t0 * (g_alg*g_h)^t * schedule(t).
// A unit schedule gives the meek side; a constant-g_i schedule gives
// the SOTA side. May overflow to +inf for extreme horizons; use the
// log form for loss evaluation in that regime.
double effective_compute(double base_dollars, const GrowthRates& rates,
                         const InvestmentSchedule& schedule, double t);
double log_effective_compute(double base_dollars, const GrowthRates& rates,
                             const InvestmentSchedule& schedule, double t);

}  // namespace meek
