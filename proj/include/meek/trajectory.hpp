#pragma once

#include <map>
#include <optional>
#include <vector>

#include "meek/core_laws.hpp"

namespace meek {

// One forecasting scenario: shared loss curve and growth rates, the two
// initial budgets, the SOTA investment schedule, and the output grid.
// When sota_schedule is not set, constant growth at rates.g_i is used.
struct ScenarioConfig {
  ScalingLaw law;
  GrowthRates rates;
  double meek_budget = 1000.0;
  double sota_budget_t0 = 1000.0;
  std::optional<InvestmentSchedule> sota_schedule;
  double horizon = 20.0;
  double step = 0.25;
};

void validate(const ScenarioConfig& config);

InvestmentSchedule sota_schedule_or_default(const ScenarioConfig& config);

struct TrajectoryPoint {
  double t;
  double loss_meek;
  double loss_sota;
  double delta;  // loss_meek - loss_sota
};

double meek_loss(const ScenarioConfig& config, double t);
double sota_loss(const ScenarioConfig& config, double t);

// Meek loss minus SOTA loss at time t; the irreducible term cancels.
// Negative values are reported as-is for pathological schedules (the
// training side has no clamp).
double loss_difference(const ScenarioConfig& config, double t);

// Closed-form maximizer of the equal-budget loss difference:
//   t* = ln( ln(g_h g_alg g_i) / ln(g_h g_alg) ) / (alpha ln g_i).
// Independent of the budget and of the loss coefficient. Throws
// NoInflectionError for g_i <= 1 (monotone difference) and DomainError
// for g_h*g_alg <= 1.
double inflection_time(const GrowthRates& rates, double alpha);

// Numeric argmax of loss_difference: coarse grid over [0, 100] years
// (step 0.25) to bracket, golden-section to absolute tol 1e-8, then a
// parabolic-vertex step over a wide stencil to get below the rounding
// noise of the objective. Serves as the independent check on
// inflection_time.
double numeric_inflection_time(const ScenarioConfig& config);

// Points at t = 0, step, 2*step, ... <= horizon.
std::vector<TrajectoryPoint> trajectory_series(const ScenarioConfig& config);

// One series per g_i value; each run overrides rates.g_i and uses a
// constant schedule at that value. Keys are the override values.
std::map<double, std::vector<TrajectoryPoint>> growth_sweep(
    const ScenarioConfig& config, const std::vector<double>& g_i_values);

// One series per initial SOTA budget; meek budget held fixed.
std::map<double, std::vector<TrajectoryPoint>> capital_sweep(
    const ScenarioConfig& config, const std::vector<double>& sota_budgets_t0);

}  // namespace meek
