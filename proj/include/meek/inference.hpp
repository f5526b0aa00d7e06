#pragma once

#include <optional>
#include <vector>

#include "meek/trajectory.hpp"

namespace meek {

// Inference-side inequality model: how large an effective model a fixed
// $/token budget can serve over time, and the loss gap against the SOTA
// training curve. law and rates normally mirror the fields inside sota;
// the config loader keeps them in sync.
struct InferenceConfig {
  ScalingLaw law;
  GrowthRates rates;
  double params_per_flop_t0 = 0.5;   // forward pass costs ~2 FLOP/param
  double chinchilla_kappa = 120.0;   // FLOP per param^2 (C = 6ND, D = 20N)
  ScenarioConfig sota;
  // Sensitivity switch: treat g_alg as 1 in both curves of this module.
  bool zero_algorithmic_gain = false;
};

void validate(const InferenceConfig& config);

// usd_per_token_budget * flop_per_dollar_t0 * params_per_flop_t0
//   * (g_h * g_inf)^t;  grows 9x/year with default rates.
double effective_params(const InferenceConfig& config, double t);

// Loss of the compute-optimal model matching effective_params(t):
// compute-equivalent kappa * P_eff(t)^2 * g_alg^t through the loss law,
// clamped from below by the SOTA loss at the same t (a meek user can
// always serve the best existing model instead).
double meek_inference_loss(const InferenceConfig& config, double t);

// Unclamped variant; used for crossover bracketing.
double meek_inference_loss_unclamped(const InferenceConfig& config, double t);

double inference_sota_loss(const InferenceConfig& config, double t);

// max(meek_inference_loss - SOTA loss, 0); identically 0 from the
// crossover onward.
double inference_loss_difference(const InferenceConfig& config, double t);

// Smallest t >= 0 with inference_loss_difference(t) = 0, by bisection.
// Returns nullopt when no crossover occurs within [0, sota.horizon].
std::optional<double> crossover_time(const InferenceConfig& config);

struct InferencePoint {
  double t;
  double meek_inference_loss;
  double sota_loss;
  double delta;
  bool clamped;
};

std::vector<InferencePoint> inference_series(const InferenceConfig& config);

}  // namespace meek
