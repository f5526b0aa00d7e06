#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "meek/trajectory.hpp"

namespace meek {

// Benchmark score as a function of loss:
//   score(L) = amplitude / (1 + e^{-k (L - x0)}) + b.
// Benchmark fits use k < 0 and amplitude > 0 so the score is monotone
// non-increasing in loss; the type itself allows either orientation.
struct SigmoidFit {
  double amplitude;
  double k;
  double x0;
  double b;
};

// Two-variable parametric loss
//   loss(N, D) = e_irreducible + a_n N^{-alpha_n} + b_d D^{-beta_d}.
// Coefficient values are data and ship in the presets, not in code.
struct ParametricLoss {
  double e_irreducible{};
  double a_n{};
  double alpha_n{};
  double b_d{};
  double beta_d{};
};

void validate(const ParametricLoss& pl);

struct LossScorePoint {
  double loss;
  double score;
  double weight = 1.0;
};

struct FitReport {
  SigmoidFit fit;
  double rmse;
  int iterations;  // of the winning start
};

// Fit iteration stopped without meeting the step-size criterion; carries
// the best parameters reached so callers can inspect or reuse them.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& message, FitReport best)
      : std::runtime_error(message), best_(best) {}
  const FitReport& best() const { return best_; }

 private:
  FitReport best_;
};

double sigmoid_score(const SigmoidFit& fit, double loss);

// sigmoid_score raised to the p-th power: success probability of a task
// needing p independent benchmark-level steps. p must be >= 1.
double p_task_score(const SigmoidFit& fit, double loss, int p);

// Weighted least squares via damped Gauss-Newton with 8 deterministic
// multi-starts. Monotonicity is built into the parameterization
// (k = -exp(theta), amplitude = exp(a)), so every returned fit is
// non-increasing in loss. Requires >= 4 points with >= 3 distinct loss
// values; throws InsufficientDataError otherwise and ConvergenceError
// (carrying the best parameters) if no start converges.
FitReport fit_sigmoid(const std::vector<LossScorePoint>& points);

double loss_from_params_tokens(const ParametricLoss& pl, double n_params,
                               double d_tokens);

// gap_p(t) = p_task_score(loss_sota(t), p) - p_task_score(loss_meek(t), p)
// on the scenario grid, for each requested p.
std::map<int, std::vector<std::pair<double, double>>> benchmark_gap_series(
    const ScenarioConfig& config, const SigmoidFit& fit,
    const std::vector<int>& p_values);

}  // namespace meek
