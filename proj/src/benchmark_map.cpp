#include "meek/benchmark_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace meek {

void validate(const ParametricLoss& pl) {
  if (!(pl.e_irreducible >= 0.0))
    throw DomainError("ParametricLoss.e_irreducible: must be >= 0");
  if (!(pl.a_n > 0.0)) throw DomainError("ParametricLoss.a_n: must be > 0");
  if (!(pl.alpha_n > 0.0))
    throw DomainError("ParametricLoss.alpha_n: must be > 0");
  if (!(pl.b_d > 0.0)) throw DomainError("ParametricLoss.b_d: must be > 0");
  if (!(pl.beta_d > 0.0))
    throw DomainError("ParametricLoss.beta_d: must be > 0");
}

double sigmoid_score(const SigmoidFit& fit, double loss) {
  const double e = std::exp(-fit.k * (loss - fit.x0));
  return fit.amplitude / (1.0 + e) + fit.b;
}

double p_task_score(const SigmoidFit& fit, double loss, int p) {
  if (p < 1) throw DomainError("p_task_score: p must be >= 1");
  return std::pow(sigmoid_score(fit, loss), p);
}

double loss_from_params_tokens(const ParametricLoss& pl, double n_params,
                               double d_tokens) {
  validate(pl);
  if (!(n_params > 0.0))
    throw DomainError("loss_from_params_tokens: n_params must be > 0");
  if (!(d_tokens > 0.0))
    throw DomainError("loss_from_params_tokens: d_tokens must be > 0");
  return pl.e_irreducible + pl.a_n * std::pow(n_params, -pl.alpha_n) +
         pl.b_d * std::pow(d_tokens, -pl.beta_d);
}

namespace {

// Fit parameters: (a, theta, x0, b) with amplitude = exp(a), k = -exp(theta).
struct FitParams {
  std::array<double, 4> v;
};

SigmoidFit to_fit(const FitParams& p) {
  return {std::exp(p.v[0]), -std::exp(p.v[1]), p.v[2], p.v[3]};
}

double model_eval(const FitParams& p, double loss) {
  const double k = std::exp(p.v[1]);
  double z = k * (loss - p.v[2]);
  z = std::clamp(z, -500.0, 500.0);
  return std::exp(p.v[0]) / (1.0 + std::exp(z)) + p.v[3];
}

// Weighted residuals r_i = sqrt(w_i) (model(L_i) - y_i) and their
// Jacobian; the square root makes an integer weight act as exact point
// multiplicity in the summed cost.
void residual_jacobian(const std::vector<LossScorePoint>& pts,
                       const FitParams& p, std::vector<double>& r,
                       std::vector<std::array<double, 4>>& jac) {
  const double amplitude = std::exp(p.v[0]);
  const double k = std::exp(p.v[1]);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i].loss - p.v[2];
    double z = std::clamp(k * x, -500.0, 500.0);
    const double e = std::exp(z);
    const double den = 1.0 + e;
    const double s = amplitude / den + p.v[3];
    const double w = std::sqrt(pts[i].weight);
    r[i] = w * (s - pts[i].score);
    const double d_den = -amplitude / (den * den);
    jac[i][0] = w * (amplitude / den);      // d/da, amplitude = exp(a)
    jac[i][1] = w * (d_den * e * k * x);    // d/dtheta via dz = k x dtheta
    jac[i][2] = w * (d_den * e * (-k));     // d/dx0
    jac[i][3] = w;                          // d/db
  }
}

double cost_of(const std::vector<double>& r) {
  double c = 0.0;
  for (double v : r) c += v * v;
  return 0.5 * c;
}

// Solve the 4x4 system M x = rhs by Gaussian elimination with partial
// pivoting; returns false on a (numerically) singular matrix.
bool solve4(std::array<std::array<double, 4>, 4> m, std::array<double, 4> rhs,
            std::array<double, 4>& x) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 4; ++row)
      if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
    if (std::fabs(m[pivot][col]) < 1e-300) return false;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int row = col + 1; row < 4; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= f * m[col][k];
      rhs[row] -= f * rhs[col];
    }
  }
  for (int row = 3; row >= 0; --row) {
    double acc = rhs[row];
    for (int k = row + 1; k < 4; ++k) acc -= m[row][k] * x[k];
    x[row] = acc / m[row][row];
  }
  return true;
}

struct StartResult {
  FitParams params;
  double cost;
  int iterations;
  bool converged;
};

StartResult run_start(const std::vector<LossScorePoint>& pts, FitParams p,
                      int max_iters) {
  const std::size_t n = pts.size();
  std::vector<double> r(n);
  std::vector<std::array<double, 4>> jac(n);
  residual_jacobian(pts, p, r, jac);
  double cost = cost_of(r);
  double lambda = 1e-3;
  bool converged = false;
  int floor_hits = 0;
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    std::array<double, 4> grad{};
    std::array<std::array<double, 4>, 4> hess{};
    for (std::size_t i = 0; i < n; ++i) {
      for (int a = 0; a < 4; ++a) {
        grad[a] += jac[i][a] * r[i];
        for (int b = a; b < 4; ++b) hess[a][b] += jac[i][a] * jac[i][b];
      }
    }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < a; ++b) hess[a][b] = hess[b][a];

    bool stepped = false;
    std::array<double, 4> step{};
    for (int attempt = 0; attempt < 30; ++attempt) {
      auto damped = hess;
      for (int a = 0; a < 4; ++a)
        damped[a][a] += lambda * std::max(hess[a][a], 1e-12);
      std::array<double, 4> rhs{-grad[0], -grad[1], -grad[2], -grad[3]};
      if (!solve4(damped, rhs, step)) {
        lambda *= 10.0;
        continue;
      }
      FitParams trial = p;
      for (int a = 0; a < 4; ++a) trial.v[a] += step[a];
      std::vector<double> r_trial(n);
      std::vector<std::array<double, 4>> jac_trial(n);
      residual_jacobian(pts, trial, r_trial, jac_trial);
      const double trial_cost = cost_of(r_trial);
      if (trial_cost < cost) {
        const double gain = cost - trial_cost;
        p = trial;
        r.swap(r_trial);
        jac.swap(jac_trial);
        cost = trial_cost;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        floor_hits = gain <= 1e-15 * std::max(cost, 1e-300) ? floor_hits + 1 : 0;
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) {
      converged = true;  // no descent direction left at machine precision
      break;
    }
    if (floor_hits >= 2) {
      converged = true;  // cost improvements are below rounding resolution
      break;
    }
    double step_norm = 0.0, p_norm = 0.0;
    for (int a = 0; a < 4; ++a) {
      step_norm += step[a] * step[a];
      p_norm += p.v[a] * p.v[a];
    }
    if (std::sqrt(step_norm) < 1e-12 * (1.0 + std::sqrt(p_norm))) {
      converged = true;
      break;
    }
  }
  return {p, cost, iter, converged};
}

double rmse_of(const std::vector<LossScorePoint>& pts, const FitParams& p) {
  double acc = 0.0;
  for (const auto& pt : pts) {
    const double d = model_eval(p, pt.loss) - pt.score;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(pts.size()));
}

}  // namespace

FitReport fit_sigmoid(const std::vector<LossScorePoint>& points) {
  if (points.size() < 4)
    throw InsufficientDataError("fit_sigmoid: need at least 4 points");
  std::set<double> distinct;
  double score_min = points[0].score, score_max = points[0].score;
  for (const auto& pt : points) {
    if (!(pt.weight > 0.0))
      throw DomainError("fit_sigmoid: weights must be > 0");
    distinct.insert(pt.loss);
    score_min = std::min(score_min, pt.score);
    score_max = std::max(score_max, pt.score);
  }
  if (distinct.size() < 3)
    throw InsufficientDataError(
        "fit_sigmoid: need at least 3 distinct loss values");

  std::vector<double> losses;
  losses.reserve(points.size());
  for (const auto& pt : points) losses.push_back(pt.loss);
  std::sort(losses.begin(), losses.end());
  const auto loss_quantile = [&](double q) {
    const double pos = q * static_cast<double>(losses.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= losses.size()) return losses.back();
    return losses[i] * (1.0 - frac) + losses[i + 1] * frac;
  };

  const double amp0 = std::max(score_max - score_min, 1e-3);
  const double b0 = std::max(score_min, 0.0);
  const double x0_q[8] = {0.5, 0.35, 0.65, 0.2, 0.8, 0.5, 0.5, 0.5};
  const double k_mag[8] = {2.0, 2.0, 2.0, 4.0, 4.0, 1.0, 8.0, 0.5};

  bool have_best = false;
  StartResult best{};
  for (int s = 0; s < 8; ++s) {
    FitParams p{{std::log(amp0), std::log(k_mag[s]), loss_quantile(x0_q[s]),
                 b0}};
    const StartResult res = run_start(points, p, 400);
    const bool better =
        !have_best || (res.converged && !best.converged) ||
        (res.converged == best.converged && res.cost < best.cost);
    if (better) {
      best = res;
      have_best = true;
    }
  }

  const FitReport report{to_fit(best.params), rmse_of(points, best.params),
                         best.iterations};
  if (!best.converged)
    throw ConvergenceError("fit_sigmoid: no start converged within 400 iterations",
                           report);
  return report;
}

std::map<int, std::vector<std::pair<double, double>>> benchmark_gap_series(
    const ScenarioConfig& config, const SigmoidFit& fit,
    const std::vector<int>& p_values) {
  validate(config);
  std::map<int, std::vector<std::pair<double, double>>> out;
  const long long n =
      static_cast<long long>(std::floor(config.horizon / config.step *
                                        (1.0 + 1e-12))) +
      1;
  for (int p : p_values) {
    if (p < 1) throw DomainError("benchmark_gap_series: p values must be >= 1");
    auto& series = out[p];
    series.resize(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * config.step;
      const double gap = p_task_score(fit, sota_loss(config, t), p) -
                         p_task_score(fit, meek_loss(config, t), p);
      series[static_cast<std::size_t>(i)] = {t, gap};
    }
  }
  return out;
}

}  // namespace meek
