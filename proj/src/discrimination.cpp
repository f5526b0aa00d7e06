#include "meek/discrimination.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include "meek/rng.hpp"

namespace meek {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

void validate(const SprtConfig& config) {
  if (!(config.alpha_err > 0.0 && config.alpha_err < 0.5))
    throw DomainError("SprtConfig.alpha_err: must be in (0, 0.5)");
  if (!(config.beta_err > 0.0 && config.beta_err < 0.5))
    throw DomainError("SprtConfig.beta_err: must be in (0, 0.5)");
  if (!(config.slowdown >= 1.0))
    throw DomainError("SprtConfig.slowdown: must be >= 1");
}

double log_threshold_a(const SprtConfig& config) {
  return std::log((1.0 - config.beta_err) / config.alpha_err);
}

double log_threshold_b(const SprtConfig& config) {
  return std::log(config.beta_err / (1.0 - config.alpha_err));
}

void validate(const TokenDistribution& dist) {
  if (dist.probabilities.empty())
    throw DomainError("TokenDistribution: empty alphabet");
  double sum = 0.0;
  for (double p : dist.probabilities) {
    if (!(p >= 0.0))
      throw DomainError("TokenDistribution: probabilities must be >= 0");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw DomainError("TokenDistribution: probabilities must sum to 1");
}

double kl_divergence(const TokenDistribution& p, const TokenDistribution& q) {
  validate(p);
  validate(q);
  if (p.probabilities.size() != q.probabilities.size())
    throw DomainError("kl_divergence: alphabet sizes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.probabilities.size(); ++i) {
    const double pi = p.probabilities[i];
    if (pi == 0.0) continue;
    const double qi = q.probabilities[i];
    if (qi == 0.0) return kInf;
    acc += pi * std::log(pi / qi);
  }
  return acc;
}

double expected_tokens_symmetric(double delta_l, const SprtConfig& config) {
  validate(config);
  if (config.alpha_err != config.beta_err)
    throw DomainError(
        "expected_tokens_symmetric: requires alpha_err = beta_err");
  if (!(delta_l > 0.0))
    throw DomainError("expected_tokens_symmetric: delta_l must be > 0");
  const double a = config.alpha_err;
  const double numerator =
      (1.0 - a) * std::log((1.0 - a) / a) + a * std::log(a / (1.0 - a));
  // Grouped so the result scales exactly with the slowdown factor.
  return config.slowdown * (numerator / delta_l);
}

double expected_tokens_general(double delta_l, const SprtConfig& config,
                               Hypothesis hypothesis) {
  validate(config);
  if (delta_l == 0.0)
    throw DomainError("expected_tokens_general: delta_l must be nonzero");
  const double ln_a = log_threshold_a(config);
  const double ln_b = log_threshold_b(config);
  const double magnitude = std::fabs(delta_l);
  if (hypothesis == Hypothesis::ABetter) {
    return config.slowdown *
           (((1.0 - config.beta_err) * ln_a + config.beta_err * ln_b) /
            magnitude);
  }
  return config.slowdown *
         ((config.alpha_err * ln_a + (1.0 - config.alpha_err) * ln_b) /
          (-magnitude));
}

namespace {

// Per-token evidence classes: finite log ratio, or an infinite-evidence
// token (zero probability under exactly one model).
enum class TokenClass : std::int8_t { Finite = 0, InfiniteA = 1, InfiniteB = 2 };

struct PreparedSprt {
  CategoricalSampler sampler;
  std::vector<double> log_ratio;
  std::vector<TokenClass> token_class;
  double ln_a;
  double ln_b;
  double inv_slowdown;
};

PreparedSprt prepare(const TokenDistribution& p0, const TokenDistribution& p_a,
                     const TokenDistribution& p_b, const SprtConfig& config) {
  validate(config);
  validate(p0);
  validate(p_a);
  validate(p_b);
  const std::size_t n = p0.probabilities.size();
  if (p_a.probabilities.size() != n || p_b.probabilities.size() != n)
    throw DomainError("sprt_simulate: alphabet sizes differ");
  std::vector<double> log_ratio(n, 0.0);
  std::vector<TokenClass> token_class(n, TokenClass::Finite);
  for (std::size_t i = 0; i < n; ++i) {
    if (p0.probabilities[i] == 0.0) continue;
    const double pa = p_a.probabilities[i];
    const double pb = p_b.probabilities[i];
    if (pa == 0.0 && pb == 0.0)
      throw DomainError(
          "sprt_simulate: token possible under p0 but impossible under both "
          "models");
    if (pb == 0.0) {
      token_class[i] = TokenClass::InfiniteA;
    } else if (pa == 0.0) {
      token_class[i] = TokenClass::InfiniteB;
    } else {
      log_ratio[i] = std::log(pa / pb);
    }
  }
  return {CategoricalSampler(p0.probabilities), std::move(log_ratio),
          std::move(token_class), log_threshold_a(config),
          log_threshold_b(config), 1.0 / config.slowdown};
}

SprtOutcome run_one(const PreparedSprt& prep, Xoshiro256pp& rng,
                    long long max_tokens) {
  double z = 0.0;
  for (long long n = 1; n <= max_tokens; ++n) {
    const std::size_t idx = prep.sampler(rng);
    switch (prep.token_class[idx]) {
      case TokenClass::InfiniteA:
        return {SprtDecision::AcceptA, n, true};
      case TokenClass::InfiniteB:
        return {SprtDecision::AcceptB, n, true};
      case TokenClass::Finite:
        break;
    }
    z += prep.log_ratio[idx] * prep.inv_slowdown;
    if (z >= prep.ln_a) return {SprtDecision::AcceptA, n, false};
    if (z <= prep.ln_b) return {SprtDecision::AcceptB, n, false};
  }
  return {SprtDecision::NoDecision, max_tokens, false};
}

// Sign of the p0-expected log ratio; decides which hypothesis is true
// for false-decision accounting. NaN when undefined.
double drift_of(const TokenDistribution& p0, const PreparedSprt& prep) {
  bool pos_inf = false, neg_inf = false;
  double acc = 0.0;
  for (std::size_t i = 0; i < p0.probabilities.size(); ++i) {
    if (p0.probabilities[i] == 0.0) continue;
    switch (prep.token_class[i]) {
      case TokenClass::InfiniteA:
        pos_inf = true;
        break;
      case TokenClass::InfiniteB:
        neg_inf = true;
        break;
      case TokenClass::Finite:
        acc += p0.probabilities[i] * prep.log_ratio[i];
        break;
    }
  }
  if (pos_inf && neg_inf) return kNan;
  if (pos_inf) return kInf;
  if (neg_inf) return -kInf;
  return acc;
}

MonteCarloReport aggregate(const std::vector<long long>& tokens,
                           const std::vector<std::int8_t>& decisions,
                           double drift) {
  const long long runs = static_cast<long long>(tokens.size());
  long long capped = 0;
  long long decided = 0;
  long long token_sum = 0;
  long long false_count = 0;
  const bool truth_known = !std::isnan(drift) && drift != 0.0;
  const std::int8_t truth = drift > 0.0 ? 1 : -1;
  for (long long i = 0; i < runs; ++i) {
    if (decisions[i] == 0) {
      ++capped;
      continue;
    }
    ++decided;
    token_sum += tokens[i];
    if (truth_known && decisions[i] != truth) ++false_count;
  }
  MonteCarloReport report{};
  report.n_runs = runs;
  report.capped_runs = capped;
  report.decided_runs = decided;
  if (decided == 0) {
    report.mean_tokens = kNan;
    report.ci95_half_width = kNan;
    report.false_rate = kNan;
    return report;
  }
  const double mean =
      static_cast<double>(token_sum) / static_cast<double>(decided);
  // Compensated summation keeps the variance independent of thread
  // count and run order.
  double var_acc = 0.0, comp = 0.0;
  for (long long i = 0; i < runs; ++i) {
    if (decisions[i] == 0) continue;
    const double d = static_cast<double>(tokens[i]) - mean;
    const double term = d * d - comp;
    const double next = var_acc + term;
    comp = (next - var_acc) - term;
    var_acc = next;
  }
  const double variance =
      decided > 1 ? var_acc / static_cast<double>(decided - 1) : 0.0;
  report.mean_tokens = mean;
  report.ci95_half_width =
      1.96 * std::sqrt(variance / static_cast<double>(decided));
  report.false_rate =
      truth_known
          ? static_cast<double>(false_count) / static_cast<double>(decided)
          : kNan;
  return report;
}

MonteCarloReport monte_carlo_impl(const TokenDistribution& p0,
                                  const TokenDistribution& p_a,
                                  const TokenDistribution& p_b,
                                  const SprtConfig& config, long long runs,
                                  std::uint64_t seed, long long max_tokens,
                                  bool parallel) {
  if (runs < 1) throw DomainError("monte_carlo_expected_tokens: runs must be >= 1");
  if (max_tokens < 1)
    throw DomainError("monte_carlo_expected_tokens: max_tokens must be >= 1");
  const PreparedSprt prep = prepare(p0, p_a, p_b, config);
  std::vector<long long> tokens(static_cast<std::size_t>(runs));
  std::vector<std::int8_t> decisions(static_cast<std::size_t>(runs));
  const auto fill_run = [&](long long i) {
    Xoshiro256pp rng(seed, static_cast<std::uint64_t>(i));
    const SprtOutcome out = run_one(prep, rng, max_tokens);
    tokens[static_cast<std::size_t>(i)] = out.tokens_used;
    decisions[static_cast<std::size_t>(i)] =
        out.decision == SprtDecision::AcceptA
            ? 1
            : (out.decision == SprtDecision::AcceptB ? -1 : 0);
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < runs; ++i) fill_run(i);
  } else {
    for (long long i = 0; i < runs; ++i) fill_run(i);
  }
  return aggregate(tokens, decisions, drift_of(p0, prep));
}

}  // namespace

SprtOutcome sprt_simulate(const TokenDistribution& p0,
                          const TokenDistribution& p_a,
                          const TokenDistribution& p_b,
                          const SprtConfig& config, std::uint64_t seed,
                          long long max_tokens) {
  if (max_tokens < 1)
    throw DomainError("sprt_simulate: max_tokens must be >= 1");
  const PreparedSprt prep = prepare(p0, p_a, p_b, config);
  Xoshiro256pp rng(seed);
  return run_one(prep, rng, max_tokens);
}

MonteCarloReport monte_carlo_expected_tokens(
    const TokenDistribution& p0, const TokenDistribution& p_a,
    const TokenDistribution& p_b, const SprtConfig& config, long long runs,
    std::uint64_t seed, long long max_tokens) {
  return monte_carlo_impl(p0, p_a, p_b, config, runs, seed, max_tokens, true);
}

MonteCarloReport monte_carlo_expected_tokens_serial(
    const TokenDistribution& p0, const TokenDistribution& p_a,
    const TokenDistribution& p_b, const SprtConfig& config, long long runs,
    std::uint64_t seed, long long max_tokens) {
  return monte_carlo_impl(p0, p_a, p_b, config, runs, seed, max_tokens, false);
}

std::vector<std::pair<double, double>> discrimination_series(
    const ScenarioConfig& scenario, const SprtConfig& config) {
  validate(scenario);
  validate(config);
  const long long n =
      static_cast<long long>(std::floor(scenario.horizon / scenario.step *
                                        (1.0 + 1e-12))) +
      1;
  std::vector<std::pair<double, double>> out(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * scenario.step;
    const double delta = loss_difference(scenario, t);
    out[static_cast<std::size_t>(i)] = {
        t, delta > 0.0 ? expected_tokens_symmetric(delta, config) : kInf};
  }
  return out;
}

CategoricalPair make_lattice_pair(double target_delta_l,
                                  const SprtConfig& config,
                                  std::size_t alphabet, std::uint64_t seed) {
  validate(config);
  if (!(target_delta_l > 0.0))
    throw DomainError("make_lattice_pair: target_delta_l must be > 0");
  if (alphabet < 3)
    throw DomainError("make_lattice_pair: alphabet must have >= 3 tokens");
  // Jump magnitudes sit a hair beyond the thresholds so a crossing
  // survives floating-point rounding of the accumulated sum.
  const double margin = 1.0 + 1e-9;
  const double a = log_threshold_a(config) * margin;
  const double b = -log_threshold_b(config) * margin;
  // pB reweights group-A tokens by e^{-a} and group-B tokens by e^{+b};
  // pB summing to 1 forces q = p (1 - e^{-a}) / (e^{b} - 1), and the
  // drift p a - q b must equal the target.
  const double q_over_p = (1.0 - std::exp(-a)) / std::expm1(b);
  const double denom = a - b * q_over_p;
  const double p = target_delta_l / denom;
  const double q = p * q_over_p;
  const double r = 1.0 - p - q;
  if (!(r > 0.01))
    throw DomainError(
        "make_lattice_pair: target_delta_l infeasible for these thresholds");

  Xoshiro256pp rng(seed);
  // Random three-way alphabet split, each group non-empty.
  std::size_t size_a = 1 + static_cast<std::size_t>(
                               rng.next_double() *
                               static_cast<double>(alphabet - 2));
  std::size_t size_b = 1 + static_cast<std::size_t>(
                               rng.next_double() *
                               static_cast<double>(alphabet - size_a - 1));
  if (size_a > alphabet - 2) size_a = alphabet - 2;
  if (size_b > alphabet - size_a - 1) size_b = alphabet - size_a - 1;

  CategoricalPair pair;
  pair.p0.probabilities.resize(alphabet);
  pair.p_b.probabilities.resize(alphabet);
  const double group_mass[3] = {p, q, r};
  const double factors[3] = {std::exp(-a), std::exp(b), 1.0};
  const std::size_t bounds[3] = {size_a, size_a + size_b, alphabet};
  std::size_t start = 0;
  for (int g = 0; g < 3; ++g) {
    const std::size_t end = bounds[g];
    double raw_sum = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      const double raw = -std::log(1.0 - rng.next_double());
      pair.p0.probabilities[i] = raw;
      raw_sum += raw;
    }
    for (std::size_t i = start; i < end; ++i) {
      pair.p0.probabilities[i] *= group_mass[g] / raw_sum;
      pair.p_b.probabilities[i] = pair.p0.probabilities[i] * factors[g];
    }
    start = end;
  }
  return pair;
}

CategoricalPair make_tilted_pair(double target_delta_l, std::size_t alphabet,
                                 std::uint64_t seed) {
  if (!(target_delta_l > 0.0))
    throw DomainError("make_tilted_pair: target_delta_l must be > 0");
  if (alphabet < 2)
    throw DomainError("make_tilted_pair: alphabet must have >= 2 tokens");
  Xoshiro256pp rng(seed);
  std::vector<double> p0(alphabet), eps(alphabet);
  double sum = 0.0;
  for (std::size_t i = 0; i < alphabet; ++i) {
    p0[i] = -std::log(1.0 - rng.next_double());
    sum += p0[i];
  }
  for (auto& v : p0) v /= sum;
  for (auto& e : eps) e = rng.next_normal();

  const auto kl_at = [&](double s) {
    double w_sum = 0.0;
    std::vector<double> w(alphabet);
    for (std::size_t i = 0; i < alphabet; ++i) {
      w[i] = p0[i] * std::exp(-s * eps[i]);
      w_sum += w[i];
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < alphabet; ++i)
      kl += p0[i] * std::log(p0[i] / (w[i] / w_sum));
    return kl;
  };

  double lo = 0.0, hi = 1e-6;
  while (kl_at(hi) < target_delta_l) {
    hi *= 2.0;
    if (hi > 1e9)
      throw DomainError("make_tilted_pair: target_delta_l unreachable");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (kl_at(mid) < target_delta_l)
      lo = mid;
    else
      hi = mid;
  }
  const double s = 0.5 * (lo + hi);

  CategoricalPair pair;
  pair.p0.probabilities = p0;
  pair.p_b.probabilities.resize(alphabet);
  double w_sum = 0.0;
  for (std::size_t i = 0; i < alphabet; ++i) {
    pair.p_b.probabilities[i] = p0[i] * std::exp(-s * eps[i]);
    w_sum += pair.p_b.probabilities[i];
  }
  for (auto& v : pair.p_b.probabilities) v /= w_sum;
  return pair;
}

}  // namespace meek
