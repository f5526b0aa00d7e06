#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "meek/trajectory.hpp"

namespace meek {

// Sequential probability ratio test configuration. Thresholds follow
// from the target error rates: A_th = (1-beta)/alpha > 1 and
// B_th = beta/(1-alpha) < 1. slowdown models an imperfect discriminator
// by dividing each log-Bayes-factor update; slowdown = 1 is ideal.
struct SprtConfig {
  double alpha_err = 0.05;
  double beta_err = 0.05;
  double slowdown = 1.0;
};

void validate(const SprtConfig& config);

double log_threshold_a(const SprtConfig& config);  // ln((1-beta)/alpha)
double log_threshold_b(const SprtConfig& config);  // ln(beta/(1-alpha))

// Finite categorical distribution over a token alphabet.
struct TokenDistribution {
  std::vector<double> probabilities;
};

// Entries must be >= 0 and sum to 1 within 1e-12.
void validate(const TokenDistribution& dist);

// Sum over tokens of p log(p/q); +inf when q = 0 where p > 0.
double kl_divergence(const TokenDistribution& p, const TokenDistribution& q);

enum class Hypothesis { ABetter, BBetter };

// Wald expected stopping time for the symmetric case alpha = beta:
//   slowdown * ((1-a) ln((1-a)/a) + a ln(a/(1-a))) / delta_l.
double expected_tokens_symmetric(double delta_l, const SprtConfig& config);

// General form. Under H_A the drift is +|delta_l| and
//   E[N] = ((1-beta) ln A_th + beta ln B_th) / drift;
// under H_B the drift is -|delta_l| and
//   E[N] = (alpha ln A_th + (1-alpha) ln B_th) / drift.
// Reduces to the symmetric form when alpha = beta.
double expected_tokens_general(double delta_l, const SprtConfig& config,
                               Hypothesis hypothesis);

enum class SprtDecision { AcceptA, AcceptB, NoDecision };

struct SprtOutcome {
  SprtDecision decision;
  long long tokens_used;
  // A sampled token had zero probability under exactly one model, which
  // settles the test with a single observation.
  bool infinite_evidence;
};

inline constexpr long long kDefaultMaxTokens = 10'000'000;

// Samples tokens i.i.d. from p0 and accumulates log(pA(x)/pB(x)) divided
// by the slowdown until a threshold is crossed. Deterministic given the
// seed. Runs that reach max_tokens return NoDecision.
SprtOutcome sprt_simulate(const TokenDistribution& p0,
                          const TokenDistribution& p_a,
                          const TokenDistribution& p_b,
                          const SprtConfig& config, std::uint64_t seed,
                          long long max_tokens = kDefaultMaxTokens);

struct MonteCarloReport {
  double mean_tokens;      // over decided runs
  double ci95_half_width;  // normal approximation, decided runs
  long long n_runs;
  double false_rate;  // decided runs disagreeing with the drift sign
  long long capped_runs;
  long long decided_runs;
};

// Aggregates sprt_simulate over `runs` independent streams seeded by
// (seed, run index). Runs execute in parallel when OpenMP is enabled;
// the reduction is serial in index order, so results are identical for
// any thread count and to the serial reference below.
MonteCarloReport monte_carlo_expected_tokens(
    const TokenDistribution& p0, const TokenDistribution& p_a,
    const TokenDistribution& p_b, const SprtConfig& config, long long runs,
    std::uint64_t seed, long long max_tokens = kDefaultMaxTokens);

// Single-threaded reference implementation kept for testing the
// parallel version against; must produce bit-identical reports.
MonteCarloReport monte_carlo_expected_tokens_serial(
    const TokenDistribution& p0, const TokenDistribution& p_a,
    const TokenDistribution& p_b, const SprtConfig& config, long long runs,
    std::uint64_t seed, long long max_tokens = kDefaultMaxTokens);

// expected_tokens_symmetric applied to the training loss difference on
// the scenario grid; +inf where the difference is 0 (indistinguishable).
std::vector<std::pair<double, double>> discrimination_series(
    const ScenarioConfig& scenario, const SprtConfig& config);

// Randomized categorical pair (p0 = pA, pB) whose log-likelihood-ratio
// spectrum is {+ln A_th, 0, ln B_th} (each magnitude widened by a 1e-9
// relative margin for floating-point safety), so every nonzero evidence
// step lands exactly on a decision threshold: the SPRT stops with zero
// overshoot, realized error rates equal the configured ones, and Wald's
// identity is exact. The alphabet partition and within-group masses are
// randomized; the target KL difference is met exactly. Throws when the
// target drift is infeasible for the thresholds (needs roughly
// target <= ln A_th * tanh(ln A_th / 2); ~2.4 nats at alpha=beta=0.05).
struct CategoricalPair {
  TokenDistribution p0;
  TokenDistribution p_b;
};

CategoricalPair make_lattice_pair(double target_delta_l,
                                  const SprtConfig& config,
                                  std::size_t alphabet, std::uint64_t seed);

// Generic exponential-tilt pair hitting the target KL difference. Its
// log-ratio spectrum is irregular, so threshold overshoot inflates
// Monte-Carlo stopping times above Wald's formula; kept for
// characterizing that bias.
CategoricalPair make_tilted_pair(double target_delta_l, std::size_t alphabet,
                                 std::uint64_t seed);

}  // namespace meek
