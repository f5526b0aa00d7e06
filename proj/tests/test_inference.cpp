#include <doctest.h>

#include <cmath>
#include <optional>

#include "meek/inference.hpp"

using namespace meek;

TEST_CASE("token budget buys a half-billion-parameter model at t = 0") {
  const InferenceConfig config;
  CHECK(effective_params(config, 0.0) == 5e8);
}

TEST_CASE("effective parameters grow ninefold per year at default rates") {
  const InferenceConfig config;
  CHECK(effective_params(config, 1.0) ==
        doctest::Approx(4.5e9).epsilon(1e-12));
  for (double t : {0.5, 3.0, 11.0}) {
    CHECK(effective_params(config, t + 1.0) / effective_params(config, t) ==
          doctest::Approx(9.0).epsilon(1e-12));
  }
}

TEST_CASE("unclamped inference loss at t = 0 matches the frozen value") {
  const InferenceConfig config;
  CHECK(meek_inference_loss_unclamped(config, 0.0) ==
        doctest::Approx(2.7243066286606714).epsilon(1e-12));
  CHECK(inference_loss_difference(config, 0.0) ==
        doctest::Approx(0.17437541750568997).epsilon(1e-9));
}

TEST_CASE("crossover lands inside the first half year") {
  const InferenceConfig config;
  const std::optional<double> crossover = crossover_time(config);
  REQUIRE(crossover.has_value());
  CHECK(*crossover == doctest::Approx(0.4323044684715569).epsilon(1e-9));
  CHECK(std::abs(*crossover - 0.4323044683) < 1e-6);

  const double before = *crossover - 1e-4;
  const double after = *crossover + 1e-4;
  CHECK(meek_inference_loss_unclamped(config, before) >
        inference_sota_loss(config, before));
  CHECK(meek_inference_loss_unclamped(config, after) <
        inference_sota_loss(config, after));
}

TEST_CASE("the difference is identically zero from the crossover onward") {
  const InferenceConfig config;
  for (double t : {0.5, 1.0, 5.0, 20.0}) {
    CHECK(inference_loss_difference(config, t) == 0.0);
    CHECK(meek_inference_loss(config, t) == inference_sota_loss(config, t));
  }
  for (double t : {0.0, 0.25}) {
    CHECK(inference_loss_difference(config, t) > 0.0);
  }
}

TEST_CASE("series flags clamped points and matches the scalar functions") {
  const InferenceConfig config;
  const auto series = inference_series(config);
  REQUIRE(series.size() == 81);
  CHECK(series.front().t == 0.0);
  CHECK(series.back().t == 20.0);
  for (const auto& point : series) {
    CHECK(point.meek_inference_loss ==
          meek_inference_loss(config, point.t));
    CHECK(point.sota_loss == inference_sota_loss(config, point.t));
    CHECK(point.delta == inference_loss_difference(config, point.t));
    CHECK(point.clamped == (point.delta == 0.0));
  }
  CHECK_FALSE(series[0].clamped);
  CHECK_FALSE(series[1].clamped);
  CHECK(series[2].clamped);
}

TEST_CASE("a lavish token budget crosses over immediately") {
  InferenceConfig config;
  config.rates.usd_per_token_budget = 1.0;
  config.sota.rates.usd_per_token_budget = 1.0;
  const auto crossover = crossover_time(config);
  REQUIRE(crossover.has_value());
  CHECK(*crossover == 0.0);
  CHECK(inference_loss_difference(config, 0.0) == 0.0);
}

TEST_CASE("no crossover is reported inside a too-short horizon") {
  InferenceConfig config;
  config.sota.horizon = 0.25;
  CHECK_FALSE(crossover_time(config).has_value());
}

TEST_CASE("factoring out algorithmic gains leaves the conclusion intact") {
  const InferenceConfig base;
  InferenceConfig frozen = base;
  frozen.zero_algorithmic_gain = true;
  CHECK(inference_loss_difference(frozen, 0.0) ==
        inference_loss_difference(base, 0.0));
  const auto base_cross = crossover_time(base);
  const auto frozen_cross = crossover_time(frozen);
  REQUIRE(base_cross.has_value());
  REQUIRE(frozen_cross.has_value());
  // The shared g_alg^t factor scales both effective computes equally, so
  // the sign of the raw difference is unchanged at every t and bisection
  // lands on the same root.
  CHECK(*frozen_cross == *base_cross);
  CHECK(*frozen_cross > 0.0);
  // Away from the endpoints the gap itself is wider without the gains.
  const double mid = 0.5 * *base_cross;
  CHECK(inference_loss_difference(frozen, mid) >
        inference_loss_difference(base, mid));
  CHECK(inference_loss_difference(frozen, *frozen_cross + 1.0) == 0.0);
}

TEST_CASE("inference validation rejects non-positive anchors") {
  CHECK_NOTHROW(validate(InferenceConfig{}));
  InferenceConfig config;
  config.params_per_flop_t0 = 0.0;
  CHECK_THROWS_AS(validate(config), DomainError);
  config = InferenceConfig{};
  config.chinchilla_kappa = -120.0;
  CHECK_THROWS_AS(validate(config), DomainError);
  CHECK_THROWS_AS(effective_params(InferenceConfig{}, -1.0), DomainError);
}
