#include <doctest.h>

#include <cmath>
#include <vector>

#include "meek/rng.hpp"
#include "meek/trajectory.hpp"

using namespace meek;

namespace {

ScenarioConfig defaults() { return ScenarioConfig{}; }

}  // namespace

TEST_CASE("closed-form inflection time matches the frozen default value") {
  CHECK(inflection_time(GrowthRates{}, 0.155) ==
        doctest::Approx(3.3372307264539036).epsilon(1e-12));
}

TEST_CASE("numeric argmax agrees with the closed form") {
  const ScenarioConfig config = defaults();
  const double closed = inflection_time(config.rates, config.law.alpha);
  const double numeric = numeric_inflection_time(config);
  CHECK(numeric == doctest::Approx(3.3372307274586555).epsilon(1e-12));
  CHECK(std::abs(closed - numeric) < 1e-6);
}

TEST_CASE("a flatter loss exponent pushes the inflection out to a decade") {
  const double t = inflection_time(GrowthRates{}, 0.057);
  CHECK(t == doctest::Approx(9.074925659655351).epsilon(1e-12));
  CHECK(std::abs(t - 10.0) < 1.5);
}

TEST_CASE("closed form tracks the numeric argmax across random rates") {
  Xoshiro256pp rng(314);
  int tested = 0;
  for (int i = 0; i < 50; ++i) {
    ScenarioConfig config = defaults();
    config.rates.g_h = 1.05 + 0.95 * rng.next_double();
    config.rates.g_alg = 1.2 + 2.8 * rng.next_double();
    config.rates.g_i = 1.5 + 8.5 * rng.next_double();
    config.law.alpha = 0.05 + 0.4 * rng.next_double();
    const double closed = inflection_time(config.rates, config.law.alpha);
    if (closed < 0.05 || closed > 90.0) continue;
    ++tested;
    CHECK(std::abs(closed - numeric_inflection_time(config)) < 1e-6);
  }
  CHECK(tested > 25);
}

TEST_CASE("inflection time requires growing investment and compute gains") {
  GrowthRates rates;
  rates.g_i = 1.0;
  CHECK_THROWS_AS(inflection_time(rates, 0.155), NoInflectionError);
  rates.g_i = 0.9;
  CHECK_THROWS_AS(inflection_time(rates, 0.155), NoInflectionError);

  rates = GrowthRates{};
  rates.g_h = 0.5;
  rates.g_alg = 1.0;
  bool saw_plain_domain_error = false;
  try {
    inflection_time(rates, 0.155);
  } catch (const NoInflectionError&) {
  } catch (const DomainError&) {
    saw_plain_domain_error = true;
  }
  CHECK(saw_plain_domain_error);

  CHECK_THROWS_AS(inflection_time(GrowthRates{}, 0.0), DomainError);
  CHECK_THROWS_AS(inflection_time(GrowthRates{}, -0.1), DomainError);
}

TEST_CASE("equal budgets start with zero loss difference") {
  const ScenarioConfig config = defaults();
  CHECK(loss_difference(config, 0.0) == 0.0);
  CHECK(meek_loss(config, 0.0) == sota_loss(config, 0.0));
}

TEST_CASE("loss difference peaks at the inflection time") {
  const ScenarioConfig config = defaults();
  const double t_star = inflection_time(config.rates, config.law.alpha);
  const double peak = loss_difference(config, t_star);
  CHECK(peak == doctest::Approx(0.202237696573).epsilon(1e-9));
  for (double t = 0.0; t <= 100.0; t += 0.05) {
    CHECK(peak >= loss_difference(config, t) - 1e-12);
  }
}

TEST_CASE("loss difference rises before the peak and decays after") {
  const ScenarioConfig config = defaults();
  const double t_star = inflection_time(config.rates, config.law.alpha);
  for (double t = 0.0; t + 0.1 <= t_star - 0.1; t += 0.1) {
    CHECK(loss_difference(config, t) < loss_difference(config, t + 0.1));
  }
  for (double t = t_star + 0.1; t + 0.1 <= 40.0; t += 0.1) {
    CHECK(loss_difference(config, t) > loss_difference(config, t + 0.1));
  }
  CHECK(loss_difference(config, 30.0) ==
        doctest::Approx(0.00147718537718).epsilon(1e-9));
  CHECK(loss_difference(config, 30.0) < 0.01);
}

TEST_CASE("trajectory grid covers [0, horizon] in step increments") {
  ScenarioConfig config = defaults();
  auto series = trajectory_series(config);
  REQUIRE(series.size() == 81);
  CHECK(series.front().t == 0.0);
  CHECK(series.back().t == 20.0);
  CHECK(series[1].t == 0.25);
  for (const auto& point : series) {
    CHECK(point.delta == point.loss_meek - point.loss_sota);
  }

  config.horizon = 1.0;
  config.step = 0.3;
  series = trajectory_series(config);
  REQUIRE(series.size() == 4);
  CHECK(series.back().t == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("growth sweep keys the series by the override value") {
  const ScenarioConfig config = defaults();
  const std::vector<double> values = {2.0, config.rates.g_i, 6.0};
  const auto sweep = growth_sweep(config, values);
  REQUIRE(sweep.size() == 3);
  for (double v : values) REQUIRE(sweep.count(v) == 1);

  const auto base = trajectory_series(config);
  const auto& at_default = sweep.at(config.rates.g_i);
  REQUIRE(at_default.size() == base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(at_default[i].delta == base[i].delta);
  }
}

TEST_CASE("capital sweep reproduces the frozen head starts") {
  const ScenarioConfig config = defaults();
  const auto sweep = capital_sweep(config, {1e4, 1e6});
  REQUIRE(sweep.size() == 2);
  const auto& modest = sweep.at(1e4);
  const auto& rich = sweep.at(1e6);
  CHECK(modest.front().delta == doctest::Approx(0.2551136559).epsilon(1e-8));
  CHECK(rich.front().delta == doctest::Approx(0.5586021712).epsilon(1e-8));
  for (std::size_t i = 0; i < modest.size(); ++i) {
    CHECK(rich[i].delta >= modest[i].delta);
  }
}

TEST_CASE("initial capital stops mattering on long horizons") {
  ScenarioConfig config = defaults();
  config.horizon = 30.0;
  const auto sweep = capital_sweep(config, {1e4, 1e6});
  const double d_modest = sweep.at(1e4).back().delta;
  const double d_rich = sweep.at(1e6).back().delta;
  CHECK(std::abs(d_rich - d_modest) > 1e-6);
  CHECK(std::abs(d_rich - d_modest) < 2e-6);
}

TEST_CASE("a stagnating investment schedule caps the advantage") {
  ScenarioConfig constant = defaults();
  ScenarioConfig stagnating = defaults();
  stagnating.sota_schedule = InvestmentSchedule(
      {InvestmentSchedule::Segment{5.0, stagnating.rates.g_i}});
  for (double t : {1.25, 5.0}) {
    CHECK(loss_difference(stagnating, t) == loss_difference(constant, t));
  }
  for (double t : {6.0, 10.0, 20.0}) {
    CHECK(loss_difference(stagnating, t) < loss_difference(constant, t));
  }
}

TEST_CASE("default schedule is constant growth at g_i") {
  const ScenarioConfig config = defaults();
  const InvestmentSchedule sched = sota_schedule_or_default(config);
  const InvestmentSchedule constant =
      InvestmentSchedule::constant(config.rates.g_i);
  for (double t : {0.0, 1.0, 12.5}) {
    CHECK(sched.multiplier(t) == constant.multiplier(t));
  }

  ScenarioConfig with_schedule = defaults();
  with_schedule.sota_schedule = InvestmentSchedule::unit();
  CHECK(sota_schedule_or_default(with_schedule).multiplier(4.0) == 1.0);
}

TEST_CASE("scenario validation rejects bad grids and budgets") {
  CHECK_NOTHROW(validate(defaults()));
  ScenarioConfig config = defaults();
  config.horizon = 0.0;
  CHECK_THROWS_AS(validate(config), DomainError);
  config = defaults();
  config.step = -0.25;
  CHECK_THROWS_AS(validate(config), DomainError);
  config = defaults();
  config.meek_budget = 0.0;
  CHECK_THROWS_AS(validate(config), DomainError);
  config = defaults();
  config.sota_budget_t0 = -100.0;
  CHECK_THROWS_AS(validate(config), DomainError);
  config = defaults();
  config.rates.g_alg = 0.0;
  CHECK_THROWS_AS(validate(config), DomainError);
}

TEST_CASE("trajectory evaluation rejects negative times") {
  CHECK_THROWS_AS(loss_difference(defaults(), -0.5), DomainError);
  CHECK_THROWS_AS(meek_loss(defaults(), -1.0), DomainError);
}
