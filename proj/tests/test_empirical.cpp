#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "meek/empirical.hpp"
#include "meek/rng.hpp"

using namespace meek;
using std::chrono::day;
using std::chrono::month;
using std::chrono::year;
using std::chrono::year_month_day;

namespace {

std::vector<ModelRecord> parse(const std::string& text,
                               const ParseOptions& options = {}) {
  std::istringstream in(text);
  return parse_records(in, options);
}

ModelRecord record(const std::string& name, int y, unsigned m, unsigned d,
                   double price, double score,
                   std::optional<double> params = std::nullopt) {
  return ModelRecord{name, year_month_day{year{y}, month{m}, day{d}}, price,
                     score, params};
}

}  // namespace

TEST_CASE("a complete row parses field by field") {
  const auto records = parse(
      "name,date,price_usd_per_mtok,score,params\n"
      "\"big, friendly\",2023-07-14,2.25,0.625,7e9\n");
  REQUIRE(records.size() == 1);
  CHECK(records[0].name == "big, friendly");
  CHECK(records[0].release_date ==
        year_month_day{year{2023}, month{7}, day{14}});
  CHECK(records[0].price_usd_per_mtok == 2.25);
  CHECK(records[0].score == 0.625);
  REQUIRE(records[0].params.has_value());
  CHECK(*records[0].params == 7e9);
}

TEST_CASE("params column is optional and may be empty per row") {
  const auto no_column = parse(
      "name,date,price_usd_per_mtok,score\n"
      "a,2020-01-01,1.0,0.5\n");
  CHECK_FALSE(no_column[0].params.has_value());

  const auto empty_cell = parse(
      "name,date,price_usd_per_mtok,score,params\n"
      "a,2020-01-01,1.0,0.5,\n"
      "b,2020-02-01,1.0,0.6,3e9\n");
  CHECK_FALSE(empty_cell[0].params.has_value());
  CHECK(empty_cell[1].params.has_value());
}

TEST_CASE("column order does not matter and extras are ignored") {
  const auto records = parse(
      "score,elo,name,price_usd_per_mtok,date\n"
      "0.5,1100,a,1.0,2020-01-01\n");
  REQUIRE(records.size() == 1);
  CHECK(records[0].name == "a");
  CHECK(records[0].score == 0.5);
}

TEST_CASE("percentage data is rescaled at ingestion") {
  ParseOptions options;
  options.score_scale = 100.0;
  const auto records = parse(
      "name,date,price_usd_per_mtok,score\n"
      "a,2020-01-01,1.0,85\n",
      options);
  CHECK(records[0].score == 0.85);
}

TEST_CASE("strict parsing reports the offending line") {
  const std::string bad_price =
      "name,date,price_usd_per_mtok,score\n"
      "a,2020-01-01,1.0,0.5\n"
      "b,2020-02-01,0.0,0.6\n";
  CHECK_THROWS_AS(parse(bad_price), DataError);
  try {
    parse(bad_price);
  } catch (const DataError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("price") != std::string::npos);
  }

  CHECK_THROWS_AS(parse("name,date,price_usd_per_mtok,score\n"
                        "a,2020-13-01,1.0,0.5\n"),
                  DataError);
  CHECK_THROWS_AS(parse("name,date,price_usd_per_mtok,score\n"
                        "a,2014-12-31,1.0,0.5\n"),
                  DataError);
  CHECK_THROWS_AS(parse("name,date,price_usd_per_mtok,score\n"
                        "a,2020-01-01,1.0,1.5\n"),
                  DataError);
  CHECK_THROWS_AS(parse("name,date,price_usd_per_mtok,score\n"
                        "a,2020-01-01,1.0,0.5,9\n"),
                  DataError);
  CHECK_THROWS_AS(parse("name,date,score\n"
                        "a,2020-01-01,0.5\n"),
                  DataError);
  CHECK_THROWS_AS(parse(""), DataError);
}

TEST_CASE("lenient parsing skips invalid rows and keeps the rest") {
  ParseOptions options;
  options.strictness = ParseStrictness::Lenient;
  const auto records = parse(
      "name,date,price_usd_per_mtok,score\n"
      "a,2020-01-01,1.0,0.5\n"
      "b,not-a-date,1.0,0.6\n"
      "c,2020-03-01,-2.0,0.6\n"
      "d,2020-04-01,1.0,0.7\n",
      options);
  REQUIRE(records.size() == 2);
  CHECK(records[0].name == "a");
  CHECK(records[1].name == "d");

  std::istringstream headerless("nope\n");
  CHECK_THROWS_AS(parse_records(headerless, options), DataError);
}

TEST_CASE("two releases spell out the gap bookkeeping") {
  const std::vector<ModelRecord> records = {
      record("flagship", 2023, 1, 15, 5.0, 0.9),
      record("budget", 2023, 3, 10, 0.8, 0.8),
  };
  const PriceBand band{0.5, 1.0};
  const auto series = gap_series(records, band);
  REQUIRE(series.size() == 3);

  CHECK(series[0].date == year_month_day{year{2023}, month{1}, day{31}});
  CHECK(series[0].best_overall == 0.9);
  CHECK_FALSE(series[0].best_in_band.has_value());
  CHECK_FALSE(series[0].gap.has_value());

  CHECK(series[1].date == year_month_day{year{2023}, month{2}, day{28}});
  CHECK_FALSE(series[1].gap.has_value());

  CHECK(series[2].date == year_month_day{year{2023}, month{3}, day{31}});
  REQUIRE(series[2].best_in_band.has_value());
  CHECK(*series[2].best_in_band == 0.8);
  REQUIRE(series[2].gap.has_value());
  CHECK(*series[2].gap == 0.9 - 0.8);
  CHECK_FALSE(band_is_empty(series));
}

TEST_CASE("a lone in-band model closes the gap exactly") {
  const std::vector<ModelRecord> records = {
      record("only", 2022, 6, 5, 0.7, 0.66),
  };
  const auto series = gap_series(records, PriceBand{0.5, 1.0});
  REQUIRE(series.size() == 1);
  CHECK(series[0].best_overall == 0.66);
  REQUIRE(series[0].gap.has_value());
  CHECK(*series[0].gap == 0.0);
}

TEST_CASE("band edges are inclusive") {
  const std::vector<ModelRecord> records = {
      record("at-min", 2022, 1, 1, 0.5, 0.4),
      record("at-max", 2022, 2, 1, 1.0, 0.5),
      record("outside", 2022, 3, 1, 1.0001, 0.9),
  };
  const auto series = gap_series(records, PriceBand{0.5, 1.0});
  const auto& last = series.back();
  CHECK(last.best_overall == 0.9);
  REQUIRE(last.best_in_band.has_value());
  CHECK(*last.best_in_band == 0.5);
}

TEST_CASE("a release on the last day of a month lands in that bucket") {
  const std::vector<ModelRecord> records = {
      record("early", 2023, 2, 1, 5.0, 0.6),
      record("late", 2023, 2, 28, 0.8, 0.55),
  };
  const auto series = gap_series(records, PriceBand{0.5, 1.0});
  REQUIRE(series.size() == 1);
  CHECK(series[0].date == year_month_day{year{2023}, month{2}, day{28}});
  REQUIRE(series[0].gap.has_value());
  CHECK(*series[0].gap == 0.6 - 0.55);
}

TEST_CASE("an empty band yields a fully absent in-band series") {
  const std::vector<ModelRecord> records = {
      record("a", 2022, 1, 1, 5.0, 0.4),
      record("b", 2022, 4, 1, 7.0, 0.5),
  };
  const auto series = gap_series(records, PriceBand{0.5, 1.0});
  CHECK(series.size() == 4);
  CHECK(band_is_empty(series));
  for (const auto& point : series) {
    CHECK_FALSE(point.best_in_band.has_value());
    CHECK_FALSE(point.gap.has_value());
  }
}

TEST_CASE("gap series validates inputs") {
  const std::vector<ModelRecord> records = {
      record("a", 2022, 1, 1, 5.0, 0.4),
  };
  CHECK_THROWS_AS(gap_series(records, PriceBand{1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(gap_series(records, PriceBand{-1.0, 0.5}), DomainError);
  CHECK_THROWS_AS(gap_series({}, PriceBand{0.5, 1.0}), DataError);
  BucketSpec bad;
  bad.kind = BucketSpec::Kind::Days;
  bad.days = 0;
  CHECK_THROWS_AS(gap_series(records, PriceBand{0.5, 1.0}, bad), DomainError);
}

TEST_CASE("cumulative bests never decrease and gaps stay non-negative") {
  Xoshiro256pp rng(606);
  std::vector<ModelRecord> records;
  for (int i = 0; i < 40; ++i) {
    const int y = 2020 + static_cast<int>(rng.next_double() * 4.0);
    const unsigned m = 1 + static_cast<unsigned>(rng.next_double() * 12.0);
    const unsigned d = 1 + static_cast<unsigned>(rng.next_double() * 28.0);
    records.push_back(record("m" + std::to_string(i), y, std::min(m, 12u),
                             std::min(d, 28u), 0.1 + 9.9 * rng.next_double(),
                             rng.next_double()));
  }
  for (const BucketSpec& bucket :
       {BucketSpec{}, BucketSpec{BucketSpec::Kind::Days, 17}}) {
    const auto series = gap_series(records, PriceBand{0.5, 3.0}, bucket);
    REQUIRE(!series.empty());
    double prev_overall = 0.0;
    double prev_band = 0.0;
    for (const auto& point : series) {
      CHECK(point.best_overall >= prev_overall);
      prev_overall = point.best_overall;
      if (point.best_in_band.has_value()) {
        CHECK(*point.best_in_band >= prev_band);
        prev_band = *point.best_in_band;
        CHECK(*point.best_in_band <= point.best_overall);
        REQUIRE(point.gap.has_value());
        CHECK(*point.gap == point.best_overall - *point.best_in_band);
        CHECK(*point.gap >= 0.0);
      }
    }
  }
}

TEST_CASE("halving the day width refines the same series") {
  // The span is pinned to exactly 120 days so the two grids share their
  // final bucket end as well.
  Xoshiro256pp rng(707);
  std::vector<ModelRecord> records = {
      record("first", 2021, 1, 1, 9.0, 0.3),
      record("last", 2021, 4, 30, 9.0, 0.31),
  };
  for (int i = 0; i < 25; ++i) {
    const unsigned m = 1 + static_cast<unsigned>(rng.next_double() * 3.99);
    const unsigned d = 1 + static_cast<unsigned>(rng.next_double() * 27.99);
    records.push_back(record("m" + std::to_string(i), 2021, m, d,
                             0.1 + 4.9 * rng.next_double(),
                             rng.next_double()));
  }
  const PriceBand band{0.5, 2.0};
  const auto coarse =
      gap_series(records, band, BucketSpec{BucketSpec::Kind::Days, 30});
  const auto fine =
      gap_series(records, band, BucketSpec{BucketSpec::Kind::Days, 15});
  REQUIRE(coarse.size() == 4);
  REQUIRE(fine.size() == 8);

  std::map<std::chrono::sys_days, const GapPoint*> fine_by_date;
  for (const auto& point : fine) {
    fine_by_date[std::chrono::sys_days(point.date)] = &point;
  }
  for (const auto& point : coarse) {
    const auto it = fine_by_date.find(std::chrono::sys_days(point.date));
    REQUIRE(it != fine_by_date.end());
    CHECK(it->second->best_overall == point.best_overall);
    CHECK(it->second->best_in_band.has_value() ==
          point.best_in_band.has_value());
    if (point.gap.has_value()) CHECK(*it->second->gap == *point.gap);
  }
}

TEST_CASE("adding an in-band model can only shrink later gaps") {
  std::vector<ModelRecord> records = {
      record("flagship", 2022, 1, 10, 9.0, 0.9),
      record("cheap", 2022, 2, 20, 0.8, 0.5),
      record("flagship-2", 2022, 5, 1, 9.0, 0.95),
  };
  const PriceBand band{0.5, 1.0};
  const auto before = gap_series(records, band);
  records.push_back(record("cheap-2", 2022, 3, 15, 0.9, 0.8));
  const auto after = gap_series(records, band);
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (!before[i].gap.has_value()) continue;
    REQUIRE(after[i].gap.has_value());
    CHECK(*after[i].gap <= *before[i].gap);
  }
}

TEST_CASE("adding an out-of-band model can only widen later gaps") {
  std::vector<ModelRecord> records = {
      record("flagship", 2022, 1, 10, 9.0, 0.9),
      record("cheap", 2022, 2, 20, 0.8, 0.5),
      record("pin", 2022, 5, 20, 9.0, 0.1),
  };
  const PriceBand band{0.5, 1.0};
  const auto before = gap_series(records, band);
  records.push_back(record("flagship-2", 2022, 3, 15, 9.0, 0.97));
  const auto after = gap_series(records, band);
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (!before[i].gap.has_value()) continue;
    CHECK(*after[i].gap >= *before[i].gap);
  }
}

TEST_CASE("parameter bands mirror the price-band semantics") {
  const std::vector<ModelRecord> records = {
      record("huge", 2022, 1, 5, 9.0, 0.9, 1e12),
      record("small", 2022, 2, 10, 1.0, 0.6, 7e9),
      record("unsized", 2022, 3, 15, 0.5, 0.95),
  };
  const auto series = param_band_gap_series(records, 1e10);
  REQUIRE(series.size() == 3);
  CHECK_FALSE(series[0].gap.has_value());
  REQUIRE(series[1].gap.has_value());
  CHECK(*series[1].gap == 0.9 - 0.6);
  REQUIRE(series[2].gap.has_value());
  CHECK(*series[2].gap == 0.95 - 0.6);

  const auto none_in_band = param_band_gap_series(records, 1e9);
  CHECK(band_is_empty(none_in_band));

  const std::vector<ModelRecord> unsized_only = {
      record("a", 2022, 1, 5, 9.0, 0.9),
  };
  CHECK_THROWS_AS(param_band_gap_series(unsized_only, 1e10), DataError);
  CHECK_THROWS_AS(param_band_gap_series(records, 0.0), DomainError);
}
