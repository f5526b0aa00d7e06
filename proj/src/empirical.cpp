#include "meek/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "meek/io.hpp"

namespace meek {

namespace {

using std::chrono::sys_days;

const std::chrono::year_month_day kEarliestDate{
    std::chrono::year{2015}, std::chrono::month{1}, std::chrono::day{1}};

[[noreturn]] void row_error(long line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

std::size_t find_column(const CsvTable& table, const std::string& name,
                        bool required) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) return i;
  }
  if (required) {
    throw DataError("line 1: missing required column '" + name + "'");
  }
  return table.header.size();
}

ModelRecord parse_row(const std::vector<std::string>& row, long line,
                      std::size_t col_name, std::size_t col_date,
                      std::size_t col_price, std::size_t col_score,
                      std::size_t col_params, double score_scale) {
  ModelRecord record;
  record.name = row[col_name];
  auto date = parse_date(row[col_date]);
  if (!date) {
    row_error(line, "column 'date': not an ISO date: '" + row[col_date] + "'");
  }
  if (sys_days{*date} < sys_days{kEarliestDate}) {
    row_error(line, "column 'date': before the 2015-01-01 sanity bound");
  }
  record.release_date = *date;
  auto price = parse_double(row[col_price]);
  if (!price || !std::isfinite(*price) || *price <= 0.0) {
    row_error(line, "column 'price_usd_per_mtok': must be a number > 0, got '" +
                        row[col_price] + "'");
  }
  record.price_usd_per_mtok = *price;
  auto score = parse_double(row[col_score]);
  if (!score || !std::isfinite(*score)) {
    row_error(line,
              "column 'score': not a number: '" + row[col_score] + "'");
  }
  double scaled = *score / score_scale;
  if (scaled < 0.0 || scaled > 1.0) {
    row_error(line, "column 'score': " + format_double(scaled) +
                        " outside [0, 1] after scaling");
  }
  record.score = scaled;
  if (col_params < row.size() && !row[col_params].empty()) {
    auto params = parse_double(row[col_params]);
    if (!params || !std::isfinite(*params) || *params <= 0.0) {
      row_error(line, "column 'params': must be a number > 0, got '" +
                          row[col_params] + "'");
    }
    record.params = *params;
  }
  return record;
}

}  // namespace

std::vector<ModelRecord> parse_records(std::istream& input,
                                       const ParseOptions& options) {
  if (!(options.score_scale > 0.0) || !std::isfinite(options.score_scale)) {
    throw DomainError("score_scale: must be a finite number > 0");
  }
  CsvTable table = parse_csv_table(input);
  std::size_t col_name = find_column(table, "name", true);
  std::size_t col_date = find_column(table, "date", true);
  std::size_t col_price = find_column(table, "price_usd_per_mtok", true);
  std::size_t col_score = find_column(table, "score", true);
  std::size_t col_params = find_column(table, "params", false);

  std::vector<ModelRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    long line = table.row_lines[i];
    try {
      if (row.size() != table.header.size()) {
        row_error(line, "expected " + std::to_string(table.header.size()) +
                            " fields, got " + std::to_string(row.size()));
      }
      records.push_back(parse_row(row, line, col_name, col_date, col_price,
                                  col_score, col_params,
                                  options.score_scale));
    } catch (const DataError&) {
      if (options.strictness == ParseStrictness::Strict) throw;
    }
  }
  return records;
}

namespace {

std::vector<std::chrono::year_month_day> bucket_ends(
    const std::vector<ModelRecord>& records, const BucketSpec& bucket) {
  sys_days first = sys_days{records.front().release_date};
  sys_days last = first;
  for (const auto& r : records) {
    sys_days d{r.release_date};
    first = std::min(first, d);
    last = std::max(last, d);
  }
  std::vector<std::chrono::year_month_day> ends;
  if (bucket.kind == BucketSpec::Kind::Monthly) {
    std::chrono::year_month_day first_ymd{first};
    std::chrono::year_month_day last_ymd{last};
    std::chrono::year_month ym{first_ymd.year(), first_ymd.month()};
    std::chrono::year_month ym_last{last_ymd.year(), last_ymd.month()};
    for (; ym <= ym_last; ym += std::chrono::months{1}) {
      ends.push_back(std::chrono::year_month_day{std::chrono::year_month_day_last{
          ym.year(), std::chrono::month_day_last{ym.month()}}});
    }
  } else {
    if (bucket.days <= 0) throw DomainError("bucket.days: must be > 0");
    std::chrono::days width{bucket.days};
    for (sys_days end = first + width - std::chrono::days{1};;
         end += width) {
      ends.push_back(std::chrono::year_month_day{end});
      if (end >= last) break;
    }
  }
  return ends;
}

std::vector<GapPoint> gap_series_impl(
    const std::vector<ModelRecord>& records,
    const std::function<bool(const ModelRecord&)>& in_band,
    const BucketSpec& bucket) {
  if (records.empty()) throw DataError("no records to analyze");
  std::vector<GapPoint> series;
  for (const auto& end : bucket_ends(records, bucket)) {
    sys_days cutoff{end};
    GapPoint point;
    point.date = end;
    double best_overall = -1.0;
    double best_band = -1.0;
    bool any_band = false;
    for (const auto& r : records) {
      if (sys_days{r.release_date} > cutoff) continue;
      best_overall = std::max(best_overall, r.score);
      if (in_band(r)) {
        best_band = std::max(best_band, r.score);
        any_band = true;
      }
    }
    point.best_overall = best_overall;
    if (any_band) {
      point.best_in_band = best_band;
      point.gap = best_overall - best_band;
    }
    series.push_back(point);
  }
  return series;
}

}  // namespace

std::vector<GapPoint> gap_series(const std::vector<ModelRecord>& records,
                                 const PriceBand& band,
                                 const BucketSpec& bucket) {
  if (!(band.min_usd_per_mtok < band.max_usd_per_mtok)) {
    throw DomainError("price band: min must be < max");
  }
  if (!(band.min_usd_per_mtok >= 0.0)) {
    throw DomainError("price band: min must be >= 0");
  }
  return gap_series_impl(
      records,
      [&](const ModelRecord& r) {
        return r.price_usd_per_mtok >= band.min_usd_per_mtok &&
               r.price_usd_per_mtok <= band.max_usd_per_mtok;
      },
      bucket);
}

std::vector<GapPoint> param_band_gap_series(
    const std::vector<ModelRecord>& records, double param_threshold,
    const BucketSpec& bucket) {
  if (!(param_threshold > 0.0)) {
    throw DomainError("param_threshold: must be > 0");
  }
  bool any_params = std::any_of(
      records.begin(), records.end(),
      [](const ModelRecord& r) { return r.params.has_value(); });
  if (!any_params) {
    throw DataError("no record carries a parameter count");
  }
  return gap_series_impl(
      records,
      [=](const ModelRecord& r) {
        return r.params.has_value() && *r.params <= param_threshold;
      },
      bucket);
}

bool band_is_empty(const std::vector<GapPoint>& series) {
  return std::all_of(series.begin(), series.end(), [](const GapPoint& p) {
    return !p.best_in_band.has_value();
  });
}

}  // namespace meek
