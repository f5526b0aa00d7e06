#pragma once

#include <chrono>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "meek/errors.hpp"

namespace meek {

// One leaderboard row: a released model with its blended price and
// benchmark score (as a fraction), plus an optional parameter count.
struct ModelRecord {
  std::string name;
  std::chrono::year_month_day release_date;
  double price_usd_per_mtok;
  double score;
  std::optional<double> params;
};

// Cumulative-best sample at a bucket end date. best_in_band and gap are
// absent for buckets before the first in-band release.
struct GapPoint {
  std::chrono::year_month_day date;
  double best_overall;
  std::optional<double> best_in_band;
  std::optional<double> gap;  // best_overall - best_in_band
};

enum class ParseStrictness {
  Strict,   // any invalid row aborts the parse
  Lenient,  // invalid rows are skipped
};

struct ParseOptions {
  ParseStrictness strictness = ParseStrictness::Strict;
  // Scores are divided by this at ingestion; 100 for percentage data.
  double score_scale = 1.0;
};

// Reads CSV with header columns name,date,price_usd_per_mtok,score and
// optional params (any column order; extra columns ignored). Dates are
// ISO YYYY-MM-DD and must be on or after 2015-01-01; prices must be
// positive and scores in [0, 1] after scaling. Throws DataError with
// the offending line number (schema problems cite line 1).
std::vector<ModelRecord> parse_records(std::istream& input,
                                       const ParseOptions& options = {});

// Price interval in $ per million tokens; both ends inclusive.
struct PriceBand {
  double min_usd_per_mtok;
  double max_usd_per_mtok;
};

// Bucket granularity for the gap series: calendar months (bucket end =
// last day of month) or fixed-length day windows anchored at the first
// release date (bucket end = first release + k*days - 1 day... see
// gap_series). Day windows exist so bucket-refinement properties can be
// exercised; monthly is the reporting default.
struct BucketSpec {
  enum class Kind { Monthly, Days };
  Kind kind = Kind::Monthly;
  int days = 30;
};

// For each bucket end date d: best_overall = max score over records
// released on or before d; best_in_band = same restricted to records
// priced within the band (cumulative-best semantics). Buckets run from
// the bucket containing the earliest release to the one containing the
// latest. A band matching no record yields a full series of absent
// in-band values (callers can detect and report this).
std::vector<GapPoint> gap_series(const std::vector<ModelRecord>& records,
                                 const PriceBand& band,
                                 const BucketSpec& bucket = {});

// Same semantics with the band defined as params <= param_threshold;
// records without a parameter count are excluded from the band but
// still count toward best_overall. Throws DataError when no record
// carries params at all.
std::vector<GapPoint> param_band_gap_series(
    const std::vector<ModelRecord>& records, double param_threshold,
    const BucketSpec& bucket = {});

// True when every point's best_in_band is absent (empty-band series).
bool band_is_empty(const std::vector<GapPoint>& series);

}  // namespace meek
