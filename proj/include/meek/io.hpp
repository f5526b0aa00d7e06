#pragma once

#include <chrono>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "meek/benchmark_map.hpp"
#include "meek/discrimination.hpp"
#include "meek/empirical.hpp"
#include "meek/inference.hpp"
#include "meek/trajectory.hpp"

namespace meek {

// Shortest decimal string that round-trips to the same double. Infinities
// and NaN render as "inf", "-inf", "nan" (parse_double reads them back).
std::string format_double(double value);

// Accepts the format_double grammar plus anything std::from_chars parses.
// Whole string must be consumed.
std::optional<double> parse_double(std::string_view text);

std::string format_date(const std::chrono::year_month_day& date);

// Strict ISO YYYY-MM-DD with a validity check (no 2024-02-30).
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);

// In-memory CSV: header row plus data rows, with the 1-based source line
// each row started on (quoted fields may span lines) for diagnostics.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<long> row_lines;
};

// RFC-4180 reader: quoted fields, doubled quotes, embedded newlines,
// CRLF or LF endings. Fully blank lines are skipped. Throws DataError on
// an unterminated quote or empty input.
CsvTable parse_csv_table(std::istream& input);

// Quotes the field if it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryPoint>& series);
std::vector<TrajectoryPoint> read_trajectory_csv(std::istream& in);

void write_inference_csv(std::ostream& out,
                         const std::vector<InferencePoint>& series);
std::vector<InferencePoint> read_inference_csv(std::istream& in);

void write_gap_csv(std::ostream& out, const std::vector<GapPoint>& series);
std::vector<GapPoint> read_gap_csv(std::istream& in);

// Columns t,expected_tokens; infinities written as "inf".
void write_discrimination_csv(
    std::ostream& out, const std::vector<std::pair<double, double>>& series);
std::vector<std::pair<double, double>> read_discrimination_csv(
    std::istream& in);

// Long format for parameter sweeps printed to a single stream: leading
// column holds the swept value (named by key), then the series columns.
void write_sweep_csv(
    std::ostream& out, const std::string& key,
    const std::map<double, std::vector<TrajectoryPoint>>& by_value);
std::string sweep_json(
    const std::string& key,
    const std::map<double, std::vector<TrajectoryPoint>>& by_value);

// Fit input: header loss,score[,weight], or n_params,d_tokens,score
// [,weight] with losses derived through the parametric coefficients
// (required for that schema; ConfigError when absent). Extra columns
// are ignored; missing weight defaults to 1.
std::vector<LossScorePoint> read_loss_score_csv(
    std::istream& in, const std::optional<ParametricLoss>& pl);

// Wide format t,gap_p<k>,... with one column per requested p, ascending.
void write_benchmark_csv(
    std::ostream& out,
    const std::map<int, std::vector<std::pair<double, double>>>& by_p);
std::map<int, std::vector<std::pair<double, double>>> read_benchmark_csv(
    std::istream& in);

// JSON serializers (2-space indent, trailing newline, key order fixed).
std::string trajectory_json(const std::vector<TrajectoryPoint>& series);
std::string inference_json(const std::vector<InferencePoint>& series,
                           const std::optional<double>& crossover_years);
std::string gap_json(const std::vector<GapPoint>& series);
std::string discrimination_json(
    const std::vector<std::pair<double, double>>& series);
std::string benchmark_json(
    const std::map<int, std::vector<std::pair<double, double>>>& by_p);
std::string mc_report_json(const MonteCarloReport& report,
                           double formula_tokens);
std::string fit_report_json(const FitReport& report);
void write_fit_report_csv(std::ostream& out, const FitReport& report);

// JSON readers matching the serializers above; used for the
// write-read-write fixpoint guarantee on emitted files.
std::vector<TrajectoryPoint> trajectory_from_json(const std::string& text);

struct InferenceDoc {
  std::optional<double> crossover_years;
  std::vector<InferencePoint> series;
};
InferenceDoc inference_from_json(const std::string& text);

std::vector<GapPoint> gap_from_json(const std::string& text);
std::vector<std::pair<double, double>> discrimination_from_json(
    const std::string& text);
std::map<int, std::vector<std::pair<double, double>>> benchmark_from_json(
    const std::string& text);

}  // namespace meek
