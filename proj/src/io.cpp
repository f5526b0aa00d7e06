#include "meek/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "meek/errors.hpp"

namespace meek {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail_line(long line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

double require_double(const std::string& field, long line,
                      const std::string& column) {
  auto v = parse_double(field);
  if (!v) fail_line(line, "column '" + column + "': not a number: '" + field + "'");
  return *v;
}

ordered_json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double json_number(const ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_string()) {
    auto parsed = parse_double(v.get<std::string>());
    if (!parsed) throw DataError(std::string("field '") + key + "': not a number");
    return *parsed;
  }
  return v.get<double>();
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (text == "inf" || text == "+inf") {
    return std::numeric_limits<double>::infinity();
  }
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan" || text == "-nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end || begin == end) {
    return std::nullopt;
  }
  return value;
}

std::string format_date(const std::chrono::year_month_day& date) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%04d-%02u-%02u",
                int(date.year()), unsigned(date.month()),
                unsigned(date.day()));
  return buffer;
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  auto field = [&](int from, int to, int& out) {
    auto r = std::from_chars(text.data() + from, text.data() + to, out);
    return r.ec == std::errc{} && r.ptr == text.data() + to;
  };
  int y = 0, m = 0, d = 0;
  if (!field(0, 4, y) || !field(5, 7, m) || !field(8, 10, d)) {
    return std::nullopt;
  }
  std::chrono::year_month_day date{std::chrono::year{y},
                                   std::chrono::month{unsigned(m)},
                                   std::chrono::day{unsigned(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

CsvTable parse_csv_table(std::istream& input) {
  std::string text{std::istreambuf_iterator<char>(input),
                   std::istreambuf_iterator<char>()};
  CsvTable table;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_saw_quote = false;
  bool header_set = false;
  long line = 1;
  long row_start_line = 1;

  auto flush_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    bool blank = row.size() == 1 && row[0].empty() && !row_saw_quote;
    if (!blank) {
      if (!header_set) {
        table.header = std::move(row);
        header_set = true;
      } else {
        table.rows.push_back(std::move(row));
        table.row_lines.push_back(row_start_line);
      }
    }
    row.clear();
    row_saw_quote = false;
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field += '"';
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
        ++i;
      }
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
      row_saw_quote = true;
      ++i;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      ++i;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
      ++i;
      ++line;
      flush_row();
      row_start_line = line;
    } else {
      field += c;
      ++i;
    }
  }
  if (in_quotes) fail_line(row_start_line, "unterminated quoted field");
  if (!field.empty() || !row.empty() || row_saw_quote) flush_row();
  if (!header_set) throw DataError("line 1: empty input, expected a header row");
  return table;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

const std::vector<std::string> kTrajectoryHeader = {"t", "loss_meek",
                                                    "loss_sota", "delta"};
const std::vector<std::string> kInferenceHeader = {
    "t", "meek_inference_loss", "sota_loss", "delta", "clamped"};
const std::vector<std::string> kGapHeader = {"date", "best_overall",
                                             "best_in_band", "gap"};
const std::vector<std::string> kDiscriminationHeader = {"t",
                                                        "expected_tokens"};

void require_header(const CsvTable& table,
                    const std::vector<std::string>& expected) {
  if (table.header != expected) {
    std::string want;
    for (const auto& h : expected) {
      if (!want.empty()) want += ',';
      want += h;
    }
    fail_line(1, "expected header '" + want + "'");
  }
}

void require_width(const std::vector<std::string>& row, long line,
                   std::size_t width) {
  if (row.size() != width) {
    fail_line(line, "expected " + std::to_string(width) + " fields, got " +
                        std::to_string(row.size()));
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryPoint>& series) {
  out << "t,loss_meek,loss_sota,delta\n";
  for (const auto& p : series) {
    out << format_double(p.t) << ',' << format_double(p.loss_meek) << ','
        << format_double(p.loss_sota) << ',' << format_double(p.delta)
        << '\n';
  }
}

std::vector<TrajectoryPoint> read_trajectory_csv(std::istream& in) {
  CsvTable table = parse_csv_table(in);
  require_header(table, kTrajectoryHeader);
  std::vector<TrajectoryPoint> series;
  series.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    long line = table.row_lines[i];
    require_width(row, line, 4);
    series.push_back({require_double(row[0], line, "t"),
                      require_double(row[1], line, "loss_meek"),
                      require_double(row[2], line, "loss_sota"),
                      require_double(row[3], line, "delta")});
  }
  return series;
}

void write_inference_csv(std::ostream& out,
                         const std::vector<InferencePoint>& series) {
  out << "t,meek_inference_loss,sota_loss,delta,clamped\n";
  for (const auto& p : series) {
    out << format_double(p.t) << ',' << format_double(p.meek_inference_loss)
        << ',' << format_double(p.sota_loss) << ',' << format_double(p.delta)
        << ',' << (p.clamped ? '1' : '0') << '\n';
  }
}

std::vector<InferencePoint> read_inference_csv(std::istream& in) {
  CsvTable table = parse_csv_table(in);
  require_header(table, kInferenceHeader);
  std::vector<InferencePoint> series;
  series.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    long line = table.row_lines[i];
    require_width(row, line, 5);
    bool clamped;
    if (row[4] == "0") {
      clamped = false;
    } else if (row[4] == "1") {
      clamped = true;
    } else {
      fail_line(line, "column 'clamped': expected 0 or 1, got '" + row[4] + "'");
    }
    series.push_back({require_double(row[0], line, "t"),
                      require_double(row[1], line, "meek_inference_loss"),
                      require_double(row[2], line, "sota_loss"),
                      require_double(row[3], line, "delta"), clamped});
  }
  return series;
}

void write_gap_csv(std::ostream& out, const std::vector<GapPoint>& series) {
  out << "date,best_overall,best_in_band,gap\n";
  for (const auto& p : series) {
    out << format_date(p.date) << ',' << format_double(p.best_overall) << ',';
    if (p.best_in_band) out << format_double(*p.best_in_band);
    out << ',';
    if (p.gap) out << format_double(*p.gap);
    out << '\n';
  }
}

std::vector<GapPoint> read_gap_csv(std::istream& in) {
  CsvTable table = parse_csv_table(in);
  require_header(table, kGapHeader);
  std::vector<GapPoint> series;
  series.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    long line = table.row_lines[i];
    require_width(row, line, 4);
    auto date = parse_date(row[0]);
    if (!date) fail_line(line, "column 'date': not an ISO date: '" + row[0] + "'");
    GapPoint point;
    point.date = *date;
    point.best_overall = require_double(row[1], line, "best_overall");
    if (!row[2].empty()) {
      point.best_in_band = require_double(row[2], line, "best_in_band");
    }
    if (!row[3].empty()) {
      point.gap = require_double(row[3], line, "gap");
    }
    series.push_back(point);
  }
  return series;
}

void write_discrimination_csv(
    std::ostream& out, const std::vector<std::pair<double, double>>& series) {
  out << "t,expected_tokens\n";
  for (const auto& [t, tokens] : series) {
    out << format_double(t) << ',' << format_double(tokens) << '\n';
  }
}

std::vector<std::pair<double, double>> read_discrimination_csv(
    std::istream& in) {
  CsvTable table = parse_csv_table(in);
  require_header(table, kDiscriminationHeader);
  std::vector<std::pair<double, double>> series;
  series.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    long line = table.row_lines[i];
    require_width(row, line, 2);
    series.emplace_back(require_double(row[0], line, "t"),
                        require_double(row[1], line, "expected_tokens"));
  }
  return series;
}

void write_sweep_csv(
    std::ostream& out, const std::string& key,
    const std::map<double, std::vector<TrajectoryPoint>>& by_value) {
  out << key << ",t,loss_meek,loss_sota,delta\n";
  for (const auto& [value, series] : by_value) {
    for (const auto& p : series) {
      out << format_double(value) << ',' << format_double(p.t) << ','
          << format_double(p.loss_meek) << ',' << format_double(p.loss_sota)
          << ',' << format_double(p.delta) << '\n';
    }
  }
}

std::string sweep_json(
    const std::string& key,
    const std::map<double, std::vector<TrajectoryPoint>>& by_value) {
  ordered_json doc;
  doc["sweep"] = key;
  ordered_json series_obj;
  for (const auto& [value, series] : by_value) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : series) {
      arr.push_back({{"t", p.t},
                     {"loss_meek", p.loss_meek},
                     {"loss_sota", p.loss_sota},
                     {"delta", p.delta}});
    }
    series_obj[format_double(value)] = std::move(arr);
  }
  doc["series"] = std::move(series_obj);
  return dump(doc);
}

std::vector<LossScorePoint> read_loss_score_csv(
    std::istream& in, const std::optional<ParametricLoss>& pl) {
  CsvTable table = parse_csv_table(in);
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (table.header[i] == name) return i;
    }
    return std::nullopt;
  };
  auto col_loss = column("loss");
  auto col_score = column("score");
  auto col_weight = column("weight");
  auto col_params = column("n_params");
  auto col_tokens = column("d_tokens");
  if (!col_score) fail_line(1, "missing required column 'score'");
  bool parametric = !col_loss;
  if (parametric) {
    if (!col_params || !col_tokens) {
      fail_line(1,
                "expected either a 'loss' column or 'n_params' and "
                "'d_tokens' columns");
    }
    if (!pl) {
      throw ConfigError(
          "parametric_loss: required to derive losses from "
          "n_params,d_tokens input");
    }
  }
  std::vector<LossScorePoint> points;
  points.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    long line = table.row_lines[i];
    require_width(row, line, table.header.size());
    LossScorePoint point;
    if (parametric) {
      double n = require_double(row[*col_params], line, "n_params");
      double d = require_double(row[*col_tokens], line, "d_tokens");
      point.loss = loss_from_params_tokens(*pl, n, d);
    } else {
      point.loss = require_double(row[*col_loss], line, "loss");
    }
    point.score = require_double(row[*col_score], line, "score");
    point.weight =
        col_weight ? require_double(row[*col_weight], line, "weight") : 1.0;
    points.push_back(point);
  }
  return points;
}

void write_benchmark_csv(
    std::ostream& out,
    const std::map<int, std::vector<std::pair<double, double>>>& by_p) {
  if (by_p.empty()) throw DomainError("benchmark series: no p values");
  out << 't';
  for (const auto& [p, series] : by_p) out << ",gap_p" << p;
  out << '\n';
  const auto& first = by_p.begin()->second;
  for (std::size_t i = 0; i < first.size(); ++i) {
    out << format_double(first[i].first);
    for (const auto& [p, series] : by_p) {
      out << ',' << format_double(series[i].second);
    }
    out << '\n';
  }
}

std::map<int, std::vector<std::pair<double, double>>> read_benchmark_csv(
    std::istream& in) {
  CsvTable table = parse_csv_table(in);
  if (table.header.empty() || table.header[0] != "t") {
    fail_line(1, "expected first column 't'");
  }
  std::vector<int> p_values;
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    int p = 0;
    const char* begin = name.c_str();
    const char* end = begin + name.size();
    if (name.rfind("gap_p", 0) != 0 ||
        std::from_chars(begin + 5, end, p).ptr != end) {
      fail_line(1, "expected column 'gap_p<k>', got '" + name + "'");
    }
    p_values.push_back(p);
  }
  std::map<int, std::vector<std::pair<double, double>>> by_p;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    long line = table.row_lines[i];
    require_width(row, line, table.header.size());
    double t = require_double(row[0], line, "t");
    for (std::size_t c = 1; c < row.size(); ++c) {
      by_p[p_values[c - 1]].emplace_back(
          t, require_double(row[c], line, table.header[c]));
    }
  }
  return by_p;
}

std::string trajectory_json(const std::vector<TrajectoryPoint>& series) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : series) {
    arr.push_back({{"t", p.t},
                   {"loss_meek", p.loss_meek},
                   {"loss_sota", p.loss_sota},
                   {"delta", p.delta}});
  }
  return dump(arr);
}

std::vector<TrajectoryPoint> trajectory_from_json(const std::string& text) {
  ordered_json arr = ordered_json::parse(text);
  std::vector<TrajectoryPoint> series;
  for (const auto& j : arr) {
    series.push_back({json_number(j, "t"), json_number(j, "loss_meek"),
                      json_number(j, "loss_sota"), json_number(j, "delta")});
  }
  return series;
}

std::string inference_json(const std::vector<InferencePoint>& series,
                           const std::optional<double>& crossover_years) {
  ordered_json doc;
  if (crossover_years) {
    doc["crossover_years"] = *crossover_years;
  } else {
    doc["crossover_years"] = nullptr;
  }
  ordered_json arr = ordered_json::array();
  for (const auto& p : series) {
    arr.push_back({{"t", p.t},
                   {"meek_inference_loss", p.meek_inference_loss},
                   {"sota_loss", p.sota_loss},
                   {"delta", p.delta},
                   {"clamped", p.clamped}});
  }
  doc["series"] = std::move(arr);
  return dump(doc);
}

InferenceDoc inference_from_json(const std::string& text) {
  ordered_json doc = ordered_json::parse(text);
  InferenceDoc out;
  if (!doc.at("crossover_years").is_null()) {
    out.crossover_years = json_number(doc, "crossover_years");
  }
  for (const auto& j : doc.at("series")) {
    out.series.push_back({json_number(j, "t"),
                          json_number(j, "meek_inference_loss"),
                          json_number(j, "sota_loss"),
                          json_number(j, "delta"),
                          j.at("clamped").get<bool>()});
  }
  return out;
}

std::string gap_json(const std::vector<GapPoint>& series) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : series) {
    ordered_json j;
    j["date"] = format_date(p.date);
    j["best_overall"] = p.best_overall;
    j["best_in_band"] =
        p.best_in_band ? ordered_json(*p.best_in_band) : ordered_json(nullptr);
    j["gap"] = p.gap ? ordered_json(*p.gap) : ordered_json(nullptr);
    arr.push_back(std::move(j));
  }
  return dump(arr);
}

std::vector<GapPoint> gap_from_json(const std::string& text) {
  ordered_json arr = ordered_json::parse(text);
  std::vector<GapPoint> series;
  for (const auto& j : arr) {
    GapPoint point;
    auto date = parse_date(j.at("date").get<std::string>());
    if (!date) throw DataError("field 'date': not an ISO date");
    point.date = *date;
    point.best_overall = json_number(j, "best_overall");
    if (!j.at("best_in_band").is_null()) {
      point.best_in_band = json_number(j, "best_in_band");
    }
    if (!j.at("gap").is_null()) point.gap = json_number(j, "gap");
    series.push_back(point);
  }
  return series;
}

std::string discrimination_json(
    const std::vector<std::pair<double, double>>& series) {
  ordered_json arr = ordered_json::array();
  for (const auto& [t, tokens] : series) {
    arr.push_back({{"t", t}, {"expected_tokens", number_or_string(tokens)}});
  }
  return dump(arr);
}

std::vector<std::pair<double, double>> discrimination_from_json(
    const std::string& text) {
  ordered_json arr = ordered_json::parse(text);
  std::vector<std::pair<double, double>> series;
  for (const auto& j : arr) {
    series.emplace_back(json_number(j, "t"), json_number(j, "expected_tokens"));
  }
  return series;
}

std::string benchmark_json(
    const std::map<int, std::vector<std::pair<double, double>>>& by_p) {
  ordered_json doc;
  for (const auto& [p, series] : by_p) {
    ordered_json arr = ordered_json::array();
    for (const auto& [t, gap] : series) {
      arr.push_back({{"t", t}, {"gap", gap}});
    }
    doc["p" + std::to_string(p)] = std::move(arr);
  }
  return dump(doc);
}

std::map<int, std::vector<std::pair<double, double>>> benchmark_from_json(
    const std::string& text) {
  ordered_json doc = ordered_json::parse(text);
  std::map<int, std::vector<std::pair<double, double>>> by_p;
  for (const auto& [key, arr] : doc.items()) {
    int p = 0;
    const char* begin = key.c_str();
    const char* end = begin + key.size();
    if (key.empty() || key[0] != 'p' ||
        std::from_chars(begin + 1, end, p).ptr != end) {
      throw DataError("expected key 'p<k>', got '" + key + "'");
    }
    auto& series = by_p[p];
    for (const auto& j : arr) {
      series.emplace_back(json_number(j, "t"), json_number(j, "gap"));
    }
  }
  return by_p;
}

std::string mc_report_json(const MonteCarloReport& report,
                           double formula_tokens) {
  ordered_json doc;
  doc["mean_tokens"] = number_or_string(report.mean_tokens);
  doc["ci95_half_width"] = number_or_string(report.ci95_half_width);
  doc["n_runs"] = report.n_runs;
  doc["decided_runs"] = report.decided_runs;
  doc["capped_runs"] = report.capped_runs;
  doc["false_rate"] = std::isnan(report.false_rate)
                          ? ordered_json(nullptr)
                          : ordered_json(report.false_rate);
  doc["formula_tokens"] = number_or_string(formula_tokens);
  return dump(doc);
}

std::string fit_report_json(const FitReport& report) {
  ordered_json doc;
  doc["amplitude"] = report.fit.amplitude;
  doc["k"] = report.fit.k;
  doc["x0"] = report.fit.x0;
  doc["b"] = report.fit.b;
  doc["rmse"] = report.rmse;
  doc["iterations"] = report.iterations;
  return dump(doc);
}

void write_fit_report_csv(std::ostream& out, const FitReport& report) {
  out << "amplitude,k,x0,b,rmse,iterations\n";
  out << format_double(report.fit.amplitude) << ','
      << format_double(report.fit.k) << ',' << format_double(report.fit.x0)
      << ',' << format_double(report.fit.b) << ','
      << format_double(report.rmse) << ',' << report.iterations << '\n';
}

}  // namespace meek
