#include "larvest/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "larvest/errors.hpp"

namespace larvest {

namespace {

std::string trim_cr(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
    line.pop_back();
  return line;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_number(const std::string& field, std::size_t line_no) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || begin == end)
    throw Error(ErrorCode::MalformedRow,
                "line " + std::to_string(line_no) + ": non-numeric field '" +
                    field + "'");
  return value;
}

void expect_header(std::istream& in, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::EmptyDataset, "empty stream, expected header '" +
                                             expected + "'");
  line = trim_cr(line);
  if (line != expected)
    throw Error(ErrorCode::DuplicateHeaderMismatch,
                "expected header '" + expected + "', got '" + line + "'");
}

void print_number(std::ostream& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

} // namespace

double TimePoint::mean_length() const {
  double s = 0.0;
  for (double l : lengths_mm) s += l;
  return s / static_cast<double>(lengths_mm.size());
}

std::vector<double> ExperimentalDataset::temperatures() const {
  std::vector<double> out;
  out.reserve(batches.size());
  for (const auto& b : batches) out.push_back(b.temperature_c);
  return out;
}

void ExperimentalDataset::validate() const {
  if (batches.empty())
    throw Error(ErrorCode::EmptyDataset, "dataset has no batches");
  for (std::size_t k = 0; k < batches.size(); ++k) {
    const auto& batch = batches[k];
    if (k > 0 && !(batches[k - 1].temperature_c < batch.temperature_c))
      throw Error(ErrorCode::InvariantViolation,
                  "temperatures not strictly increasing across batches");
    if (batch.observations.empty())
      throw Error(ErrorCode::InvariantViolation, "batch without observations");
    if (batch.observations.front().time_h != 0.0)
      throw Error(ErrorCode::InvariantViolation,
                  "first observation time must be 0 (hatching) for temperature " +
                      std::to_string(batch.temperature_c));
    double prev = -1.0;
    for (const auto& tp : batch.observations) {
      if (!(tp.time_h > prev))
        throw Error(ErrorCode::InvariantViolation,
                    "times not strictly increasing within batch");
      prev = tp.time_h;
      if (tp.lengths_mm.empty())
        throw Error(ErrorCode::InvariantViolation, "time point without lengths");
      for (double l : tp.lengths_mm)
        if (!(l > 0.0) || !std::isfinite(l))
          throw Error(ErrorCode::InvariantViolation,
                      "non-positive larval length " + std::to_string(l));
    }
  }
}

ExperimentalDataset parse_experimental_csv(std::istream& in) {
  expect_header(in, "temperature_c,time_h,length_mm");

  // Exact double keys: identical text parses to identical doubles, so
  // grouping is stable under row permutation.
  std::map<double, std::map<double, std::vector<double>>> grouped;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3)
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line_no) + ": expected 3 fields");
    const double temp = parse_number(fields[0], line_no);
    const double time = parse_number(fields[1], line_no);
    const double length = parse_number(fields[2], line_no);
    grouped[temp][time].push_back(length);
  }
  if (grouped.empty())
    throw Error(ErrorCode::EmptyDataset, "no data rows");

  ExperimentalDataset ds;
  for (auto& [temp, by_time] : grouped) {
    TemperatureBatch batch;
    batch.temperature_c = temp;
    for (auto& [time, lengths] : by_time) {
      // Replicates are exchangeable; normalize so row order cannot matter.
      std::sort(lengths.begin(), lengths.end());
      batch.observations.push_back(TimePoint{time, std::move(lengths)});
    }
    ds.batches.push_back(std::move(batch));
  }
  ds.validate();
  return ds;
}

void write_experimental_csv(std::ostream& out, const ExperimentalDataset& ds) {
  out << "temperature_c,time_h,length_mm\n";
  for (const auto& batch : ds.batches)
    for (const auto& tp : batch.observations)
      for (double l : tp.lengths_mm) {
        print_number(out, batch.temperature_c);
        out << ',';
        print_number(out, tp.time_h);
        out << ',';
        print_number(out, l);
        out << '\n';
      }
}

TemperatureProfile::TemperatureProfile(std::vector<double> times_h,
                                       std::vector<double> temps_c)
    : times_h_(std::move(times_h)), temps_c_(std::move(temps_c)) {
  if (times_h_.size() != temps_c_.size())
    throw Error(ErrorCode::InvariantViolation, "times/temps size mismatch");
  if (times_h_.size() < 2)
    throw Error(ErrorCode::TooFewSamples,
                "temperature profile needs at least 2 samples");
  for (std::size_t i = 1; i < times_h_.size(); ++i)
    if (!(times_h_[i - 1] < times_h_[i]))
      throw Error(ErrorCode::NonMonotoneTime,
                  "profile times must be strictly increasing");
}

double TemperatureProfile::at(double time_h) const {
  if (time_h < span_begin() || time_h > span_end())
    throw Error(ErrorCode::ProfileCoverageGap,
                "time " + std::to_string(time_h) + " outside profile span [" +
                    std::to_string(span_begin()) + ", " +
                    std::to_string(span_end()) + "]");
  const auto it = std::upper_bound(times_h_.begin(), times_h_.end(), time_h);
  if (it == times_h_.end()) return temps_c_.back();
  const std::size_t hi = static_cast<std::size_t>(it - times_h_.begin());
  if (hi == 0) return temps_c_.front();
  const std::size_t lo = hi - 1;
  const double w = (time_h - times_h_[lo]) / (times_h_[hi] - times_h_[lo]);
  return temps_c_[lo] + w * (temps_c_[hi] - temps_c_[lo]);
}

double TemperatureProfile::max_temperature() const {
  return *std::max_element(temps_c_.begin(), temps_c_.end());
}

double TemperatureProfile::min_temperature() const {
  return *std::min_element(temps_c_.begin(), temps_c_.end());
}

TemperatureProfile parse_temperature_csv(std::istream& in) {
  expect_header(in, "time_h,temp_c");
  std::vector<double> times, temps;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2)
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line_no) + ": expected 2 fields");
    times.push_back(parse_number(fields[0], line_no));
    temps.push_back(parse_number(fields[1], line_no));
  }
  if (times.size() < 2)
    throw Error(ErrorCode::TooFewSamples,
                "temperature profile needs at least 2 samples, got " +
                    std::to_string(times.size()));
  return TemperatureProfile(std::move(times), std::move(temps));
}

void write_temperature_csv(std::ostream& out, const TemperatureProfile& profile) {
  out << "time_h,temp_c\n";
  for (std::size_t i = 0; i < profile.times().size(); ++i) {
    print_number(out, profile.times()[i]);
    out << ',';
    print_number(out, profile.temps()[i]);
    out << '\n';
  }
}

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::Feeding: return "feeding";
    case Stage::PostFeeding: return "postfeeding";
    case Stage::Unknown: return "unknown";
  }
  return "unknown";
}

Stage stage_from_string(const std::string& name) {
  if (name == "feeding") return Stage::Feeding;
  if (name == "postfeeding") return Stage::PostFeeding;
  if (name == "unknown") return Stage::Unknown;
  throw Error(ErrorCode::OutOfRange, "unknown stage '" + name + "'");
}

void validate_case(const CaseObservation& obs, const TemperatureProfile& profile) {
  if (!(obs.t_a_h < obs.t_star_h))
    throw Error(ErrorCode::BadTimeOrder,
                "t_a must be strictly before t*; got t_a=" +
                    std::to_string(obs.t_a_h) + ", t*=" +
                    std::to_string(obs.t_star_h));
  if (obs.lengths_mm.empty())
    throw Error(ErrorCode::InvariantViolation, "case has no length measurements");
  for (double l : obs.lengths_mm)
    if (!(l > 0.0) || !std::isfinite(l))
      throw Error(ErrorCode::InvariantViolation,
                  "non-positive case length " + std::to_string(l));
  if (!profile.covers(obs.t_a_h, obs.t_star_h))
    throw Error(ErrorCode::ProfileCoverageGap,
                "profile spans [" + std::to_string(profile.span_begin()) + ", " +
                    std::to_string(profile.span_end()) +
                    "] but the case needs [" + std::to_string(obs.t_a_h) + ", " +
                    std::to_string(obs.t_star_h) + "]");
}

std::vector<double> parse_lengths_csv(std::istream& in) {
  expect_header(in, "length_mm");
  std::vector<double> lengths;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_cr(line);
    if (line.empty()) continue;
    lengths.push_back(parse_number(line, line_no));
  }
  if (lengths.empty()) throw Error(ErrorCode::EmptyDataset, "no lengths");
  return lengths;
}

} // namespace larvest
