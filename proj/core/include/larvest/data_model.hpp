#ifndef LARVEST_DATA_MODEL_HPP
#define LARVEST_DATA_MODEL_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace larvest {

/// Replicate larval lengths observed at one time after hatching.
struct TimePoint {
  double time_h = 0.0;
  std::vector<double> lengths_mm;

  double mean_length() const;
  std::size_t replicate_count() const { return lengths_mm.size(); }
};

/// All observations collected at one constant experimental temperature.
/// Times are strictly increasing and start at 0 (hatching).
struct TemperatureBatch {
  double temperature_c = 0.0;
  std::vector<TimePoint> observations;

  double last_time() const { return observations.back().time_h; }
};

/// Constant-temperature experiment collection, batches sorted by strictly
/// increasing temperature. Immutable after construction/parsing.
struct ExperimentalDataset {
  std::vector<TemperatureBatch> batches;

  std::size_t temperature_count() const { return batches.size(); }
  std::vector<double> temperatures() const;

  void validate() const; // throws InvariantViolation / EmptyDataset
};

/// CSV schema: header `temperature_c,time_h,length_mm`, one row per
/// individual larva measurement. Rows may arrive in any order; parsing groups
/// by (temperature, time) and sorts.
ExperimentalDataset parse_experimental_csv(std::istream& in);
void write_experimental_csv(std::ostream& out, const ExperimentalDataset& ds);

/// Scene temperature time series on the relative clock (collection time
/// t* = 0, past negative). Linear interpolation between samples; queries
/// outside the sampled span are errors.
class TemperatureProfile {
public:
  TemperatureProfile(std::vector<double> times_h, std::vector<double> temps_c);

  double at(double time_h) const; // ProfileCoverageGap outside span
  double span_begin() const { return times_h_.front(); }
  double span_end() const { return times_h_.back(); }
  bool covers(double lo, double hi) const {
    return span_begin() <= lo && hi <= span_end();
  }
  double max_temperature() const;
  double min_temperature() const;

  const std::vector<double>& times() const { return times_h_; }
  const std::vector<double>& temps() const { return temps_c_; }

private:
  std::vector<double> times_h_;
  std::vector<double> temps_c_;
};

/// CSV schema: header `time_h,temp_c`, rows already in strictly increasing
/// time order (NonMonotoneTime otherwise), at least 2 rows.
TemperatureProfile parse_temperature_csv(std::istream& in);
void write_temperature_csv(std::ostream& out, const TemperatureProfile& profile);

enum class Stage { Feeding, PostFeeding, Unknown };

const char* to_string(Stage stage);
Stage stage_from_string(const std::string& name);

/// Larval lengths measured at the scene at time t*, with the earliest
/// admissible hatching time t_a (last reliable sighting) and the
/// developmental stage assessed by the collector.
struct CaseObservation {
  std::vector<double> lengths_mm;
  double t_star_h = 0.0;
  double t_a_h = 0.0;
  Stage stage = Stage::Unknown;
  std::string species_id;

  std::size_t n_obs() const { return lengths_mm.size(); }
};

/// Checks the case invariants and that the profile span covers
/// [t_a, t*]. Throws BadTimeOrder / ProfileCoverageGap / InvariantViolation.
void validate_case(const CaseObservation& obs, const TemperatureProfile& profile);

/// One length per row under a `length_mm` header.
std::vector<double> parse_lengths_csv(std::istream& in);

} // namespace larvest

#endif
