#include "larvest/sim_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>

#include <nlohmann/json.hpp>

#include "larvest/errors.hpp"
#include "larvest/growth_dynamics.hpp"
#include "larvest/inference.hpp"
#include "larvest/parallel.hpp"
#include "larvest/rng.hpp"
#include "larvest/stats.hpp"

namespace larvest {

using nlohmann::json;

const char* to_string(Study study) {
  switch (study) {
    case Study::ConstTempNoise: return "const-temp-noise";
    case Study::StationCorrelation: return "station";
    case Study::VaryingTempNoise: return "varying-temp-noise";
  }
  return "unknown";
}

Study study_from_string(const std::string& name) {
  if (name == "const-temp-noise") return Study::ConstTempNoise;
  if (name == "station") return Study::StationCorrelation;
  if (name == "varying-temp-noise") return Study::VaryingTempNoise;
  throw Error(ErrorCode::OutOfRange, "unknown study '" + name + "'");
}

void StudyConfig::validate() const {
  if (replicates < 1)
    throw Error(ErrorCode::OutOfRange, "replicates must be >= 1");
  if (n_lengths < 1)
    throw Error(ErrorCode::OutOfRange, "n_lengths must be >= 1");
  for (double s : sigma_T)
    if (s < 0.0) throw Error(ErrorCode::OutOfRange, "sigma_T must be >= 0");
  for (double r : rho_T)
    if (!(r > -1.0 && r < 1.0) && r != 1.0)
      throw Error(ErrorCode::OutOfRange, "rho_T must lie in (-1, 1]");
  if (!(dt > 0.0) || !(candidate_step > 0.0))
    throw Error(ErrorCode::OutOfRange, "dt and candidate step must be positive");
}

namespace {

constexpr std::uint64_t kTempCounterBase = 0;
constexpr std::uint64_t kLengthCounterBase = 1'000'000;

struct CellAccumulator {
  std::vector<std::optional<double>> slots;

  explicit CellAccumulator(int replicates)
      : slots(static_cast<std::size_t>(replicates)) {}

  StudyCell finish(double param) const {
    StudyCell cell;
    cell.param = param;
    cell.replicates = static_cast<int>(slots.size());
    std::vector<double> values;
    for (std::size_t r = 0; r < slots.size(); ++r) {
      if (slots[r]) {
        cell.estimates.emplace_back(static_cast<int>(r), *slots[r]);
        values.push_back(*slots[r]);
      } else {
        ++cell.failures;
      }
    }
    cell.mean = values.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : mean(values);
    cell.sd = values.size() >= 2 ? std::sqrt(sample_variance(values)) : 0.0;
    return cell;
  }
};

double estimate_once(const GrowthField& field, const TemperatureProfile& profile,
                     const std::vector<double>& lengths, double t_a,
                     double t_star, const StudyConfig& config) {
  CaseObservation obs;
  obs.lengths_mm = lengths;
  obs.t_star_h = t_star;
  obs.t_a_h = t_a;
  obs.stage = Stage::Unknown;
  const auto candidates = make_candidate_grid(t_a, t_star, config.candidate_step);
  const auto criterion =
      criterion_profile(field, profile, obs, candidates, config.dt);
  return estimate_hatching(criterion, obs).t_hat_h;
}

std::vector<double> scene_lengths(const CounterRng& rng, double truth,
                                  const StudyConfig& config) {
  std::vector<double> lengths(static_cast<std::size_t>(config.n_lengths));
  for (std::size_t i = 0; i < lengths.size(); ++i)
    lengths[i] = config.length_noise_sd == 0.0
                     ? truth
                     : truth + config.length_noise_sd *
                                   rng.normal(kLengthCounterBase + i);
  return lengths;
}

} // namespace

StudyResult run_const_temp_noise(const StudyConfig& config,
                                 const GrowthField& field) {
  config.validate();
  StudyResult result;
  result.study = Study::ConstTempNoise;
  result.seed = config.seed;

  std::vector<double> hours;
  for (double t = -200.0; t <= 0.0; t += 1.0) hours.push_back(t);
  const TemperatureProfile exact(hours, std::vector<double>(hours.size(), 10.0));
  const double t_a = std::max(config.t_a_h, exact.span_begin());
  const double truth =
      reconstruct_growth(field, exact, config.true_hatch_h, 0.0, config.dt)
          .final_length();

  const CounterRng root = CounterRng(config.seed).stream(1);
  for (std::size_t c = 0; c < config.sigma_T.size(); ++c) {
    const double sigma = config.sigma_T[c];
    const CounterRng cell_rng = root.stream(c);
    CellAccumulator acc(config.replicates);
    parallel_for(static_cast<std::size_t>(config.replicates), config.threads,
                 [&](std::size_t r) {
                   const CounterRng rep = cell_rng.stream(r);
                   std::vector<double> temps(hours.size());
                   for (std::size_t k = 0; k < hours.size(); ++k)
                     temps[k] = 10.0 + (sigma == 0.0
                                            ? 0.0
                                            : sigma * rep.normal(kTempCounterBase + k));
                   try {
                     const TemperatureProfile perturbed(hours, temps);
                     const auto lengths = scene_lengths(rep, truth, config);
                     acc.slots[r] = estimate_once(field, perturbed, lengths, t_a,
                                                  0.0, config);
                   } catch (const Error&) {
                     acc.slots[r] = std::nullopt;
                   }
                 });
    result.cells.push_back(acc.finish(sigma));
  }
  return result;
}

StudyResult run_station_correlation(const StudyConfig& config,
                                    const GrowthField& field) {
  config.validate();
  StudyResult result;
  result.study = Study::StationCorrelation;
  result.seed = config.seed;

  constexpr int kPairs = 250;
  constexpr int kCalibration = kPairs / 4; // 62: "one fourth", floored
  constexpr double kMeanTemp = 15.0;
  const double temp_sd = std::sqrt(0.5);
  const int scene_hours = kPairs - kCalibration;

  std::vector<double> hours(static_cast<std::size_t>(scene_hours));
  for (int j = 0; j < scene_hours; ++j)
    hours[static_cast<std::size_t>(j)] = static_cast<double>(j - (scene_hours - 1));

  const CounterRng root = CounterRng(config.seed).stream(2);
  for (std::size_t c = 0; c < config.rho_T.size(); ++c) {
    const double rho = config.rho_T[c];
    const CounterRng cell_rng = root.stream(c);
    CellAccumulator acc(config.replicates);
    parallel_for(static_cast<std::size_t>(config.replicates), config.threads,
                 [&](std::size_t r) {
                   const CounterRng rep = cell_rng.stream(r);
                   std::vector<double> scene(kPairs), station(kPairs);
                   const double resid = std::sqrt(std::max(0.0, 1.0 - rho * rho));
                   for (int i = 0; i < kPairs; ++i) {
                     const double z1 = rep.normal(2 * static_cast<std::uint64_t>(i));
                     const double z2 =
                         rep.normal(2 * static_cast<std::uint64_t>(i) + 1);
                     scene[static_cast<std::size_t>(i)] = kMeanTemp + temp_sd * z1;
                     station[static_cast<std::size_t>(i)] =
                         kMeanTemp + temp_sd * (rho * z1 + resid * z2);
                   }
                   try {
                     const OlsLine line = fit_ols(
                         std::span(station).first(kCalibration),
                         std::span(scene).first(kCalibration));
                     std::vector<double> scene_tail(hours.size());
                     std::vector<double> predicted(hours.size());
                     for (std::size_t j = 0; j < hours.size(); ++j) {
                       const std::size_t src = static_cast<std::size_t>(kCalibration) + j;
                       scene_tail[j] = scene[src];
                       predicted[j] = line.predict(station[src]);
                     }
                     const TemperatureProfile true_profile(hours, scene_tail);
                     const TemperatureProfile pred_profile(hours, predicted);
                     const double t_a =
                         std::max(config.t_a_h, true_profile.span_begin());
                     const double truth =
                         reconstruct_growth(field, true_profile,
                                            config.true_hatch_h, 0.0, config.dt)
                             .final_length();
                     const auto lengths = scene_lengths(rep, truth, config);
                     acc.slots[r] = estimate_once(field, pred_profile, lengths,
                                                  t_a, 0.0, config);
                   } catch (const Error&) {
                     acc.slots[r] = std::nullopt;
                   }
                 });
    result.cells.push_back(acc.finish(rho));
  }
  return result;
}

StudyResult run_varying_temp_noise(const StudyConfig& config,
                                   const GrowthField& field,
                                   const TemperatureProfile& profile) {
  config.validate();
  StudyResult result;
  result.study = Study::VaryingTempNoise;
  result.seed = config.seed;

  const double t_a = std::max(config.t_a_h, profile.span_begin());
  const double truth =
      reconstruct_growth(field, profile, config.true_hatch_h, 0.0, config.dt)
          .final_length();
  const auto& hours = profile.times();
  const auto& base_temps = profile.temps();

  const CounterRng root = CounterRng(config.seed).stream(3);
  for (std::size_t c = 0; c < config.sigma_T.size(); ++c) {
    const double sigma = config.sigma_T[c];
    const CounterRng cell_rng = root.stream(c);
    CellAccumulator acc(config.replicates);
    parallel_for(static_cast<std::size_t>(config.replicates), config.threads,
                 [&](std::size_t r) {
                   const CounterRng rep = cell_rng.stream(r);
                   std::vector<double> temps(base_temps);
                   if (sigma != 0.0)
                     for (std::size_t k = 0; k < temps.size(); ++k)
                       temps[k] += sigma * rep.normal(kTempCounterBase + k);
                   try {
                     const TemperatureProfile perturbed(hours, temps);
                     const auto lengths = scene_lengths(rep, truth, config);
                     acc.slots[r] = estimate_once(field, perturbed, lengths, t_a,
                                                  0.0, config);
                   } catch (const Error&) {
                     acc.slots[r] = std::nullopt;
                   }
                 });
    result.cells.push_back(acc.finish(sigma));
  }
  return result;
}

TemperatureProfile synthetic_weather_profile() {
  std::vector<double> hours, temps;
  for (double t = -250.0; t <= 0.0; t += 1.0) {
    hours.push_back(t);
    temps.push_back(9.5 + 2.5 * std::sin(2.0 * M_PI * (t + 6.0) / 24.0) +
                    0.8 * std::sin(2.0 * M_PI * t / 147.0));
  }
  return TemperatureProfile(std::move(hours), std::move(temps));
}

SynthFamily canonical_family() { return SynthFamily{}; }

GrowthField canonical_study_field() {
  const SynthFamily family = canonical_family();
  const std::vector<double> temps = {6, 9, 12, 15, 18, 21, 24, 27, 30};
  const ExperimentalDataset ds = synth_dataset(family, temps, 25, 1, 42);
  return fit_growth_field(ds, FitOptions{});
}

void write_samples_csv(std::ostream& out, const StudyResult& result) {
  out << "study,param,replicate,t_hat\n";
  char buf[64];
  for (const auto& cell : result.cells)
    for (const auto& [replicate, t_hat] : cell.estimates) {
      out << to_string(result.study) << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", cell.param);
      out << buf << ',' << replicate << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", t_hat);
      out << buf << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const StudyResult& result,
                         double bin_width) {
  out << "study,param,bin_lo,bin_hi,count\n";
  char buf[64];
  for (const auto& cell : result.cells) {
    if (cell.estimates.empty()) continue;
    double lo = cell.estimates.front().second;
    double hi = lo;
    for (const auto& [_, t] : cell.estimates) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    const long first = std::lround(std::floor(lo / bin_width));
    const long last = std::lround(std::floor(hi / bin_width));
    std::vector<long> counts(static_cast<std::size_t>(last - first + 1), 0);
    for (const auto& [_, t] : cell.estimates) {
      const long bin = std::lround(std::floor(t / bin_width)) - first;
      ++counts[static_cast<std::size_t>(bin)];
    }
    for (std::size_t b = 0; b < counts.size(); ++b) {
      if (counts[b] == 0) continue;
      out << to_string(result.study) << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", cell.param);
      out << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g",
                    (static_cast<double>(first) + static_cast<double>(b)) * bin_width);
      out << buf << ',';
      std::snprintf(buf, sizeof(buf), "%.17g",
                    (static_cast<double>(first) + static_cast<double>(b) + 1.0) *
                        bin_width);
      out << buf << ',' << counts[b] << '\n';
    }
  }
}

std::string summary_json(const StudyResult& result) {
  json doc;
  doc["format"] = "larvest-simulation";
  doc["version"] = 1;
  doc["study"] = to_string(result.study);
  doc["seed"] = result.seed;
  json cells = json::array();
  for (const auto& cell : result.cells) {
    json jc;
    jc["param"] = cell.param;
    jc["replicates"] = cell.replicates;
    jc["failures"] = cell.failures;
    jc["mean"] = std::isfinite(cell.mean) ? json(cell.mean) : json();
    jc["sd"] = cell.sd;
    cells.push_back(std::move(jc));
  }
  doc["cells"] = std::move(cells);
  return doc.dump(2);
}

} // namespace larvest
