#include "larvest/synth_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "larvest/errors.hpp"
#include "larvest/rng.hpp"

namespace larvest {

void SynthFamily::validate() const {
  if (!(rate_coeff > 0.0))
    throw Error(ErrorCode::InvariantViolation, "rate_coeff must be positive");
  if (!(hatch_len_mm > 0.0) ||
      !(hatch_len_mm < shrink_frac * max_len_mm) ||
      !(shrink_frac * max_len_mm < max_len_mm))
    throw Error(ErrorCode::InvariantViolation,
                "need 0 < hatch_len < shrink_frac*max_len < max_len");
}

double SynthFamily::s_ease_start() const {
  return (1.0 - kEaseFraction) * (max_len_mm - hatch_len_mm) / rate_coeff;
}

double SynthFamily::s_peak() const {
  // The parabolic cap spends twice the linear-time equivalent on the eased
  // rise so its slope reaches exactly zero at the peak.
  return s_ease_start() +
         2.0 * kEaseFraction * (max_len_mm - hatch_len_mm) / rate_coeff;
}

double SynthFamily::s_pup() const {
  return s_peak() * (1.0 + kPostSpanFraction);
}

double SynthFamily::shape_value(double s) const {
  const double s1 = s_ease_start();
  const double sp = s_peak();
  if (s <= 0.0) return hatch_len_mm;
  if (s <= s1) return hatch_len_mm + rate_coeff * s;
  if (s <= sp) {
    const double d = s - s1;
    return hatch_len_mm + (1.0 - kEaseFraction) * (max_len_mm - hatch_len_mm) +
           rate_coeff * d - rate_coeff * d * d / (2.0 * (sp - s1));
  }
  const double spup = s_pup();
  const double q = (1.0 - shrink_frac) * max_len_mm / ((spup - sp) * (spup - sp));
  const double d = std::min(s, spup) - sp;
  return max_len_mm - q * d * d;
}

double SynthFamily::shape_slope(double s) const {
  const double s1 = s_ease_start();
  const double sp = s_peak();
  if (s <= 0.0) return rate_coeff;
  if (s <= s1) return rate_coeff;
  if (s <= sp) return rate_coeff * (1.0 - (s - s1) / (sp - s1));
  const double spup = s_pup();
  if (s > spup) return 0.0;
  const double q = (1.0 - shrink_frac) * max_len_mm / ((spup - sp) * (spup - sp));
  return -2.0 * q * (s - sp);
}

namespace {

double excess(const SynthFamily& family, double temp_c) {
  const double x = temp_c - family.base_temp_c;
  if (!(x > 0.0))
    throw Error(ErrorCode::BelowThreshold,
                "temperature " + std::to_string(temp_c) +
                    " at or below the developmental threshold " +
                    std::to_string(family.base_temp_c));
  return x;
}

} // namespace

double SynthFamily::t_max(double temp_c) const {
  return s_peak() / excess(*this, temp_c);
}

double SynthFamily::t_pup(double temp_c) const {
  return s_pup() / excess(*this, temp_c);
}

double SynthFamily::length_at(double temp_c, double t_h) const {
  return shape_value(t_h * excess(*this, temp_c));
}

double SynthFamily::deriv_at(double temp_c, double t_h) const {
  const double x = excess(*this, temp_c);
  return shape_slope(t_h * x) * x;
}

ConstantTempCurve synth_truth_curve(const SynthFamily& family, double temp_c,
                                    int grid_points) {
  family.validate();
  const double t_pup = family.t_pup(temp_c);
  const int n = std::max(grid_points, 10);
  std::vector<double> values(static_cast<std::size_t>(n));
  std::vector<double> derivs(static_cast<std::size_t>(n));
  const double step = t_pup / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    const double t = step * static_cast<double>(i);
    values[static_cast<std::size_t>(i)] = family.length_at(temp_c, t);
    derivs[static_cast<std::size_t>(i)] = family.deriv_at(temp_c, t);
  }
  ConstantTempCurve curve(temp_c, t_pup, std::move(values), std::move(derivs));
  curve.set_t_max(family.t_max(temp_c));
  return curve;
}

ExperimentalDataset synth_dataset(const SynthFamily& family,
                                  std::span<const double> temps_c,
                                  int times_per_temp, int replicates,
                                  std::uint64_t seed) {
  family.validate();
  if (temps_c.empty())
    throw Error(ErrorCode::EmptyDataset, "no temperatures requested");
  if (times_per_temp < 2 || replicates < 1)
    throw Error(ErrorCode::OutOfRange,
                "need at least 2 times per temperature and 1 replicate");

  const CounterRng rng(seed);
  ExperimentalDataset ds;
  for (std::size_t k = 0; k < temps_c.size(); ++k) {
    const double T = temps_c[k];
    const double t_pup = family.t_pup(T);
    const CounterRng batch_rng = rng.stream(k);
    TemperatureBatch batch;
    batch.temperature_c = T;
    for (int j = 0; j < times_per_temp; ++j) {
      TimePoint tp;
      tp.time_h = t_pup * static_cast<double>(j) /
                  static_cast<double>(times_per_temp - 1);
      const double truth = family.length_at(T, tp.time_h);
      tp.lengths_mm.reserve(static_cast<std::size_t>(replicates));
      for (int l = 0; l < replicates; ++l) {
        const std::uint64_t counter =
            static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(replicates) +
            static_cast<std::uint64_t>(l);
        const double noise =
            family.noise_sd_mm == 0.0
                ? 0.0
                : family.noise_sd_mm * batch_rng.normal(counter);
        tp.lengths_mm.push_back(std::max(truth + noise, 0.05));
      }
      batch.observations.push_back(std::move(tp));
    }
    ds.batches.push_back(std::move(batch));
  }
  std::sort(ds.batches.begin(), ds.batches.end(),
            [](const TemperatureBatch& a, const TemperatureBatch& b) {
              return a.temperature_c < b.temperature_c;
            });
  ds.validate();
  return ds;
}

} // namespace larvest
