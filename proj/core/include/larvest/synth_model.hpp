#ifndef LARVEST_SYNTH_MODEL_HPP
#define LARVEST_SYNTH_MODEL_HPP

#include <cstdint>
#include <span>

#include "larvest/data_model.hpp"
#include "larvest/local_smoother.hpp"

namespace larvest {

/// Closed-form ground-truth growth family for verification. Growth runs on a
/// degree-hour clock s = t * (T - base_temp), so temperature only rescales
/// time: hotter curves are compressed by 1/(T - base_temp) while the shape in
/// s is shared. In s the length rises linearly at rate_coeff from
/// hatch_len, eases into max_len through a parabolic cap over the last
/// kEaseFraction of the rise, and falls back quadratically to
/// shrink_frac * max_len at pupation.
struct SynthFamily {
  double rate_coeff = 0.006;   // mm per degree-hour above threshold
  double base_temp_c = 4.0;    // lower developmental threshold
  double max_len_mm = 11.0;    // peak length
  double hatch_len_mm = 3.0;   // length at hatching
  double shrink_frac = 0.85;   // fraction of the peak kept at pupation
  double noise_sd_mm = 0.0;    // measurement noise of generated datasets

  static constexpr double kEaseFraction = 0.35; // rise fraction that is eased
  static constexpr double kPostSpanFraction = 0.6; // post-peak span / s_peak

  void validate() const;

  // Degree-hour milestones of the shared shape.
  double s_ease_start() const;
  double s_peak() const;
  double s_pup() const;

  /// Value and slope of the shared shape on the degree-hour clock.
  double shape_value(double s) const;
  double shape_slope(double s) const;

  double t_max(double temp_c) const;  // BelowThreshold for T <= base_temp
  double t_pup(double temp_c) const;
  double length_at(double temp_c, double t_h) const;
  double deriv_at(double temp_c, double t_h) const;
};

/// Samples the closed-form curve on a uniform grid over [0, t_pup(T)].
ConstantTempCurve synth_truth_curve(const SynthFamily& family, double temp_c,
                                    int grid_points = 2048);

/// Deterministic noisy dataset: times are uniform on [0, t_pup(T)] per
/// temperature, with `replicates` Gaussian-noise lengths per time. Draws are
/// counter-indexed per (temperature, time, replicate), so regeneration is
/// bit-exact for a seed and independent of scheduling. Lengths are floored
/// at 0.05 mm to keep the dataset invariant (positive lengths) under heavy
/// noise.
ExperimentalDataset synth_dataset(const SynthFamily& family,
                                  std::span<const double> temps_c,
                                  int times_per_temp, int replicates,
                                  std::uint64_t seed);

} // namespace larvest

#endif
