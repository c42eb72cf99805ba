#ifndef LARVEST_GROWTH_DYNAMICS_HPP
#define LARVEST_GROWTH_DYNAMICS_HPP

#include <iosfwd>
#include <vector>

#include "larvest/data_model.hpp"
#include "larvest/local_smoother.hpp"
#include "larvest/temperature_field.hpp"

namespace larvest {

enum class Phase { Feeding, PostFeeding, Pupated };

const char* to_string(Phase phase);

/// Expected growth trajectory under a varying temperature profile. Times,
/// lengths, and phases are truncated at pupation: the length at the pupation
/// step is the last one defined.
struct VaryingTempCurve {
  std::vector<double> times_h;
  std::vector<double> lengths_mm;
  std::vector<Phase> phases;
  double hatch_length_mm = 0.0;

  bool pupated() const { return !phases.empty() && phases.back() == Phase::Pupated; }
  double final_time() const { return times_h.back(); }
  double final_length() const { return lengths_mm.back(); }
  Phase final_phase() const { return phases.back(); }
};

/// Inverts a constant-temperature curve on the requested monotone branch:
/// the pre-peak increasing branch for Feeding, the post-peak decreasing
/// branch for PostFeeding. Returns the time u with L(u) = length (exact for
/// the grid interpolant). Throws BranchOutOfRange when the length lies
/// outside the branch's value range.
double invert_length(const ConstantTempCurve& curve, double length, Phase phase);

/// Forward Euler reconstruction of the varying-temperature trajectory from
/// hatching at t_h to collection at t_star. Each step queries the field at
/// the profile temperature (quantized to 0.1 degC buckets by the cached
/// query), inverts the current length on the phase branch, and advances by
/// the branch-signed derivative. The running maximum against the current
/// curve's peak drives the feeding -> post-feeding switch; the trajectory
/// terminates when the length falls to the current curve's value at
/// standardized time 1.
VaryingTempCurve reconstruct_growth(const GrowthField& field,
                                    const TemperatureProfile& profile,
                                    double t_h, double t_star, double dt);

/// CSV export: header `time_h,length_mm,phase`.
void write_trajectory_csv(std::ostream& out, const VaryingTempCurve& curve);

} // namespace larvest

#endif
