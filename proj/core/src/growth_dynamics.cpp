#include "larvest/growth_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "larvest/errors.hpp"

namespace larvest {

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Feeding: return "feeding";
    case Phase::PostFeeding: return "postfeeding";
    case Phase::Pupated: return "pupated";
  }
  return "unknown";
}

namespace {

// Exact inverse of the piecewise-linear interpolant within the bracketing
// cell of a monotone grid segment.
double invert_on_cells(const ConstantTempCurve& curve, std::size_t lo,
                       std::size_t hi, double length, bool increasing) {
  const auto& v = curve.values();
  // Binary search for the bracketing cell.
  std::size_t a = lo, b = hi;
  while (b - a > 1) {
    const std::size_t mid = (a + b) / 2;
    const bool go_right = increasing ? v[mid] < length : v[mid] > length;
    if (go_right)
      a = mid;
    else
      b = mid;
  }
  const double va = v[a], vb = v[b];
  double w = (vb != va) ? (length - va) / (vb - va) : 0.0;
  w = std::clamp(w, 0.0, 1.0);
  return curve.grid_step() * (static_cast<double>(a) + w);
}

} // namespace

double invert_length(const ConstantTempCurve& curve, double length, Phase phase) {
  if (phase == Phase::Pupated)
    throw Error(ErrorCode::InversionFailure, "no branch after pupation");
  const std::size_t peak = curve.argmax_index();
  const double tol = 1e-9 * std::max(1.0, std::abs(curve.max_value()));

  if (phase == Phase::Feeding) {
    const double floor = curve.hatch_value();
    if (length < floor - tol || length > curve.max_value() + tol)
      throw Error(ErrorCode::BranchOutOfRange,
                  "length " + std::to_string(length) +
                      " outside feeding branch [" + std::to_string(floor) +
                      ", " + std::to_string(curve.max_value()) + "]");
    if (peak == 0) return 0.0;
    return invert_on_cells(curve, 0, peak,
                           std::clamp(length, floor, curve.max_value()), true);
  }

  const double floor = curve.final_value();
  if (length < floor - tol || length > curve.max_value() + tol)
    throw Error(ErrorCode::BranchOutOfRange,
                "length " + std::to_string(length) +
                    " outside post-feeding branch [" + std::to_string(floor) +
                    ", " + std::to_string(curve.max_value()) + "]");
  if (peak + 1 >= curve.grid_size()) return curve.t_pup();
  return invert_on_cells(curve, peak, curve.grid_size() - 1,
                         std::clamp(length, floor, curve.max_value()), false);
}

VaryingTempCurve reconstruct_growth(const GrowthField& field,
                                    const TemperatureProfile& profile,
                                    double t_h, double t_star, double dt) {
  if (t_h > t_star)
    throw Error(ErrorCode::BadTimeOrder, "hatching after collection");
  if (!(dt > 0.0))
    throw Error(ErrorCode::OutOfRange, "dt must be positive");
  if (!profile.covers(t_h, t_star))
    throw Error(ErrorCode::ProfileCoverageGap,
                "profile does not cover [" + std::to_string(t_h) + ", " +
                    std::to_string(t_star) + "]");

  const double span = t_star - t_h;
  const std::size_t steps =
      span == 0.0
          ? 0
          : static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));
  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i < steps; ++i)
    times[i] = t_h + dt * static_cast<double>(i);
  times[steps] = t_star;

  VaryingTempCurve out;
  out.times_h.reserve(times.size());
  out.lengths_mm.reserve(times.size());
  out.phases.reserve(times.size());

  auto curve0 = field.curve_at_cached(profile.at(t_h));
  double length = curve0->hatch_value();
  out.hatch_length_mm = length;
  double running_max = length;
  Phase phase = Phase::Feeding;

  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const auto curve = field.curve_at_cached(profile.at(t));
    const double growth_span = curve->max_value() - curve->hatch_value();
    const bool degenerate = !(growth_span > 1e-12);

    // Pupation check precedes the Euler update.
    if (phase == Phase::PostFeeding && length <= curve->final_value())
      phase = Phase::Pupated;
    else if (phase == Phase::Feeding && !degenerate &&
             running_max >= curve->max_value())
      phase = Phase::PostFeeding;

    double deriv = 0.0;
    if (phase != Phase::Pupated && !degenerate) {
      auto invert_on = [&](Phase branch) {
        const double branch_floor = branch == Phase::Feeding
                                        ? curve->hatch_value()
                                        : curve->final_value();
        const double clamped =
            std::clamp(length, branch_floor, curve->max_value());
        try {
          return invert_length(*curve, clamped, branch);
        } catch (const Error& e) {
          throw Error(ErrorCode::InversionFailure,
                      std::string(e.what()) + " (at t=" + std::to_string(t) +
                          ", T=" + std::to_string(curve->temperature_c()) + ")");
        }
      };
      if (phase == Phase::Feeding) {
        deriv = curve->deriv_at(invert_on(Phase::Feeding));
        if (deriv <= 0.0) {
          // The rising branch's interpolated derivative vanishes just below
          // the grid maximum, so the running-max rule alone would stall
          // there forever. The peak has been attained at grid resolution:
          // complete the switch.
          phase = Phase::PostFeeding;
        }
      }
      if (phase == Phase::PostFeeding) {
        const double u = invert_on(Phase::PostFeeding);
        deriv = curve->deriv_at(u);
        if (deriv >= 0.0) {
          // Still inside the flat peak cell where the sampled derivative
          // rounds to >= 0; start the decline at the nearest negative
          // derivative along the branch.
          std::size_t j = std::min(
              static_cast<std::size_t>(u / curve->grid_step()) + 1,
              curve->grid_size() - 1);
          while (j + 1 < curve->grid_size() && curve->derivs()[j] >= 0.0) ++j;
          deriv = curve->derivs()[j];
        }
        deriv = std::min(deriv, 0.0);
      } else {
        deriv = std::max(deriv, 0.0);
      }
    }

    out.times_h.push_back(t);
    out.lengths_mm.push_back(length);
    out.phases.push_back(phase);
    if (phase == Phase::Pupated || i + 1 == times.size()) break;

    length += (times[i + 1] - t) * deriv;
    running_max = std::max(running_max, length);
  }

  return out;
}

void write_trajectory_csv(std::ostream& out, const VaryingTempCurve& curve) {
  out << "time_h,length_mm,phase\n";
  char buf[64];
  for (std::size_t i = 0; i < curve.times_h.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", curve.times_h[i]);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", curve.lengths_mm[i]);
    out << buf << ',' << to_string(curve.phases[i]) << '\n';
  }
}

} // namespace larvest
