#ifndef LARVEST_REGISTRATION_HPP
#define LARVEST_REGISTRATION_HPP

#include <span>
#include <vector>

#include "larvest/local_smoother.hpp"

namespace larvest {

struct Landmarks {
  double t_max_h = 0.0;
  double t_pup_h = 0.0;

  double peak_ratio() const { return t_max_h / t_pup_h; }
};

/// Locates the peak of a constant-temperature curve. The discrete argmax is
/// refined by the vertex of the parabola through its three surrounding grid
/// points (offset clamped to half a grid step). A peak on the first or last
/// grid point means the warp would be degenerate: BoundaryMaximum.
Landmarks find_landmarks(const ConstantTempCurve& curve);

/// Strictly increasing quadratic time warp w(t) = a t + b t^2 mapping
/// [0, t_pup] onto [0, 1] with w(t_max) = alpha.
class WarpingQuadratic {
public:
  /// Interpolates (0,0), (t_max, alpha), (t_pup, 1). Throws
  /// MonotonicityViolation when the interpolant is not strictly increasing
  /// on [0, t_pup] (w' is affine, so the endpoint derivatives decide).
  static WarpingQuadratic fit(double t_max_h, double t_pup_h, double alpha);

  /// Direct construction from known coefficients (deserialization, blending).
  WarpingQuadratic(double a, double b, double t_pup_h, double alpha, double t_max_h);

  double operator()(double t) const { return a_ * t + b_ * t * t; }
  double deriv(double t) const { return a_ + 2.0 * b_ * t; }

  /// Inverse on the increasing branch; u must lie in [0, 1].
  double inverse(double u) const;

  double a() const { return a_; }
  double b() const { return b_; }
  double t_pup() const { return t_pup_h_; }
  double alpha() const { return alpha_; }
  double t_max() const { return t_max_h_; }

private:
  double a_;
  double b_;
  double t_pup_h_;
  double alpha_;
  double t_max_h_;
};

/// Growth shape on standardized time [0, 1]: S = L o w^-1 with the chain-rule
/// derivative S'(u) = L'(w^-1(u)) / w'(w^-1(u)).
struct GrowthShape {
  double temperature_c = 0.0;
  std::vector<double> values;
  std::vector<double> derivs;

  double at(double u) const;
  double deriv_at(double u) const;
  double grid_step() const { return 1.0 / static_cast<double>(values.size() - 1); }
};

GrowthShape compute_shape(const ConstantTempCurve& curve,
                          const WarpingQuadratic& warp, int shape_grid_points);

/// Open interval of alpha values for which the fitted warp stays strictly
/// increasing: (r^2, r(2 - r)) with r = t_max / t_pup.
struct AlphaBounds {
  double lo = 0.0;
  double hi = 1.0;
};
AlphaBounds alpha_bounds(const Landmarks& lm);

/// Mean of t_max/t_pup over the batches, clamped into the intersection of
/// the per-batch monotonicity windows.
double default_alpha(std::span<const Landmarks> landmarks);

} // namespace larvest

#endif
