#include "larvest/registration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "larvest/errors.hpp"

namespace larvest {

Landmarks find_landmarks(const ConstantTempCurve& curve) {
  const std::size_t i = curve.argmax_index();
  if (i == 0 || i + 1 == curve.grid_size())
    throw Error(ErrorCode::BoundaryMaximum,
                "growth curve of temperature " +
                    std::to_string(curve.temperature_c()) +
                    " peaks at the grid boundary; the batch never declines "
                    "before its last observation");
  const double step = curve.grid_step();
  const double vm = curve.values()[i - 1];
  const double v0 = curve.values()[i];
  const double vp = curve.values()[i + 1];
  const double denom = vm - 2.0 * v0 + vp;
  double offset = 0.0;
  if (denom < 0.0) offset = 0.5 * (vm - vp) / denom;
  offset = std::clamp(offset, -0.5, 0.5);
  return Landmarks{curve.grid_time(i) + offset * step, curve.t_pup()};
}

WarpingQuadratic::WarpingQuadratic(double a, double b, double t_pup_h,
                                   double alpha, double t_max_h)
    : a_(a), b_(b), t_pup_h_(t_pup_h), alpha_(alpha), t_max_h_(t_max_h) {}

WarpingQuadratic WarpingQuadratic::fit(double t_max_h, double t_pup_h,
                                       double alpha) {
  if (!(0.0 < t_max_h && t_max_h < t_pup_h))
    throw Error(ErrorCode::OutOfRange, "need 0 < t_max < t_pup");
  if (!(0.0 < alpha && alpha < 1.0))
    throw Error(ErrorCode::OutOfRange, "alpha must lie in (0,1)");
  // Solve a t_max + b t_max^2 = alpha, a t_pup + b t_pup^2 = 1.
  const double det = t_max_h * t_pup_h * (t_pup_h - t_max_h);
  const double a = (alpha * t_pup_h * t_pup_h - t_max_h * t_max_h) / det;
  const double b = (t_max_h - alpha * t_pup_h) / det;
  const double d0 = a;
  const double d1 = a + 2.0 * b * t_pup_h;
  if (!(d0 > 0.0) || !(d1 > 0.0))
    throw Error(ErrorCode::MonotonicityViolation,
                "interpolating quadratic is not strictly increasing: w'(0)=" +
                    std::to_string(d0) + ", w'(t_pup)=" + std::to_string(d1));
  return WarpingQuadratic(a, b, t_pup_h, alpha, t_max_h);
}

double WarpingQuadratic::inverse(double u) const {
  if (u < 0.0 || u > 1.0)
    throw Error(ErrorCode::OutOfRange,
                "warp inverse defined on [0,1], got " + std::to_string(u));
  if (u == 0.0) return 0.0;
  if (u == 1.0) return t_pup_h_;
  // Increasing root of b t^2 + a t - u = 0, written to stay stable as b -> 0.
  const double disc = a_ * a_ + 4.0 * b_ * u;
  return 2.0 * u / (a_ + std::sqrt(std::max(disc, 0.0)));
}

namespace {

double interp_unit(const std::vector<double>& ys, double u) {
  if (u <= 0.0) return ys.front();
  if (u >= 1.0) return ys.back();
  const double x = u * static_cast<double>(ys.size() - 1);
  const std::size_t i = std::min(static_cast<std::size_t>(x), ys.size() - 2);
  const double w = x - static_cast<double>(i);
  return ys[i] + w * (ys[i + 1] - ys[i]);
}

} // namespace

double GrowthShape::at(double u) const { return interp_unit(values, u); }
double GrowthShape::deriv_at(double u) const { return interp_unit(derivs, u); }

GrowthShape compute_shape(const ConstantTempCurve& curve,
                          const WarpingQuadratic& warp, int shape_grid_points) {
  if (std::abs(warp.t_pup() - curve.t_pup()) > 1e-9 * std::max(1.0, curve.t_pup()))
    throw Error(ErrorCode::InvariantViolation,
                "curve and warp disagree on t_pup");
  const int n = std::max(shape_grid_points, 10);
  GrowthShape shape;
  shape.temperature_c = curve.temperature_c();
  shape.values.resize(static_cast<std::size_t>(n));
  shape.derivs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    const double t = warp.inverse(u);
    shape.values[static_cast<std::size_t>(i)] = curve.value_at(t);
    shape.derivs[static_cast<std::size_t>(i)] =
        curve.deriv_at(t) / warp.deriv(t);
  }
  return shape;
}

AlphaBounds alpha_bounds(const Landmarks& lm) {
  const double r = lm.peak_ratio();
  return AlphaBounds{r * r, r * (2.0 - r)};
}

double default_alpha(std::span<const Landmarks> landmarks) {
  if (landmarks.empty())
    throw Error(ErrorCode::OutOfRange, "no landmarks to derive alpha from");
  double sum = 0.0;
  double lo = 0.0, hi = 1.0;
  for (const auto& lm : landmarks) {
    sum += lm.peak_ratio();
    const AlphaBounds b = alpha_bounds(lm);
    lo = std::max(lo, b.lo);
    hi = std::min(hi, b.hi);
  }
  if (!(lo < hi))
    throw Error(ErrorCode::MonotonicityViolation,
                "no alpha keeps every warp strictly increasing");
  const double margin = 1e-3 * (hi - lo);
  return std::clamp(sum / static_cast<double>(landmarks.size()), lo + margin,
                    hi - margin);
}

} // namespace larvest
