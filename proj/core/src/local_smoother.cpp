#include "larvest/local_smoother.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "larvest/errors.hpp"
#include "larvest/stats.hpp"

namespace larvest {

ConstantTempCurve::ConstantTempCurve(double temperature_c, double t_pup_h,
                                     std::vector<double> values,
                                     std::vector<double> derivs,
                                     double bandwidth_h)
    : temperature_c_(temperature_c),
      t_pup_h_(t_pup_h),
      values_(std::move(values)),
      derivs_(std::move(derivs)),
      bandwidth_h_(bandwidth_h) {
  if (values_.size() < 10 || values_.size() != derivs_.size())
    throw Error(ErrorCode::InvariantViolation,
                "curve grid needs >= 10 matched value/derivative points");
  if (!(t_pup_h_ > 0.0))
    throw Error(ErrorCode::InvariantViolation, "t_pup must be positive");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]) || !std::isfinite(derivs_[i]))
      throw Error(ErrorCode::InvariantViolation,
                  "non-finite curve sample at grid index " + std::to_string(i));
  step_ = t_pup_h_ / static_cast<double>(values_.size() - 1);
  argmax_ = static_cast<std::size_t>(
      std::max_element(values_.begin(), values_.end()) - values_.begin());
  max_value_ = values_[argmax_];
}

namespace {

double interp(const std::vector<double>& ys, double step, double t_pup, double t) {
  if (t <= 0.0) return ys.front();
  if (t >= t_pup) return ys.back();
  const double x = t / step;
  const std::size_t i = std::min(static_cast<std::size_t>(x), ys.size() - 2);
  const double w = x - static_cast<double>(i);
  return ys[i] + w * (ys[i + 1] - ys[i]);
}

} // namespace

double ConstantTempCurve::value_at(double t) const {
  return interp(values_, step_, t_pup_h_, t);
}

double ConstantTempCurve::deriv_at(double t) const {
  return interp(derivs_, step_, t_pup_h_, t);
}

std::vector<SummaryPoint> batch_summaries(const TemperatureBatch& batch) {
  const double n_k = static_cast<double>(batch.observations.size());
  std::vector<SummaryPoint> out;
  out.reserve(batch.observations.size());
  for (const auto& tp : batch.observations)
    out.push_back(SummaryPoint{tp.time_h, tp.mean_length(),
                               static_cast<double>(tp.replicate_count()) / n_k});
  return out;
}

double default_time_bandwidth(std::span<const SummaryPoint> summaries) {
  if (summaries.size() < 2)
    throw Error(ErrorCode::DegenerateDesign,
                "bandwidth rule needs at least 2 design times");
  std::vector<double> gaps;
  gaps.reserve(summaries.size() - 1);
  for (std::size_t j = 1; j < summaries.size(); ++j)
    gaps.push_back(summaries[j].time_h - summaries[j - 1].time_h);
  return 2.0 * median(gaps);
}

LocalFitPoint local_linear_at(std::span<const SummaryPoint> summaries,
                              Kernel kernel, double bandwidth_h, double t) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, u0 = 0.0, u1 = 0.0;
  int effective = 0;
  for (const auto& p : summaries) {
    const double d = p.time_h - t;
    const double w = p.weight * kernel_value(kernel, d / bandwidth_h);
    if (w <= 0.0) continue;
    ++effective;
    s0 += w;
    s1 += w * d;
    s2 += w * d * d;
    u0 += w * p.mean_length;
    u1 += w * d * p.mean_length;
  }
  if (effective < 2)
    throw Error(ErrorCode::DegenerateDesign,
                "fewer than 2 design points in the kernel window at t=" +
                    std::to_string(t) + "; increase the time bandwidth");
  const double det = s0 * s2 - s1 * s1;
  // det/(s0*s2) is scale-free; det >= 0 by Cauchy-Schwarz.
  if (!(det > 1e-12 * s0 * s2))
    throw Error(ErrorCode::SingularSystem,
                "collinear local design at t=" + std::to_string(t));
  return LocalFitPoint{(s2 * u0 - s1 * u1) / det, (s0 * u1 - s1 * u0) / det};
}

ConstantTempCurve local_linear_fit(std::span<const SummaryPoint> summaries,
                                   const SmootherConfig& config,
                                   double temperature_c, double t_pup_h) {
  if (summaries.size() < 2)
    throw Error(ErrorCode::DegenerateDesign,
                "local linear fit needs at least 2 design times");
  const double h =
      config.bandwidth_h > 0.0 ? config.bandwidth_h : default_time_bandwidth(summaries);
  const int n = std::max(config.grid_points, 10);
  std::vector<double> values(static_cast<std::size_t>(n));
  std::vector<double> derivs(static_cast<std::size_t>(n));
  const double step = t_pup_h / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    const double t = step * static_cast<double>(i);
    const LocalFitPoint fit = local_linear_at(summaries, config.kernel, h, t);
    values[static_cast<std::size_t>(i)] = fit.value;
    derivs[static_cast<std::size_t>(i)] = fit.deriv;
  }
  return ConstantTempCurve(temperature_c, t_pup_h, std::move(values),
                           std::move(derivs), h);
}

} // namespace larvest
