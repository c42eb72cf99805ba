#ifndef LARVEST_LOCAL_SMOOTHER_HPP
#define LARVEST_LOCAL_SMOOTHER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "larvest/data_model.hpp"
#include "larvest/kernels.hpp"

namespace larvest {

/// Estimated growth curve at one constant temperature: values and first
/// derivatives on a uniform time grid over [0, t_pup].
class ConstantTempCurve {
public:
  ConstantTempCurve(double temperature_c, double t_pup_h,
                    std::vector<double> values, std::vector<double> derivs,
                    double bandwidth_h = 0.0);

  double temperature_c() const { return temperature_c_; }
  double t_pup() const { return t_pup_h_; }
  double bandwidth() const { return bandwidth_h_; }
  std::size_t grid_size() const { return values_.size(); }
  double grid_step() const { return step_; }
  double grid_time(std::size_t i) const { return step_ * static_cast<double>(i); }

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& derivs() const { return derivs_; }

  /// Linear interpolation; t clamped to [0, t_pup].
  double value_at(double t) const;
  double deriv_at(double t) const;

  double hatch_value() const { return values_.front(); }
  double final_value() const { return values_.back(); }
  double max_value() const { return max_value_; }
  std::size_t argmax_index() const { return argmax_; }

  /// Peak time, when known (set by registration or field evaluation).
  std::optional<double> t_max() const { return t_max_h_; }
  void set_t_max(double t) { t_max_h_ = t; }

private:
  double temperature_c_;
  double t_pup_h_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  double bandwidth_h_;
  double step_;
  double max_value_;
  std::size_t argmax_;
  std::optional<double> t_max_h_;
};

struct SmootherConfig {
  double bandwidth_h = 0.0; // <= 0 selects the rule of thumb (2 x median gap)
  // Gaussian by default: the Epanechnikov kernel is not C^1 at its support
  // edge, which leaves slope kinks in the fitted curve as design points move
  // through the window and caps the registration identity near 1e-4.
  Kernel kernel = Kernel::Gaussian;
  int grid_points = 512;
};

/// Per-time summary: replicate mean and the weight N_kj / n_k used by the
/// weighted local linear fit.
struct SummaryPoint {
  double time_h = 0.0;
  double mean_length = 0.0;
  double weight = 0.0;
};

std::vector<SummaryPoint> batch_summaries(const TemperatureBatch& batch);

/// Weighted local linear regression on the summaries, evaluated on a uniform
/// grid over [0, t_pup]. The intercept estimates the curve value, the slope
/// its derivative. Closed-form 2x2 solve via the moment sums
/// S_m(t) = sum_j w_j (t_j - t)^m K(h^-1 (t_j - t)).
ConstantTempCurve local_linear_fit(std::span<const SummaryPoint> summaries,
                                   const SmootherConfig& config,
                                   double temperature_c, double t_pup_h);

/// Single-point evaluation (value, derivative); the grid fit above is this
/// applied per grid node.
struct LocalFitPoint {
  double value = 0.0;
  double deriv = 0.0;
};
LocalFitPoint local_linear_at(std::span<const SummaryPoint> summaries,
                              Kernel kernel, double bandwidth_h, double t);

/// Rule of thumb: twice the median gap between consecutive design times.
double default_time_bandwidth(std::span<const SummaryPoint> summaries);

} // namespace larvest

#endif
