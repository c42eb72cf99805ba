#ifndef LARVEST_TEMPERATURE_FIELD_HPP
#define LARVEST_TEMPERATURE_FIELD_HPP

#include <iosfwd>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "larvest/data_model.hpp"
#include "larvest/kernels.hpp"
#include "larvest/local_smoother.hpp"
#include "larvest/registration.hpp"

namespace larvest {

/// Registered material for one experimental temperature.
struct FieldEntry {
  double temperature_c = 0.0;
  GrowthShape shape;
  WarpingQuadratic warp;
};

struct FieldConfig {
  double h_shape = 0.0;
  double h_warp = 0.0;
  double h_shape_deriv = 0.0;
  double h_warp_deriv = 0.0;
  Kernel kernel = Kernel::Gaussian;
  /// Lower developmental threshold: no growth at or below this temperature.
  double dev_threshold_c = 1.0;
  /// Grid resolution of curves produced by queries.
  int curve_grid_points = 2048;
};

/// Pointwise Nadaraya-Watson blend of functions sampled on a shared grid,
/// with weights K(h^-1 (T_k - T)) normalized to sum 1.
std::vector<double> smooth_across_temperature(
    std::span<const std::pair<double, std::vector<double>>> samples, double T,
    Kernel kernel, double h);

/// Cross-temperature regression object: blends registered shapes, shape
/// derivatives, and warp coefficients to produce the constant-temperature
/// growth curve at any queried temperature.
class GrowthField {
public:
  GrowthField(std::vector<FieldEntry> entries, FieldConfig config);

  const std::vector<FieldEntry>& entries() const { return entries_; }
  const FieldConfig& config() const { return config_; }
  double temp_min() const { return entries_.front().temperature_c; }
  double temp_max() const { return entries_.back().temperature_c; }
  double alpha() const { return entries_.front().warp.alpha(); }

  /// Normalized kernel weights over the entry temperatures; EmptyWindow when
  /// a compact kernel leaves every weight at zero.
  std::vector<double> blend_weights(double T, double h) const;

  /// Blended warp: coefficient vectors (a, b) and t_pup averaged under the
  /// h_warp weights, then rescaled so the blend maps its own t_pup to 1.
  WarpingQuadratic warp_at(double T) const;
  /// Same recipe under the h_warp_deriv weights; equals warp_at's derivative
  /// whenever the two bandwidths coincide.
  std::pair<double, double> warp_deriv_coeffs_at(double T) const;

  std::vector<double> shape_values_at(double T) const;
  std::vector<double> shape_derivs_at(double T) const;

  /// Constant-temperature growth curve at any T: L = S o w with
  /// L' = (S' o w) w'. Below temp_min the curve is a convex blend toward the
  /// flat hatch-length curve, reaching zero growth at dev_threshold_c.
  ConstantTempCurve curve_at(double T) const;

  /// Quantized, cached query: T is rounded to the nearest 0.1 degC bucket and
  /// the bucket's curve is computed once. Safe under concurrent readers.
  std::shared_ptr<const ConstantTempCurve> curve_at_cached(double T) const;

  static double quantize_temperature(double T) {
    return 0.1 * static_cast<double>(llround(T * 10.0));
  }

  std::string to_json() const;
  static GrowthField from_json(const std::string& text);
  void save(const std::string& path) const;
  static GrowthField load(const std::string& path);

private:
  std::vector<FieldEntry> entries_;
  FieldConfig config_;
  std::size_t shape_grid_size_;

  // Behind a pointer so the field stays movable; guarded for concurrent
  // readers.
  struct CurveCache {
    std::shared_mutex mutex;
    std::unordered_map<long long, std::shared_ptr<const ConstantTempCurve>> map;
  };
  mutable std::unique_ptr<CurveCache> cache_;
};

struct FitOptions {
  /// Pipeline grids are finer than the bare smoother default and equal to
  /// each other: the registration identity |S(w(t)) - L(t)| decays like
  /// 1/(curve grid x shape grid), and matched grids keep the shape's peak
  /// knot aligned with the curve's.
  SmootherConfig smoother{0.0, Kernel::Gaussian, 8192};
  Kernel temp_kernel = Kernel::Gaussian;
  /// <= 0 selects twice the maximum gap between consecutive experimental
  /// temperatures, shared by all four temperature smoothers.
  double h_temp = 0.0;
  double alpha = 0.0; // <= 0 selects the landmark-ratio default
  int shape_grid_points = 8192;
  double dev_threshold_c = 1.0;
  int curve_grid_points = 2048;
};

struct FitDiagnostics {
  struct Entry {
    double temperature_c = 0.0;
    double t_max_h = 0.0;
    double t_pup_h = 0.0;
    double bandwidth_h = 0.0;
  };
  std::vector<Entry> entries;
  std::vector<std::pair<double, std::string>> excluded;
  double alpha = 0.0;
  double h_temp = 0.0;
};

/// Full fitting pipeline: per-temperature local linear smoothing, landmark
/// registration, then field assembly. Batches whose smoothed curve never
/// declines are excluded with a diagnostic; at least two must survive.
GrowthField fit_growth_field(const ExperimentalDataset& dataset,
                             const FitOptions& options,
                             FitDiagnostics* diagnostics = nullptr);

} // namespace larvest

#endif
