#include "larvest/temperature_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "larvest/errors.hpp"

namespace larvest {

using nlohmann::json;

std::vector<double> smooth_across_temperature(
    std::span<const std::pair<double, std::vector<double>>> samples, double T,
    Kernel kernel, double h) {
  if (samples.empty())
    throw Error(ErrorCode::EmptyWindow, "no sample functions to blend");
  const std::size_t grid = samples.front().second.size();
  std::vector<double> weights(samples.size());
  double total = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (samples[k].second.size() != grid)
      throw Error(ErrorCode::InvariantViolation,
                  "sample functions must share one grid");
    weights[k] = kernel_value(kernel, (samples[k].first - T) / h);
    total += weights[k];
  }
  if (!(total > 0.0)) {
    double nearest = samples.front().first;
    for (const auto& [tk, _] : samples)
      if (std::abs(tk - T) < std::abs(nearest - T)) nearest = tk;
    throw Error(ErrorCode::EmptyWindow,
                "all kernel weights vanish at T=" + std::to_string(T) +
                    "; nearest experimental temperature is " +
                    std::to_string(nearest));
  }
  std::vector<double> out(grid, 0.0);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double w = weights[k] / total;
    if (w == 0.0) continue;
    const auto& f = samples[k].second;
    for (std::size_t i = 0; i < grid; ++i) out[i] += w * f[i];
  }
  return out;
}

GrowthField::GrowthField(std::vector<FieldEntry> entries, FieldConfig config)
    : entries_(std::move(entries)),
      config_(config),
      cache_(std::make_unique<CurveCache>()) {
  if (entries_.size() < 2)
    throw Error(ErrorCode::InvariantViolation,
                "growth field needs at least 2 temperatures, got " +
                    std::to_string(entries_.size()));
  for (std::size_t k = 1; k < entries_.size(); ++k)
    if (!(entries_[k - 1].temperature_c < entries_[k].temperature_c))
      throw Error(ErrorCode::InvariantViolation,
                  "field entries must have strictly increasing temperatures");
  shape_grid_size_ = entries_.front().shape.values.size();
  const double alpha0 = entries_.front().warp.alpha();
  for (const auto& e : entries_) {
    if (e.shape.values.size() != shape_grid_size_ ||
        e.shape.derivs.size() != shape_grid_size_)
      throw Error(ErrorCode::InvariantViolation,
                  "field entries must share the shape grid");
    if (std::abs(e.warp.alpha() - alpha0) > 1e-12)
      throw Error(ErrorCode::InvariantViolation,
                  "field entries must share the landmark level alpha");
  }
  if (!(config_.h_shape > 0.0 && config_.h_warp > 0.0 &&
        config_.h_shape_deriv > 0.0 && config_.h_warp_deriv > 0.0))
    throw Error(ErrorCode::InvariantViolation, "bandwidths must be positive");
  if (!(config_.dev_threshold_c < temp_min()))
    throw Error(ErrorCode::InvariantViolation,
                "developmental threshold must lie below the coldest "
                "experimental temperature");
}

std::vector<double> GrowthField::blend_weights(double T, double h) const {
  std::vector<double> w(entries_.size());
  double total = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    w[k] = kernel_value(config_.kernel, (entries_[k].temperature_c - T) / h);
    total += w[k];
  }
  if (!(total > 0.0)) {
    double nearest = entries_.front().temperature_c;
    for (const auto& e : entries_)
      if (std::abs(e.temperature_c - T) < std::abs(nearest - T))
        nearest = e.temperature_c;
    throw Error(ErrorCode::EmptyWindow,
                "all kernel weights vanish at T=" + std::to_string(T) +
                    "; nearest experimental temperature is " +
                    std::to_string(nearest));
  }
  for (double& x : w) x /= total;
  return w;
}

WarpingQuadratic GrowthField::warp_at(double T) const {
  const auto w = blend_weights(T, config_.h_warp);
  double a = 0.0, b = 0.0, t_pup = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    a += w[k] * entries_[k].warp.a();
    b += w[k] * entries_[k].warp.b();
    t_pup += w[k] * entries_[k].warp.t_pup();
  }
  // Rescale so the blended quadratic hits exactly 1 at the blended t_pup.
  const double scale = a * t_pup + b * t_pup * t_pup;
  if (!(scale > 0.0))
    throw Error(ErrorCode::NonMonotoneBlend,
                "blended warp collapses at T=" + std::to_string(T));
  a /= scale;
  b /= scale;
  if (!(a > 0.0) || !(a + 2.0 * b * t_pup > 0.0))
    throw Error(ErrorCode::NonMonotoneBlend,
                "blended warp is not strictly increasing at T=" +
                    std::to_string(T));
  const double alpha = entries_.front().warp.alpha();
  WarpingQuadratic blended(a, b, t_pup, alpha, 0.0);
  return WarpingQuadratic(a, b, t_pup, alpha, blended.inverse(alpha));
}

std::pair<double, double> GrowthField::warp_deriv_coeffs_at(double T) const {
  const auto w = blend_weights(T, config_.h_warp_deriv);
  double a = 0.0, b = 0.0, t_pup = 0.0;
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    a += w[k] * entries_[k].warp.a();
    b += w[k] * entries_[k].warp.b();
    t_pup += w[k] * entries_[k].warp.t_pup();
  }
  const double scale = a * t_pup + b * t_pup * t_pup;
  if (!(scale > 0.0))
    throw Error(ErrorCode::NonMonotoneBlend,
                "blended warp derivative collapses at T=" + std::to_string(T));
  return {a / scale, b / scale};
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

std::vector<double> GrowthField::shape_values_at(double T) const {
  const auto w = blend_weights(T, config_.h_shape);
  std::vector<double> out(shape_grid_size_, 0.0);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (w[k] == 0.0) continue;
    const auto& f = entries_[k].shape.values;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[k] * f[i];
  }
  return out;
}

std::vector<double> GrowthField::shape_derivs_at(double T) const {
  const auto w = blend_weights(T, config_.h_shape_deriv);
  std::vector<double> out(shape_grid_size_, 0.0);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (w[k] == 0.0) continue;
    const auto& f = entries_[k].shape.derivs;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[k] * f[i];
  }
  return out;
}

ConstantTempCurve GrowthField::curve_at(double T) const {
  const double t_lo = temp_min();
  if (T < t_lo) {
    // Convex blend between the coldest curve and the flat hatch-length
    // curve; fully flat at or below the developmental threshold.
    ConstantTempCurve base = curve_at(t_lo);
    const double f = std::clamp(
        (T - config_.dev_threshold_c) / (t_lo - config_.dev_threshold_c), 0.0,
        1.0);
    const double hatch = base.hatch_value();
    std::vector<double> values(base.grid_size());
    std::vector<double> derivs(base.grid_size());
    for (std::size_t i = 0; i < base.grid_size(); ++i) {
      values[i] = hatch + f * (base.values()[i] - hatch);
      derivs[i] = f * base.derivs()[i];
    }
    ConstantTempCurve curve(T, base.t_pup(), std::move(values),
                            std::move(derivs));
    if (base.t_max()) curve.set_t_max(*base.t_max());
    return curve;
  }

  const WarpingQuadratic warp = warp_at(T);
  const auto [da, db] = warp_deriv_coeffs_at(T);
  const std::vector<double> sv = shape_values_at(T);
  const std::vector<double> sd = shape_derivs_at(T);

  const int n = std::max(config_.curve_grid_points, 10);
  std::vector<double> values(static_cast<std::size_t>(n));
  std::vector<double> derivs(static_cast<std::size_t>(n));
  const double t_pup = warp.t_pup();
  const double step = t_pup / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    const double t = step * static_cast<double>(i);
    const double u = std::clamp(warp(t), 0.0, 1.0);
    values[static_cast<std::size_t>(i)] = interp_unit(sv, u);
    derivs[static_cast<std::size_t>(i)] =
        interp_unit(sd, u) * (da + 2.0 * db * t);
  }
  ConstantTempCurve curve(T, t_pup, std::move(values), std::move(derivs));
  curve.set_t_max(warp.t_max());
  return curve;
}

std::shared_ptr<const ConstantTempCurve> GrowthField::curve_at_cached(
    double T) const {
  const long long bucket = llround(T * 10.0);
  {
    std::shared_lock lock(cache_->mutex);
    const auto it = cache_->map.find(bucket);
    if (it != cache_->map.end()) return it->second;
  }
  auto curve = std::make_shared<const ConstantTempCurve>(
      curve_at(0.1 * static_cast<double>(bucket)));
  std::unique_lock lock(cache_->mutex);
  return cache_->map.emplace(bucket, std::move(curve)).first->second;
}

std::string GrowthField::to_json() const {
  json doc;
  doc["format"] = "larvest-growth-field";
  doc["version"] = 1;
  doc["kernel"] = to_string(config_.kernel);
  doc["h_shape"] = config_.h_shape;
  doc["h_warp"] = config_.h_warp;
  doc["h_shape_deriv"] = config_.h_shape_deriv;
  doc["h_warp_deriv"] = config_.h_warp_deriv;
  doc["dev_threshold_c"] = config_.dev_threshold_c;
  doc["curve_grid_points"] = config_.curve_grid_points;
  json entries = json::array();
  for (const auto& e : entries_) {
    json je;
    je["temperature_c"] = e.temperature_c;
    je["warp_a"] = e.warp.a();
    je["warp_b"] = e.warp.b();
    je["t_pup_h"] = e.warp.t_pup();
    je["alpha"] = e.warp.alpha();
    je["t_max_h"] = e.warp.t_max();
    je["shape_values"] = e.shape.values;
    je["shape_derivs"] = e.shape.derivs;
    entries.push_back(std::move(je));
  }
  doc["entries"] = std::move(entries);
  return doc.dump(2);
}

GrowthField GrowthField::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFieldFile, e.what());
  }
  try {
    if (doc.at("format") != "larvest-growth-field")
      throw Error(ErrorCode::BadFieldFile, "not a growth-field document");
    if (doc.at("version") != 1)
      throw Error(ErrorCode::BadFieldFile, "unsupported field version");
    FieldConfig cfg;
    cfg.kernel = kernel_from_string(doc.at("kernel").get<std::string>());
    cfg.h_shape = doc.at("h_shape").get<double>();
    cfg.h_warp = doc.at("h_warp").get<double>();
    cfg.h_shape_deriv = doc.at("h_shape_deriv").get<double>();
    cfg.h_warp_deriv = doc.at("h_warp_deriv").get<double>();
    cfg.dev_threshold_c = doc.at("dev_threshold_c").get<double>();
    cfg.curve_grid_points = doc.at("curve_grid_points").get<int>();
    std::vector<FieldEntry> entries;
    for (const auto& je : doc.at("entries")) {
      WarpingQuadratic warp(je.at("warp_a").get<double>(),
                            je.at("warp_b").get<double>(),
                            je.at("t_pup_h").get<double>(),
                            je.at("alpha").get<double>(),
                            je.at("t_max_h").get<double>());
      GrowthShape shape;
      shape.temperature_c = je.at("temperature_c").get<double>();
      shape.values = je.at("shape_values").get<std::vector<double>>();
      shape.derivs = je.at("shape_derivs").get<std::vector<double>>();
      entries.push_back(FieldEntry{shape.temperature_c, std::move(shape), warp});
    }
    return GrowthField(std::move(entries), cfg);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadFieldFile, e.what());
  }
}

void GrowthField::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::BadFieldFile, "cannot open '" + path + "' for writing");
  out << to_json() << '\n';
}

GrowthField GrowthField::load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::BadFieldFile, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

GrowthField fit_growth_field(const ExperimentalDataset& dataset,
                             const FitOptions& options,
                             FitDiagnostics* diagnostics) {
  dataset.validate();

  struct Registered {
    double temperature_c;
    ConstantTempCurve curve;
    Landmarks landmarks;
  };
  std::vector<Registered> kept;
  std::vector<std::pair<double, std::string>> excluded;

  for (const auto& batch : dataset.batches) {
    const auto summaries = batch_summaries(batch);
    ConstantTempCurve curve = local_linear_fit(summaries, options.smoother,
                                               batch.temperature_c,
                                               batch.last_time());
    try {
      const Landmarks lm = find_landmarks(curve);
      curve.set_t_max(lm.t_max_h);
      kept.push_back(Registered{batch.temperature_c, std::move(curve), lm});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundaryMaximum) throw;
      excluded.emplace_back(batch.temperature_c, e.what());
    }
  }

  if (kept.size() < 2) {
    std::string msg = "fewer than 2 usable temperature batches";
    for (const auto& [temp, reason] : excluded)
      msg += "; excluded T=" + std::to_string(temp) + " (" + reason + ")";
    throw Error(excluded.empty() ? ErrorCode::InvariantViolation
                                 : ErrorCode::BoundaryMaximum,
                msg);
  }

  std::vector<Landmarks> landmarks;
  landmarks.reserve(kept.size());
  for (const auto& r : kept) landmarks.push_back(r.landmarks);
  const double alpha =
      options.alpha > 0.0 ? options.alpha : default_alpha(landmarks);

  double h_temp = options.h_temp;
  if (h_temp <= 0.0) {
    double max_gap = 0.0;
    for (std::size_t k = 1; k < kept.size(); ++k)
      max_gap = std::max(max_gap,
                         kept[k].temperature_c - kept[k - 1].temperature_c);
    h_temp = 2.0 * max_gap;
  }

  std::vector<FieldEntry> entries;
  entries.reserve(kept.size());
  for (const auto& r : kept) {
    const WarpingQuadratic warp =
        WarpingQuadratic::fit(r.landmarks.t_max_h, r.landmarks.t_pup_h, alpha);
    GrowthShape shape =
        compute_shape(r.curve, warp, options.shape_grid_points);
    entries.push_back(FieldEntry{r.temperature_c, std::move(shape), warp});
  }

  FieldConfig cfg;
  cfg.h_shape = cfg.h_warp = cfg.h_shape_deriv = cfg.h_warp_deriv = h_temp;
  cfg.kernel = options.temp_kernel;
  cfg.dev_threshold_c = options.dev_threshold_c;
  cfg.curve_grid_points = options.curve_grid_points;

  if (diagnostics) {
    diagnostics->entries.clear();
    for (const auto& r : kept)
      diagnostics->entries.push_back(FitDiagnostics::Entry{
          r.temperature_c, r.landmarks.t_max_h, r.landmarks.t_pup_h,
          r.curve.bandwidth()});
    diagnostics->excluded = excluded;
    diagnostics->alpha = alpha;
    diagnostics->h_temp = h_temp;
  }

  return GrowthField(std::move(entries), cfg);
}

} // namespace larvest
