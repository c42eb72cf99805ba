#include "larvest/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "larvest/errors.hpp"
#include "larvest/stats.hpp"

namespace larvest {

using nlohmann::json;

double PriorSpec::density(double t) const {
  switch (kind) {
    case Kind::Uniform:
      return (t >= p1 && t <= p2) ? 1.0 : 0.0;
    case Kind::Gaussian: {
      const double z = (t - p1) / p2;
      return std::exp(-0.5 * z * z);
    }
    case Kind::Exponential: {
      if (t < p1) return 0.0;
      const double scale = p2 - p1;
      return std::exp(-(t - p1) / scale);
    }
  }
  return 0.0;
}

PriorSpec PriorSpec::parse(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw Error(ErrorCode::OutOfRange,
                "prior must be kind:p1:p2, got '" + text + "'");
  const std::string kind = text.substr(0, c1);
  PriorSpec spec;
  try {
    spec.p1 = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    spec.p2 = std::stod(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::OutOfRange, "non-numeric prior parameter in '" + text + "'");
  }
  if (kind == "uniform") {
    spec.kind = Kind::Uniform;
    if (!(spec.p1 < spec.p2))
      throw Error(ErrorCode::OutOfRange, "uniform prior needs lo < hi");
  } else if (kind == "gaussian") {
    spec.kind = Kind::Gaussian;
    if (!(spec.p2 > 0.0))
      throw Error(ErrorCode::OutOfRange, "gaussian prior needs sd > 0");
  } else if (kind == "exp") {
    spec.kind = Kind::Exponential;
    if (!(spec.p2 > spec.p1))
      throw Error(ErrorCode::OutOfRange,
                  "exponential prior needs mean after offset");
  } else {
    throw Error(ErrorCode::OutOfRange, "unknown prior kind '" + kind + "'");
  }
  return spec;
}

std::string PriorSpec::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Uniform: out << "uniform:" << p1 << ":" << p2; break;
    case Kind::Gaussian: out << "gaussian:" << p1 << ":" << p2; break;
    case Kind::Exponential: out << "exp:" << p1 << ":" << p2; break;
  }
  return out.str();
}

std::vector<double> make_candidate_grid(double t_a, double t_star, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::OutOfRange, "step must be positive");
  if (!(t_a < t_star)) throw Error(ErrorCode::BadTimeOrder, "t_a must precede t*");
  std::vector<double> grid;
  for (double t = t_a; t <= t_star + 1e-9 * step; t += step)
    grid.push_back(std::min(t, t_star));
  return grid;
}

std::vector<CriterionPoint> criterion_profile(const GrowthField& field,
                                              const TemperatureProfile& profile,
                                              const CaseObservation& obs,
                                              std::span<const double> candidates,
                                              double dt) {
  validate_case(obs, profile);
  std::vector<CriterionPoint> out;
  out.reserve(candidates.size());
  for (double t : candidates) {
    if (t < obs.t_a_h - 1e-9 || t > obs.t_star_h + 1e-9)
      throw Error(ErrorCode::OutOfRange,
                  "candidate " + std::to_string(t) + " outside [t_a, t*]");
    const VaryingTempCurve traj =
        reconstruct_growth(field, profile, t, obs.t_star_h, dt);
    CriterionPoint point;
    point.t = t;
    point.phase = traj.final_phase();
    point.pupated_early =
        traj.pupated() && traj.final_time() < obs.t_star_h - 1e-9;
    if (point.pupated_early) {
      point.terminal_length = std::numeric_limits<double>::quiet_NaN();
      point.sse = std::numeric_limits<double>::infinity();
      point.admissible = false;
    } else {
      point.terminal_length = traj.final_length();
      double sse = 0.0;
      for (double y : obs.lengths_mm) {
        const double r = point.terminal_length - y;
        sse += r * r;
      }
      point.sse = sse;
      switch (obs.stage) {
        case Stage::Feeding:
          point.admissible = point.phase == Phase::Feeding;
          break;
        case Stage::PostFeeding:
          point.admissible = point.phase == Phase::PostFeeding ||
                             point.phase == Phase::Pupated;
          break;
        case Stage::Unknown:
          point.admissible = true;
          break;
      }
    }
    out.push_back(point);
  }
  return out;
}

namespace {

std::string admissibility_digest(std::span<const CriterionPoint> criterion) {
  std::size_t feeding = 0, post = 0, pupated = 0;
  for (const auto& p : criterion) {
    if (p.pupated_early || p.phase == Phase::Pupated)
      ++pupated;
    else if (p.phase == Phase::Feeding)
      ++feeding;
    else
      ++post;
  }
  std::ostringstream out;
  out << criterion.size() << " candidates: " << feeding << " feeding, " << post
      << " post-feeding, " << pupated << " pupated at t*";
  return out.str();
}

} // namespace

HatchingEstimate estimate_hatching(std::span<const CriterionPoint> criterion,
                                   const CaseObservation& obs) {
  const CriterionPoint* best = nullptr;
  for (const auto& p : criterion) {
    if (!p.admissible) continue;
    if (!best || p.sse < best->sse) best = &p; // ties keep the earliest
  }
  if (!best)
    throw Error(ErrorCode::NoAdmissibleCandidate,
                "no candidate matches stage '" + std::string(to_string(obs.stage)) +
                    "' (" + admissibility_digest(criterion) + ")");

  HatchingEstimate est;
  est.t_hat_h = best->t;
  est.t_star_h = obs.t_star_h;
  est.pmi_h = obs.t_star_h - best->t;
  est.n_obs = obs.n_obs();
  est.criterion.assign(criterion.begin(), criterion.end());

  if (obs.n_obs() >= 2) {
    const double s2 = sample_variance(obs.lengths_mm);
    if (s2 > 0.0) est.sigma2_hat = s2;
  }
  if (est.sigma2_hat) {
    const double s2 = *est.sigma2_hat;
    const double n = static_cast<double>(obs.n_obs());
    const double norm = -0.5 * n * std::log(2.0 * M_PI * s2);
    for (const auto& p : criterion)
      if (p.admissible)
        est.loglik.emplace_back(p.t, norm - p.sse / (2.0 * s2));
  }
  return est;
}

void add_likelihood_ci(HatchingEstimate& estimate, double alpha_level) {
  if (!(alpha_level > 0.0 && alpha_level < 1.0))
    throw Error(ErrorCode::OutOfRange, "alpha level must lie in (0,1)");
  if (estimate.loglik.empty())
    throw Error(ErrorCode::VarianceUndefined,
                "confidence interval needs at least 2 distinct observed "
                "lengths for the plug-in variance");
  double l_hat = -std::numeric_limits<double>::infinity();
  for (const auto& [t, l] : estimate.loglik) l_hat = std::max(l_hat, l);
  const double threshold =
      l_hat - 0.5 * chi_square_quantile_1df(1.0 - alpha_level);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [t, l] : estimate.loglik)
    if (l > threshold) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  if (!std::isfinite(lo)) { // degenerate region collapses to the estimate
    lo = hi = estimate.t_hat_h;
  }
  estimate.ci = std::make_pair(lo, hi);
  estimate.ci_alpha = alpha_level;
  estimate.ci_lo_on_boundary = lo == estimate.loglik.front().first;
  estimate.ci_hi_on_boundary = hi == estimate.loglik.back().first;
}

void add_posterior(HatchingEstimate& estimate, const PriorSpec& prior,
                   double grid_step) {
  if (estimate.loglik.empty())
    throw Error(ErrorCode::VarianceUndefined,
                "posterior needs at least 2 distinct observed lengths for "
                "the plug-in variance");
  double l_max = -std::numeric_limits<double>::infinity();
  for (const auto& [t, l] : estimate.loglik) l_max = std::max(l_max, l);

  std::vector<std::pair<double, double>> density;
  density.reserve(estimate.loglik.size());
  double total = 0.0;
  for (const auto& [t, l] : estimate.loglik) {
    const double d = std::exp(l - l_max) * prior.density(t);
    density.emplace_back(t, d);
    total += d;
  }
  if (!(total > 0.0))
    throw Error(ErrorCode::ZeroPosteriorMass,
                "prior " + prior.describe() +
                    " puts no mass on the admissible candidates");
  const double norm = total * grid_step;
  double best_d = -1.0;
  double best_t = density.front().first;
  for (auto& [t, d] : density) {
    d /= norm;
    if (d > best_d) {
      best_d = d;
      best_t = t;
    }
  }
  estimate.posterior = std::move(density);
  estimate.map = best_t;
}

HatchingEstimate estimate_multispecies(std::span<const SpeciesCase> cases,
                                       const TemperatureProfile& profile,
                                       std::span<const double> candidates,
                                       double dt) {
  if (cases.empty())
    throw Error(ErrorCode::OutOfRange, "need at least one species");

  std::vector<std::vector<CriterionPoint>> per_species;
  std::vector<double> weights; // n_j / sigma_j^2
  double t_star = cases.front().obs.t_star_h;
  std::size_t total_obs = 0;
  for (const auto& sc : cases) {
    if (sc.obs.t_star_h != t_star)
      throw Error(ErrorCode::BadTimeOrder,
                  "species cases must share the collection time");
    if (sc.obs.n_obs() < 2)
      throw Error(ErrorCode::VarianceUndefined,
                  "species '" + sc.obs.species_id +
                      "' needs at least 2 lengths for its variance weight");
    const double s2 = sample_variance(sc.obs.lengths_mm);
    if (!(s2 > 0.0))
      throw Error(ErrorCode::VarianceUndefined,
                  "species '" + sc.obs.species_id + "' has zero length spread");
    weights.push_back(static_cast<double>(sc.obs.n_obs()) / s2);
    total_obs += sc.obs.n_obs();
    per_species.push_back(
        criterion_profile(*sc.field, profile, sc.obs, candidates, dt));
  }

  std::vector<CriterionPoint> pooled(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CriterionPoint p;
    p.t = candidates[i];
    p.admissible = true;
    p.sse = 0.0;
    p.terminal_length = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < per_species.size(); ++j) {
      const auto& q = per_species[j][i];
      p.admissible = p.admissible && q.admissible;
      p.pupated_early = p.pupated_early || q.pupated_early;
      p.phase = q.phase;
      p.sse += std::isfinite(q.sse)
                   ? weights[j] * q.sse
                   : std::numeric_limits<double>::infinity();
    }
    pooled[i] = p;
  }

  CaseObservation pooled_obs = cases.front().obs;
  HatchingEstimate est = estimate_hatching(pooled, pooled_obs);
  est.n_obs = total_obs;
  est.sigma2_hat.reset(); // no single pooled variance
  est.loglik.clear();
  // Joint Gaussian log-likelihood over species (reference profile only; the
  // point estimate above comes from the pooled criterion).
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!pooled[i].admissible) continue;
    double l = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < per_species.size(); ++j) {
      const auto& q = per_species[j][i];
      if (!std::isfinite(q.sse)) { ok = false; break; }
      const double n = static_cast<double>(cases[j].obs.n_obs());
      const double s2 = sample_variance(cases[j].obs.lengths_mm);
      l += -0.5 * n * std::log(2.0 * M_PI * s2) - q.sse / (2.0 * s2);
    }
    if (ok) est.loglik.emplace_back(candidates[i], l);
  }
  return est;
}

namespace {

// Integral of max(T, 0) over one linearly interpolated segment.
double positive_segment_integral(double ta, double Ta, double tb, double Tb) {
  if (tb <= ta) return 0.0;
  if (Ta <= 0.0 && Tb <= 0.0) return 0.0;
  if (Ta >= 0.0 && Tb >= 0.0) return 0.5 * (Ta + Tb) * (tb - ta);
  const double root = ta + (tb - ta) * (0.0 - Ta) / (Tb - Ta);
  if (Ta > 0.0) return 0.5 * Ta * (root - ta);
  return 0.5 * Tb * (tb - root);
}

} // namespace

double adh_baseline(const TemperatureProfile& profile, double adh_required,
                    double t_star) {
  if (!(adh_required > 0.0))
    throw Error(ErrorCode::OutOfRange, "ADH requirement must be positive");
  if (t_star < profile.span_begin() || t_star > profile.span_end())
    throw Error(ErrorCode::ProfileCoverageGap, "t* outside the profile span");

  const auto& ts = profile.times();
  const auto& vs = profile.temps();

  // Accumulate backward from t_star segment by segment.
  double acc = 0.0;
  double hi_t = t_star;
  double hi_T = profile.at(t_star);
  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(
      std::upper_bound(ts.begin(), ts.end(), t_star) - ts.begin()) - 1;
  for (; i >= 0; --i) {
    double lo_t = ts[static_cast<std::size_t>(i)];
    double lo_T = vs[static_cast<std::size_t>(i)];
    if (lo_t >= hi_t) continue;
    const double seg = positive_segment_integral(lo_t, lo_T, hi_t, hi_T);
    if (acc + seg >= adh_required) {
      // Bisect the crossing time within [lo_t, hi_t].
      double a = lo_t, b = hi_t;
      for (int iter = 0; iter < 200 && b - a > 1e-12 * std::max(1.0, b - a + 1.0); ++iter) {
        const double mid = 0.5 * (a + b);
        const double Tm = lo_T + (hi_T - lo_T) * (mid - lo_t) / (hi_t - lo_t);
        const double part = positive_segment_integral(mid, Tm, hi_t, hi_T);
        if (acc + part >= adh_required)
          a = mid;
        else
          b = mid;
      }
      return 0.5 * (a + b);
    }
    acc += seg;
    hi_t = lo_t;
    hi_T = lo_T;
  }
  throw Error(ErrorCode::InsufficientSpan,
              "profile accumulates only " + std::to_string(acc) +
                  " degree-hours before t*, need " +
                  std::to_string(adh_required));
}

std::string estimate_report_json(const HatchingEstimate& estimate) {
  json doc;
  doc["format"] = "larvest-estimate";
  doc["version"] = 1;
  doc["t_hat_h"] = estimate.t_hat_h;
  doc["t_star_h"] = estimate.t_star_h;
  doc["pmi_h"] = estimate.pmi_h;
  doc["n_obs"] = estimate.n_obs;
  if (estimate.sigma2_hat)
    doc["sigma2_hat"] = *estimate.sigma2_hat;
  else
    doc["sigma2_hat"] = nullptr;

  json criterion = json::array();
  for (const auto& p : estimate.criterion) {
    json jp;
    jp["t"] = p.t;
    jp["sse"] = std::isfinite(p.sse) ? json(p.sse) : json();
    jp["admissible"] = p.admissible;
    jp["terminal_length"] =
        std::isfinite(p.terminal_length) ? json(p.terminal_length) : json();
    jp["phase"] = to_string(p.phase);
    criterion.push_back(std::move(jp));
  }
  doc["criterion"] = std::move(criterion);

  json loglik = json::array();
  for (const auto& [t, l] : estimate.loglik)
    loglik.push_back(json{{"t", t}, {"loglik", l}});
  doc["loglik"] = std::move(loglik);

  if (estimate.ci) {
    doc["ci"] = json{{"lo", estimate.ci->first},
                     {"hi", estimate.ci->second},
                     {"alpha", estimate.ci_alpha},
                     {"lo_on_boundary", estimate.ci_lo_on_boundary},
                     {"hi_on_boundary", estimate.ci_hi_on_boundary}};
  }
  if (estimate.posterior) {
    json post = json::array();
    for (const auto& [t, d] : *estimate.posterior)
      post.push_back(json{{"t", t}, {"density", d}});
    doc["posterior"] = std::move(post);
    doc["map"] = *estimate.map;
  }
  return doc.dump(2);
}

void write_criterion_csv(std::ostream& out, const HatchingEstimate& estimate) {
  out << "candidate_t,sse,admissible\n";
  char buf[64];
  for (const auto& p : estimate.criterion) {
    std::snprintf(buf, sizeof(buf), "%.17g", p.t);
    out << buf << ',';
    if (std::isfinite(p.sse)) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.sse);
      out << buf;
    } else {
      out << "inf";
    }
    out << ',' << (p.admissible ? 1 : 0) << '\n';
  }
}

void write_posterior_csv(std::ostream& out, const HatchingEstimate& estimate) {
  out << "t,posterior_density\n";
  if (!estimate.posterior) return;
  char buf[64];
  for (const auto& [t, d] : *estimate.posterior) {
    std::snprintf(buf, sizeof(buf), "%.17g", t);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    out << buf << '\n';
  }
}

} // namespace larvest
