#ifndef LARVEST_INFERENCE_HPP
#define LARVEST_INFERENCE_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "larvest/data_model.hpp"
#include "larvest/growth_dynamics.hpp"
#include "larvest/temperature_field.hpp"

namespace larvest {

/// Prior over the hatching time on the relative clock.
struct PriorSpec {
  enum class Kind { Uniform, Gaussian, Exponential };
  Kind kind = Kind::Uniform;
  double p1 = 0.0; // Uniform: lo | Gaussian: mean | Exponential: offset
  double p2 = 0.0; // Uniform: hi | Gaussian: sd   | Exponential: mean

  /// Unnormalized density; posteriors renormalize on the candidate grid.
  double density(double t) const;

  /// Accepts "uniform:lo:hi", "gaussian:mean:sd", "exp:offset:mean".
  static PriorSpec parse(const std::string& text);
  std::string describe() const;
};

struct CriterionPoint {
  double t = 0.0;
  double sse = 0.0;
  bool admissible = false;
  double terminal_length = 0.0; // NaN when the trajectory pupated early
  Phase phase = Phase::Feeding; // phase at collection time
  bool pupated_early = false;   // pupation strictly before t*
};

/// Point estimate with its criterion and likelihood profiles.
struct HatchingEstimate {
  double t_hat_h = 0.0;
  double t_star_h = 0.0;
  double pmi_h = 0.0;
  std::size_t n_obs = 0;
  std::optional<double> sigma2_hat; // undefined for n < 2 or zero spread
  std::vector<CriterionPoint> criterion;
  std::vector<std::pair<double, double>> loglik; // admissible candidates only

  std::optional<std::pair<double, double>> ci;
  double ci_alpha = 0.0;
  bool ci_lo_on_boundary = false;
  bool ci_hi_on_boundary = false;

  std::optional<std::vector<std::pair<double, double>>> posterior;
  std::optional<double> map;
};

/// Uniform candidate grid t_a, t_a + step, ..., clipped to [t_a, t*].
std::vector<double> make_candidate_grid(double t_a, double t_star, double step);

/// Evaluates the least-squares criterion at every candidate hatching time:
/// reconstructs the trajectory from t to t*, records the expected terminal
/// length and sum of squared deviations from the observed lengths, and flags
/// admissibility against the reported developmental stage. Trajectories that
/// pupate strictly before t* leave nothing to measure and are inadmissible
/// for every stage.
std::vector<CriterionPoint> criterion_profile(const GrowthField& field,
                                              const TemperatureProfile& profile,
                                              const CaseObservation& obs,
                                              std::span<const double> candidates,
                                              double dt);

/// Admissible argmin of the criterion (ties resolved toward the earliest
/// time), plug-in variance, and the Gaussian log-likelihood profile.
HatchingEstimate estimate_hatching(std::span<const CriterionPoint> criterion,
                                   const CaseObservation& obs);

/// Likelihood-ratio confidence region on the admissible grid, reported as its
/// connected hull [min CR, max CR]; endpoints touching the admissible
/// boundary are flagged.
void add_likelihood_ci(HatchingEstimate& estimate, double alpha_level);

/// Grid posterior density(t) proportional to exp(loglik) * prior, normalized
/// so sum * grid_step = 1; stores the MAP candidate.
void add_posterior(HatchingEstimate& estimate, const PriorSpec& prior,
                   double grid_step);

/// One observed species with its own developmental data.
struct SpeciesCase {
  const GrowthField* field = nullptr;
  CaseObservation obs;
};

/// Pooled multi-species estimate: per-species SSE scaled by n_j / sigma_j^2
/// and summed; admissible set is the intersection across species.
HatchingEstimate estimate_multispecies(std::span<const SpeciesCase> cases,
                                       const TemperatureProfile& profile,
                                       std::span<const double> candidates,
                                       double dt);

/// Accumulated-degree-hours baseline: latest time t with
/// integral_t^{t*} max(T(s), 0) ds >= adh_required, by backward trapezoidal
/// accumulation on the profile grid.
double adh_baseline(const TemperatureProfile& profile, double adh_required,
                    double t_star);

/// Report serialization (JSON document + plotting CSVs).
std::string estimate_report_json(const HatchingEstimate& estimate);
void write_criterion_csv(std::ostream& out, const HatchingEstimate& estimate);
void write_posterior_csv(std::ostream& out, const HatchingEstimate& estimate);

} // namespace larvest

#endif
