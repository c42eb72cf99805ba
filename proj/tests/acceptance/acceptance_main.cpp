// Acceptance suite: runs every release criterion end to end and prints one
// pass/fail line each. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "larvest/growth_dynamics.hpp"
#include "larvest/inference.hpp"
#include "larvest/kernels.hpp"
#include "larvest/local_smoother.hpp"
#include "larvest/registration.hpp"
#include "larvest/rng.hpp"
#include "larvest/sim_harness.hpp"
#include "larvest/stats.hpp"
#include "larvest/synth_model.hpp"
#include "larvest/temperature_field.hpp"

using namespace larvest;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

SynthFamily random_family(const CounterRng& rng) {
  SynthFamily family;
  family.rate_coeff = 0.004 + 0.005 * rng.uniform01(0);
  family.base_temp_c = 2.0 + 3.0 * rng.uniform01(1);
  family.hatch_len_mm = 2.0 + 2.0 * rng.uniform01(2);
  family.max_len_mm = 9.0 + 5.0 * rng.uniform01(3);
  family.shrink_frac = 0.8 + 0.1 * rng.uniform01(4);
  family.noise_sd_mm = 0.0;
  return family;
}

TemperatureProfile constant_profile(double lo, double hi, double temp) {
  std::vector<double> hours, temps;
  for (double t = lo; t <= hi; t += 1.0) {
    hours.push_back(t);
    temps.push_back(temp);
  }
  return TemperatureProfile(std::move(hours), std::move(temps));
}

// --- A1: noiseless recovery over random fields -----------------------------

Outcome criterion_noiseless_recovery() {
  const auto start = std::chrono::steady_clock::now();
  const CounterRng rng(1001);
  int exact = 0;
  const int trials = 50;
  for (int i = 0; i < trials; ++i) {
    const CounterRng trial = rng.stream(static_cast<std::uint64_t>(i));
    const SynthFamily family = random_family(trial);
    const std::vector<double> temps = {6, 9, 12, 15, 18, 21, 24, 27, 30};
    const auto ds = synth_dataset(family, temps, 25, 1,
                                  1000 + static_cast<std::uint64_t>(i));
    const GrowthField field = fit_growth_field(ds, FitOptions{});

    const double T = 8.0 + 20.0 * trial.uniform01(10);
    const double x = T - family.base_temp_c;
    // Plant on the strictly rising linear segment so the criterion has a
    // unique zero.
    const double pmi =
        std::max(5.0, std::floor(0.4 * family.s_ease_start() / x));
    const double planted = -pmi;
    const double t_a = planted - 40.0;
    const auto profile = constant_profile(t_a - 2.0, 0.0, T);

    const double truth =
        reconstruct_growth(field, profile, planted, 0.0, 1.0).final_length();
    CaseObservation obs;
    obs.lengths_mm = std::vector<double>(5, truth);
    obs.t_star_h = 0.0;
    obs.t_a_h = t_a;
    obs.stage = Stage::Unknown;
    const auto grid = make_candidate_grid(t_a, 0.0, 1.0);
    const auto criterion = criterion_profile(field, profile, obs, grid, 1.0);
    const auto est = estimate_hatching(criterion, obs);
    if (est.t_hat_h == planted) ++exact;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << exact << "/" << trials << " exact recoveries in " << elapsed
         << " s";
  return Outcome{exact == trials && elapsed < 10.0, detail.str()};
}

// --- A2: study 1 at paper scale --------------------------------------------

Outcome criterion_study1() {
  const auto start = std::chrono::steady_clock::now();
  const GrowthField field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 1000;
  cfg.n_lengths = 20;
  cfg.sigma_T = {0.1, 0.25, 0.75, 1.0};
  cfg.true_hatch_h = -100.0;
  cfg.t_a_h = -200.0;
  cfg.seed = 20240;
  const auto result = run_const_temp_noise(cfg, field);
  const double elapsed = seconds_since(start);

  bool pass = elapsed < 300.0;
  std::ostringstream detail;
  for (std::size_t c = 0; c < result.cells.size(); ++c) {
    const auto& cell = result.cells[c];
    if (c > 0 && cell.sd < result.cells[c - 1].sd - 1e-12) pass = false;
    if (!(std::abs(cell.mean + 100.0) <= 2.0)) pass = false;
    if (cell.failures > 0) pass = false;
    detail << "sigma=" << cell.param << ": mean=" << cell.mean
           << ", sd=" << cell.sd << "; ";
  }
  detail << elapsed << " s";
  return Outcome{pass, detail.str()};
}

// --- A3: study 2 at paper scale --------------------------------------------

Outcome criterion_study2() {
  const auto start = std::chrono::steady_clock::now();
  const GrowthField field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 1000;
  cfg.n_lengths = 20;
  cfg.rho_T = {0.9, 0.7};
  cfg.true_hatch_h = -45.0;
  cfg.t_a_h = -150.0;
  cfg.seed = 20241;
  const auto result = run_station_correlation(cfg, field);
  const double elapsed = seconds_since(start);

  const auto& strong = result.cells[0];
  const auto& weak = result.cells[1];
  const bool pass = weak.sd >= strong.sd &&
                    std::abs(strong.mean + 45.0) <= 3.0 &&
                    std::abs(weak.mean + 45.0) <= 3.0 &&
                    strong.failures == 0 && weak.failures == 0 &&
                    elapsed < 300.0;
  std::ostringstream detail;
  detail << "rho=0.9: mean=" << strong.mean << ", sd=" << strong.sd
         << "; rho=0.7: mean=" << weak.mean << ", sd=" << weak.sd << "; "
         << elapsed << " s";
  return Outcome{pass, detail.str()};
}

// --- A4: field recovery at a held-out temperature --------------------------

Outcome criterion_field_recovery() {
  SynthFamily family = canonical_family();
  family.noise_sd_mm = 0.2;
  const std::vector<double> temps = {14, 16, 18, 20, 22, 24, 26, 28, 30};
  const auto ds = synth_dataset(family, temps, 25, 10, 77);
  const GrowthField field = fit_growth_field(ds, FitOptions{});

  const double held_out = 21.0; // midpoint between two design temperatures
  const auto estimated = field.curve_at(held_out);
  const auto truth = synth_truth_curve(family, held_out, 4096);
  const double horizon = std::min(estimated.t_pup(), truth.t_pup());
  double sup = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double t = horizon * i / 2000.0;
    sup = std::max(sup, std::abs(estimated.value_at(t) - truth.value_at(t)));
  }
  const double budget = 0.05 * family.max_len_mm;
  std::ostringstream detail;
  detail << "sup error " << sup << " mm vs budget " << budget << " mm at T="
         << held_out;
  return Outcome{sup <= budget, detail.str()};
}

// --- A5: first-order Euler convergence -------------------------------------

Outcome criterion_euler_convergence() {
  const GrowthField field = canonical_study_field();
  bool pass = true;
  std::ostringstream detail;
  for (double T : {14.0, 22.0}) {
    const auto curve = field.curve_at(T);
    const double span = 0.83 * *curve.t_max(); // curved rise, no peak crossing
    const auto profile = constant_profile(-span - 2.0, 0.0, T);
    auto final_at = [&](double dt) {
      return reconstruct_growth(field, profile, -span, 0.0, dt).final_length();
    };
    const double L1 = final_at(1.0);
    const double L2 = final_at(0.5);
    const double L3 = final_at(0.25);
    const double L4 = final_at(0.125);
    const double d1 = std::abs(L1 - L2);
    const double d2 = std::abs(L2 - L3);
    const double d3 = std::abs(L3 - L4);
    const double r1 = d1 / d2;
    const double r2 = d2 / d3;
    detail << "T=" << T << ": ratios " << r1 << ", " << r2 << "; ";
    if (!(r1 >= 1.7 && r1 <= 2.3 && r2 >= 1.7 && r2 <= 2.3)) pass = false;
  }
  return Outcome{pass, detail.str()};
}

// --- A6: affine exactness of the smoother ----------------------------------

Outcome criterion_smoother_exactness() {
  const CounterRng rng(606);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const CounterRng trial = rng.stream(static_cast<std::uint64_t>(i));
    const double a = -5.0 + 10.0 * trial.uniform01(0);
    const double b = -2.0 + 4.0 * trial.uniform01(1);
    const Kernel kernel =
        trial.uniform01(2) < 0.5 ? Kernel::Epanechnikov : Kernel::Gaussian;
    const int n = 15 + static_cast<int>(30.0 * trial.uniform01(3));
    const double t_end = 5.0 + 20.0 * trial.uniform01(4);
    const double gap = t_end / (n - 1);
    const double h = (1.5 + 3.0 * trial.uniform01(5)) * gap;

    std::vector<SummaryPoint> pts;
    for (int j = 0; j < n; ++j) {
      const double t = gap * j;
      pts.push_back(SummaryPoint{t, a + b * t, 1.0});
    }
    SmootherConfig cfg;
    cfg.kernel = kernel;
    cfg.bandwidth_h = h;
    cfg.grid_points = 128;
    const auto curve = local_linear_fit(pts, cfg, 15.0, t_end);
    for (std::size_t g = 0; g < curve.grid_size(); ++g) {
      const double t = curve.grid_time(g);
      worst = std::max(worst, std::abs(curve.values()[g] - (a + b * t)));
      worst = std::max(worst, std::abs(curve.derivs()[g] - b));
    }
  }
  std::ostringstream detail;
  detail << "max affine reproduction error " << worst;
  return Outcome{worst < 1e-10, detail.str()};
}

// --- A7: registration identity and peak alignment --------------------------

Outcome criterion_registration_identity() {
  const CounterRng rng(707);
  double worst_identity = 0.0;
  double worst_alignment = 0.0;
  const FitOptions defaults;
  const int shape_points = defaults.shape_grid_points;
  for (int i = 0; i < 20; ++i) {
    const CounterRng trial = rng.stream(static_cast<std::uint64_t>(i));
    const SynthFamily family = random_family(trial);
    const std::vector<double> temps = {6, 9, 12, 15, 18, 21, 24, 27, 30};
    const auto ds = synth_dataset(family, temps, 25, 1,
                                  7000 + static_cast<std::uint64_t>(i));

    std::vector<Landmarks> landmarks;
    std::vector<ConstantTempCurve> curves;
    for (const auto& batch : ds.batches) {
      curves.push_back(local_linear_fit(batch_summaries(batch),
                                        defaults.smoother, batch.temperature_c,
                                        batch.last_time()));
      landmarks.push_back(find_landmarks(curves.back()));
    }
    const double alpha = default_alpha(landmarks);
    for (std::size_t k = 0; k < curves.size(); ++k) {
      const auto warp = WarpingQuadratic::fit(landmarks[k].t_max_h,
                                              landmarks[k].t_pup_h, alpha);
      const auto shape = compute_shape(curves[k], warp, shape_points);
      for (std::size_t g = 0; g < curves[k].grid_size(); ++g) {
        const double t = curves[k].grid_time(g);
        worst_identity = std::max(
            worst_identity, std::abs(shape.at(warp(t)) - curves[k].values()[g]));
      }
      std::size_t argmax = 0;
      for (std::size_t u = 1; u < shape.values.size(); ++u)
        if (shape.values[u] > shape.values[argmax]) argmax = u;
      const double u_peak =
          static_cast<double>(argmax) / static_cast<double>(shape.values.size() - 1);
      worst_alignment =
          std::max(worst_alignment, std::abs(u_peak - alpha) / shape.grid_step());
    }
  }
  std::ostringstream detail;
  detail << "max |S(w(t)) - L(t)| = " << worst_identity
         << ", peak offset = " << worst_alignment << " grid steps";
  return Outcome{worst_identity <= 1e-6 && worst_alignment <= 1.0, detail.str()};
}

// --- A8: CI calibration ------------------------------------------------------

Outcome criterion_ci_calibration() {
  const GrowthField field = canonical_study_field();
  const auto profile = constant_profile(-202.0, 0.0, 10.0);
  const double planted = -100.0;
  const double truth =
      reconstruct_growth(field, profile, planted, 0.0, 1.0).final_length();
  const auto grid = make_candidate_grid(-200.0, 0.0, 1.0);

  const CounterRng rng(808);
  const int replicates = 500;
  const double sigma = 0.5;
  int covered = 0;
  for (int r = 0; r < replicates; ++r) {
    const CounterRng rep = rng.stream(static_cast<std::uint64_t>(r));
    CaseObservation obs;
    obs.t_star_h = 0.0;
    obs.t_a_h = -200.0;
    obs.stage = Stage::Unknown;
    for (int i = 0; i < 20; ++i)
      obs.lengths_mm.push_back(truth +
                               sigma * rep.normal(static_cast<std::uint64_t>(i)));
    const auto criterion = criterion_profile(field, profile, obs, grid, 1.0);
    auto est = estimate_hatching(criterion, obs);
    add_likelihood_ci(est, 0.05);
    if (est.ci->first <= planted && planted <= est.ci->second) ++covered;
  }
  const double coverage = static_cast<double>(covered) / replicates;
  std::ostringstream detail;
  detail << "95% CI covered the planted time in " << coverage * 100.0
         << "% of " << replicates << " replicates";
  return Outcome{coverage >= 0.90, detail.str()};
}

// --- A9: error trend in the replicate count --------------------------------

Outcome criterion_replicate_trend() {
  SynthFamily family = canonical_family();
  family.noise_sd_mm = 1.0;
  const std::vector<double> temps = {14, 16, 18, 20, 22, 24, 26, 28, 30};
  const double held_out = 21.0;
  const auto truth = synth_truth_curve(family, held_out, 4096);

  std::vector<double> mean_errors;
  std::uint64_t seed = 9000;
  for (int n : {5, 10, 20, 40}) {
    double total = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
      const auto ds = synth_dataset(family, temps, 25, n, seed++);
      const GrowthField field = fit_growth_field(ds, FitOptions{});
      const auto estimated = field.curve_at(held_out);
      const double horizon = std::min(estimated.t_pup(), truth.t_pup());
      double sup = 0.0;
      for (int i = 0; i <= 500; ++i) {
        const double t = horizon * i / 500.0;
        sup = std::max(sup, std::abs(estimated.value_at(t) - truth.value_at(t)));
      }
      total += sup;
    }
    mean_errors.push_back(total / seeds);
  }
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < mean_errors.size(); ++i) {
    if (i > 0 && mean_errors[i] > mean_errors[i - 1]) pass = false;
    detail << "N=" << (5 << i) << ": " << mean_errors[i] << " mm; ";
  }
  return Outcome{pass, detail.str()};
}

} // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> criteria = {
      {"A1 noiseless recovery over 50 random fields", criterion_noiseless_recovery},
      {"A2 constant-temperature noise study (1000 x 20)", criterion_study1},
      {"A3 station-correlation study (1000 x 20)", criterion_study2},
      {"A4 field recovery at a held-out temperature", criterion_field_recovery},
      {"A5 first-order Euler convergence", criterion_euler_convergence},
      {"A6 smoother affine exactness (100 random cases)", criterion_smoother_exactness},
      {"A7 registration identity and peak alignment", criterion_registration_identity},
      {"A8 likelihood-ratio CI calibration", criterion_ci_calibration},
      {"A9 sup-error trend in replicate count", criterion_replicate_trend},
  };

  int failures = 0;
  for (const auto& entry : criteria) {
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome = Outcome{false, std::string("exception: ") + e.what()};
    }
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << entry.name << ": "
              << outcome.detail << "\n";
    if (!outcome.pass) ++failures;
  }
  std::cout << "[SKIP] A10 real case studies: datasets unpublished; "
               "reference values are documented in the README only\n";
  return failures;
}
