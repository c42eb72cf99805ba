#include <doctest.h>

#include <cmath>
#include <vector>

#include "larvest/errors.hpp"
#include "larvest/local_smoother.hpp"
#include "larvest/rng.hpp"

using namespace larvest;

namespace {

// Independent weighted-least-squares oracle: assembles the 2x2 normal
// equations from the design matrix at one eval point and solves by Cramer's
// rule. Deliberately a different algebraic route than the moment-sum
// implementation.
LocalFitPoint wls_oracle(const std::vector<SummaryPoint>& pts, Kernel kernel,
                         double h, double t) {
  double m00 = 0, m01 = 0, m11 = 0, r0 = 0, r1 = 0;
  for (const auto& p : pts) {
    const double w = p.weight * kernel_value(kernel, (p.time_h - t) / h);
    const double x = p.time_h - t;
    m00 += w;
    m01 += w * x;
    m11 += w * x * x;
    r0 += w * p.mean_length;
    r1 += w * x * p.mean_length;
  }
  const double det = m00 * m11 - m01 * m01;
  return LocalFitPoint{(m11 * r0 - m01 * r1) / det, (m00 * r1 - m01 * r0) / det};
}

std::vector<SummaryPoint> uniform_design(int n, double lo, double hi,
                                         const std::vector<double>& ys) {
  std::vector<SummaryPoint> pts;
  for (int j = 0; j < n; ++j) {
    const double t = lo + (hi - lo) * j / double(n - 1);
    pts.push_back(SummaryPoint{t, ys[static_cast<std::size_t>(j)], 1.0});
  }
  return pts;
}

} // namespace

TEST_CASE("batch summaries: means and N_kj/n_k weights") {
  TemperatureBatch batch;
  batch.temperature_c = 15.0;
  batch.observations = {TimePoint{0.0, {2.0, 4.0}},
                        TimePoint{24.0, {5.0, 5.0, 6.0, 4.0}}};
  const auto s = batch_summaries(batch);
  REQUIRE(s.size() == 2);
  CHECK(s[0].mean_length == doctest::Approx(3.0));
  CHECK(s[1].mean_length == doctest::Approx(5.0));
  CHECK(s[0].weight == doctest::Approx(1.0)); // 2 replicates / 2 time points
  CHECK(s[1].weight == doctest::Approx(2.0));
  double total = 0.0;
  for (const auto& p : s) total += p.weight;
  CHECK(total == doctest::Approx(6.0 / 2.0));

  TemperatureBatch single;
  single.temperature_c = 10.0;
  single.observations = {TimePoint{0.0, {1.0, 2.0, 3.0}}};
  const auto s1 = batch_summaries(single);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].weight == doctest::Approx(3.0));
}

TEST_CASE("constant responses reproduce exactly") {
  std::vector<double> ys(21, 5.0);
  const auto pts = uniform_design(21, 0.0, 10.0, ys);
  const auto curve = local_linear_fit(pts, SmootherConfig{}, 15.0, 10.0);
  for (std::size_t i = 0; i < curve.grid_size(); ++i) {
    CHECK(curve.values()[i] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(curve.derivs()[i]) < 1e-10);
  }
}

TEST_CASE("affine responses reproduce value and derivative to 1e-10") {
  for (Kernel kernel : {Kernel::Epanechnikov, Kernel::Gaussian}) {
    for (double h : {1.5, 3.0, 20.0}) {
      std::vector<double> ys;
      for (int j = 0; j < 25; ++j) ys.push_back(2.0 * (j * 0.5) + 1.0);
      const auto pts = uniform_design(25, 0.0, 12.0, ys);
      SmootherConfig cfg;
      cfg.kernel = kernel;
      cfg.bandwidth_h = h;
      const auto curve = local_linear_fit(pts, cfg, 15.0, 12.0);
      for (std::size_t i = 0; i < curve.grid_size(); ++i) {
        const double t = curve.grid_time(i);
        CHECK(std::abs(curve.values()[i] - (2.0 * t + 1.0)) < 1e-10);
        CHECK(std::abs(curve.derivs()[i] - 2.0) < 1e-10);
      }
    }
  }
}

TEST_CASE("quadratic truth against the WLS oracle") {
  std::vector<double> ys;
  const int n = 200;
  for (int j = 0; j < n; ++j) {
    const double t = j / double(n - 1);
    ys.push_back(t * t);
  }
  const auto pts = uniform_design(n, 0.0, 1.0, ys);
  SmootherConfig cfg;
  cfg.kernel = Kernel::Epanechnikov;
  cfg.bandwidth_h = 0.2;
  const auto curve = local_linear_fit(pts, cfg, 15.0, 1.0);

  double sup_val_impl = 0, sup_der_impl = 0, sup_val_oracle = 0, sup_der_oracle = 0;
  for (std::size_t i = 0; i < curve.grid_size(); ++i) {
    const double t = curve.grid_time(i);
    const auto oracle = wls_oracle(pts, cfg.kernel, cfg.bandwidth_h, t);
    CHECK(std::abs(curve.values()[i] - oracle.value) < 1e-9);
    CHECK(std::abs(curve.derivs()[i] - oracle.deriv) < 1e-9);
    sup_val_impl = std::max(sup_val_impl, std::abs(curve.values()[i] - t * t));
    sup_der_impl = std::max(sup_der_impl, std::abs(curve.derivs()[i] - 2.0 * t));
    sup_val_oracle = std::max(sup_val_oracle, std::abs(oracle.value - t * t));
    sup_der_oracle = std::max(sup_der_oracle, std::abs(oracle.deriv - 2.0 * t));
  }
  // Thresholds come from the oracle's own error, not hand-tuned constants.
  CHECK(sup_val_impl <= sup_val_oracle + 1e-9);
  CHECK(sup_der_impl <= sup_der_oracle + 1e-9);
}

TEST_CASE("linearity in the responses") {
  const int n = 40;
  std::vector<double> ys;
  for (int j = 0; j < n; ++j) ys.push_back(std::sin(0.7 * j));
  const auto pts = uniform_design(n, 0.0, 8.0, ys);
  SmootherConfig cfg;
  cfg.bandwidth_h = 1.0;

  std::vector<double> ys2;
  for (double y : ys) ys2.push_back(3.0 * y + 7.0);
  const auto pts2 = uniform_design(n, 0.0, 8.0, ys2);

  const auto base = local_linear_fit(pts, cfg, 15.0, 8.0);
  const auto scaled = local_linear_fit(pts2, cfg, 15.0, 8.0);
  for (std::size_t i = 0; i < base.grid_size(); ++i) {
    CHECK(std::abs(scaled.values()[i] - (3.0 * base.values()[i] + 7.0)) < 1e-10);
    CHECK(std::abs(scaled.derivs()[i] - 3.0 * base.derivs()[i]) < 1e-10);
  }
}

TEST_CASE("reflection symmetry") {
  const int n = 31;
  std::vector<double> ys;
  for (int j = 0; j < n; ++j) ys.push_back(0.3 * j * j - j);
  const auto pts = uniform_design(n, 0.0, 6.0, ys);

  std::vector<double> ys_ref(ys.rbegin(), ys.rend());
  const auto pts_ref = uniform_design(n, 0.0, 6.0, ys_ref);

  SmootherConfig cfg;
  cfg.bandwidth_h = 0.8;
  const auto fit = local_linear_fit(pts, cfg, 15.0, 6.0);
  const auto fit_ref = local_linear_fit(pts_ref, cfg, 15.0, 6.0);
  const std::size_t m = fit.grid_size();
  for (std::size_t i = 0; i < m; ++i) {
    CHECK(std::abs(fit.values()[i] - fit_ref.values()[m - 1 - i]) < 1e-9);
    CHECK(std::abs(fit.derivs()[i] + fit_ref.derivs()[m - 1 - i]) < 1e-9);
  }
}

TEST_CASE("degenerate window reports the offending eval point") {
  std::vector<SummaryPoint> pts = {{0.0, 1.0, 1.0}, {10.0, 2.0, 1.0},
                                   {20.0, 3.0, 1.0}};
  SmootherConfig cfg;
  cfg.kernel = Kernel::Epanechnikov;
  cfg.bandwidth_h = 0.5; // compact kernel windows hold at most one point
  CHECK_THROWS_AS(local_linear_fit(pts, cfg, 15.0, 20.0), Error);
  try {
    local_linear_fit(pts, cfg, 15.0, 20.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDesign);
  }
}

TEST_CASE("empirical sup-norm rate: error non-increasing as n doubles") {
  const CounterRng rng(2024);
  auto truth = [](double t) { return 2.0 + std::sin(3.0 * t); };
  const double sigma = 0.3;
  std::vector<double> mean_sup_errors;
  std::size_t draw_stream = 0;
  for (int n : {50, 100, 200, 400}) {
    const double h = 0.35 * std::pow(double(n), -0.2);
    double total = 0.0;
    const int seeds = 24;
    for (int s = 0; s < seeds; ++s) {
      const CounterRng seed_rng = rng.stream(draw_stream++);
      std::vector<SummaryPoint> pts;
      for (int j = 0; j < n; ++j) {
        const double t = j / double(n - 1);
        pts.push_back(SummaryPoint{
            t, truth(t) + sigma * seed_rng.normal(static_cast<std::uint64_t>(j)),
            1.0});
      }
      SmootherConfig cfg;
      cfg.bandwidth_h = h;
      cfg.grid_points = 101;
      const auto curve = local_linear_fit(pts, cfg, 15.0, 1.0);
      double sup = 0.0;
      for (std::size_t i = 0; i < curve.grid_size(); ++i)
        sup = std::max(sup,
                       std::abs(curve.values()[i] - truth(curve.grid_time(i))));
      total += sup;
    }
    mean_sup_errors.push_back(total / seeds);
  }
  for (std::size_t i = 1; i < mean_sup_errors.size(); ++i)
    CHECK(mean_sup_errors[i] <= mean_sup_errors[i - 1]);
}
