#include <doctest.h>

#include <cmath>
#include <sstream>

#include "larvest/errors.hpp"
#include "larvest/synth_model.hpp"

using namespace larvest;

namespace {

// Independent symbolic evaluation of the documented family formula.
double oracle_value(const SynthFamily& f, double T, double t) {
  const double x = T - f.base_temp_c;
  const double s = t * x;
  const double delta = f.max_len_mm - f.hatch_len_mm;
  const double s1 = (1.0 - SynthFamily::kEaseFraction) * delta / f.rate_coeff;
  const double speak = s1 + 2.0 * SynthFamily::kEaseFraction * delta / f.rate_coeff;
  const double spup = speak * (1.0 + SynthFamily::kPostSpanFraction);
  if (s <= s1) return f.hatch_len_mm + f.rate_coeff * s;
  if (s <= speak) {
    const double d = s - s1;
    return f.hatch_len_mm + (1.0 - SynthFamily::kEaseFraction) * delta +
           f.rate_coeff * d * (1.0 - 0.5 * d / (speak - s1));
  }
  const double q =
      (1.0 - f.shrink_frac) * f.max_len_mm / ((spup - speak) * (spup - speak));
  const double d = std::min(s, spup) - speak;
  return f.max_len_mm - q * d * d;
}

} // namespace

TEST_CASE("pre-saturation slope is rate * (T - T0) exactly") {
  SynthFamily f;
  f.rate_coeff = 0.05;
  f.base_temp_c = 5.0;
  CHECK(f.deriv_at(15.0, 1.0) == 0.5);
  CHECK(f.deriv_at(15.0, 0.0) == 0.5);
}

TEST_CASE("doubling the excess temperature halves the milestones") {
  const SynthFamily f;
  const double x1 = 6.0, x2 = 12.0;
  CHECK(f.t_max(f.base_temp_c + x2) ==
        doctest::Approx(0.5 * f.t_max(f.base_temp_c + x1)).epsilon(1e-14));
  CHECK(f.t_pup(f.base_temp_c + x2) ==
        doctest::Approx(0.5 * f.t_pup(f.base_temp_c + x1)).epsilon(1e-14));
}

TEST_CASE("probe values match the symbolic oracle") {
  const SynthFamily f;
  const double T = 17.0;
  for (double frac : {0.1, 0.35, 0.62, 0.8, 0.97}) {
    const double t = frac * f.t_pup(T);
    CHECK(f.length_at(T, t) == doctest::Approx(oracle_value(f, T, t)).epsilon(1e-14));
  }
  // Peak and pupation anchors.
  CHECK(f.length_at(T, f.t_max(T)) == doctest::Approx(f.max_len_mm));
  CHECK(f.length_at(T, f.t_pup(T)) ==
        doctest::Approx(f.shrink_frac * f.max_len_mm));
}

TEST_CASE("truth curve samples the formula and knows its peak") {
  const SynthFamily f;
  const auto curve = synth_truth_curve(f, 20.0, 512);
  CHECK(curve.t_pup() == doctest::Approx(f.t_pup(20.0)));
  REQUIRE(curve.t_max().has_value());
  CHECK(*curve.t_max() == doctest::Approx(f.t_max(20.0)));
  CHECK(curve.value_at(0.0) == doctest::Approx(f.hatch_len_mm));
  CHECK_THROWS_AS(synth_truth_curve(f, f.base_temp_c, 512), Error);
}

TEST_CASE("noise-free dataset equals the truth") {
  SynthFamily f;
  f.noise_sd_mm = 0.0;
  const std::vector<double> temps = {10.0, 20.0};
  const auto ds = synth_dataset(f, temps, 12, 3, 99);
  for (const auto& batch : ds.batches)
    for (const auto& tp : batch.observations)
      for (double l : tp.lengths_mm)
        CHECK(l == doctest::Approx(f.length_at(batch.temperature_c, tp.time_h))
                       .epsilon(1e-14));
}

TEST_CASE("same seed reproduces the dataset bit-exactly") {
  SynthFamily f;
  f.noise_sd_mm = 0.4;
  const std::vector<double> temps = {10.0, 14.0, 20.0};
  const auto a = synth_dataset(f, temps, 10, 4, 7);
  const auto b = synth_dataset(f, temps, 10, 4, 7);
  std::ostringstream sa, sb;
  write_experimental_csv(sa, a);
  write_experimental_csv(sb, b);
  CHECK(sa.str() == sb.str());

  const auto c = synth_dataset(f, temps, 10, 4, 8);
  std::ostringstream sc;
  write_experimental_csv(sc, c);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("replicate mean concentrates on the truth") {
  SynthFamily f;
  f.noise_sd_mm = 0.5;
  const std::vector<double> temps = {15.0};
  const auto ds = synth_dataset(f, temps, 2, 10000, 3);
  const auto& tp = ds.batches[0].observations[1];
  const double truth = f.length_at(15.0, tp.time_h);
  double mean = 0.0;
  for (double l : tp.lengths_mm) mean += l;
  mean /= static_cast<double>(tp.lengths_mm.size());
  CHECK(std::abs(mean - truth) < 3.0 * 0.5 / 100.0);
}

TEST_CASE("family validation") {
  SynthFamily f;
  f.hatch_len_mm = 20.0; // above the pupation floor
  CHECK_THROWS_AS(f.validate(), Error);
  SynthFamily g;
  g.rate_coeff = 0.0;
  CHECK_THROWS_AS(g.validate(), Error);
}
