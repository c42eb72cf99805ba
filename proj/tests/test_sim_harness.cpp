#include <doctest.h>

#include <cmath>
#include <sstream>

#include "larvest/sim_harness.hpp"

using namespace larvest;

TEST_CASE("study 1 with zero temperature noise recovers the planted time") {
  const auto field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 5;
  cfg.n_lengths = 4;
  cfg.sigma_T = {0.0};
  cfg.seed = 1;
  const auto result = run_const_temp_noise(cfg, field);
  REQUIRE(result.cells.size() == 1);
  CHECK(result.cells[0].failures == 0);
  for (const auto& [_, t_hat] : result.cells[0].estimates)
    CHECK(t_hat == -100.0);
}

TEST_CASE("study 1 dispersion grows with the temperature noise") {
  const auto field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 40;
  cfg.n_lengths = 10;
  cfg.sigma_T = {0.25, 1.0};
  cfg.seed = 11;
  const auto result = run_const_temp_noise(cfg, field);
  REQUIRE(result.cells.size() == 2);
  CHECK(result.cells[0].failures == 0);
  CHECK(result.cells[1].failures == 0);
  CHECK(result.cells[1].sd >= result.cells[0].sd);
  CHECK(std::abs(result.cells[0].mean + 100.0) < 3.0);
  CHECK(std::abs(result.cells[1].mean + 100.0) < 3.0);
}

TEST_CASE("results are bit-identical across runs and worker counts") {
  const auto field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 12;
  cfg.n_lengths = 6;
  cfg.sigma_T = {0.5};
  cfg.seed = 5;
  cfg.threads = 1;
  const auto a = run_const_temp_noise(cfg, field);
  cfg.threads = 4;
  const auto b = run_const_temp_noise(cfg, field);
  CHECK(summary_json(a) == summary_json(b));
  std::ostringstream sa, sb;
  write_samples_csv(sa, a);
  write_samples_csv(sb, b);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("study 2: perfect correlation reproduces the noiseless control") {
  const auto field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 3;
  cfg.n_lengths = 5;
  cfg.rho_T = {1.0};
  cfg.true_hatch_h = -45.0;
  cfg.t_a_h = -150.0;
  cfg.seed = 2;
  const auto result = run_station_correlation(cfg, field);
  REQUIRE(result.cells.size() == 1);
  CHECK(result.cells[0].failures == 0);
  for (const auto& [_, t_hat] : result.cells[0].estimates)
    CHECK(t_hat == -45.0);
}

TEST_CASE("study 2: weaker correlation cannot reduce the spread") {
  const auto field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 60;
  cfg.n_lengths = 10;
  cfg.rho_T = {0.9, 0.7};
  cfg.true_hatch_h = -45.0;
  cfg.t_a_h = -150.0;
  cfg.seed = 3;
  const auto result = run_station_correlation(cfg, field);
  REQUIRE(result.cells.size() == 2);
  CHECK(result.cells[1].sd >= result.cells[0].sd);
  CHECK(std::abs(result.cells[0].mean + 45.0) < 4.0);
  CHECK(std::abs(result.cells[1].mean + 45.0) < 4.0);
}

TEST_CASE("study 3 on the bundled weather series") {
  const auto field = canonical_study_field();
  const auto weather = synthetic_weather_profile();
  CHECK(weather.span_begin() == -250.0);
  CHECK(weather.span_end() == 0.0);
  CHECK(weather.min_temperature() > 6.0);
  CHECK(weather.max_temperature() < 13.0);

  StudyConfig cfg;
  cfg.replicates = 4;
  cfg.n_lengths = 5;
  cfg.sigma_T = {0.0};
  cfg.true_hatch_h = -90.0;
  cfg.seed = 4;
  const auto result = run_varying_temp_noise(cfg, field, weather);
  REQUIRE(result.cells.size() == 1);
  CHECK(result.cells[0].failures == 0);
  for (const auto& [_, t_hat] : result.cells[0].estimates)
    CHECK(t_hat == -90.0);

  cfg.sigma_T = {0.25, 0.75};
  cfg.replicates = 30;
  const auto noisy = run_varying_temp_noise(cfg, field, weather);
  CHECK(noisy.cells[1].sd >= noisy.cells[0].sd);
}

TEST_CASE("histogram rows sum to the successful replicates") {
  const auto field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 25;
  cfg.n_lengths = 5;
  cfg.sigma_T = {0.75};
  cfg.seed = 6;
  const auto result = run_const_temp_noise(cfg, field);
  std::ostringstream hist;
  write_histogram_csv(hist, result);
  std::istringstream in(hist.str());
  std::string line;
  std::getline(in, line); // header
  long total = 0;
  while (std::getline(in, line)) {
    const auto comma = line.rfind(',');
    total += std::stol(line.substr(comma + 1));
  }
  CHECK(total == cfg.replicates - result.cells[0].failures);
}

TEST_CASE("summary JSON carries per-cell statistics") {
  const auto field = canonical_study_field();
  StudyConfig cfg;
  cfg.replicates = 3;
  cfg.n_lengths = 4;
  cfg.sigma_T = {0.0};
  cfg.seed = 7;
  const auto result = run_const_temp_noise(cfg, field);
  const std::string text = summary_json(result);
  CHECK(text.find("\"study\": \"const-temp-noise\"") != std::string::npos);
  CHECK(text.find("\"failures\": 0") != std::string::npos);
  CHECK(text.find("\"mean\": -100.0") != std::string::npos);
}
