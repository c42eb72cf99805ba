#include <benchmark/benchmark.h>

#include "larvest/growth_dynamics.hpp"
#include "larvest/inference.hpp"
#include "larvest/sim_harness.hpp"
#include "larvest/synth_model.hpp"
#include "larvest/temperature_field.hpp"

using namespace larvest;

namespace {

const GrowthField& shared_field() {
  static const GrowthField field = canonical_study_field();
  return field;
}

void BM_LocalLinearFit(benchmark::State& state) {
  const SynthFamily family = canonical_family();
  const auto ds = synth_dataset(family, std::vector<double>{15.0},
                                static_cast<int>(state.range(0)), 5, 1);
  const auto summaries = batch_summaries(ds.batches[0]);
  for (auto _ : state) {
    auto curve =
        local_linear_fit(summaries, SmootherConfig{}, 15.0,
                         ds.batches[0].last_time());
    benchmark::DoNotOptimize(curve);
  }
}
BENCHMARK(BM_LocalLinearFit)->Arg(25)->Arg(100);

void BM_FieldQueryUncached(benchmark::State& state) {
  const auto& field = shared_field();
  double t = 6.05;
  for (auto _ : state) {
    auto curve = field.curve_at(t);
    benchmark::DoNotOptimize(curve);
    t += 0.37;
    if (t > 29.0) t = 6.05;
  }
}
BENCHMARK(BM_FieldQueryUncached);

void BM_FieldQueryCached(benchmark::State& state) {
  const auto& field = shared_field();
  double t = 8.0;
  for (auto _ : state) {
    auto curve = field.curve_at_cached(t);
    benchmark::DoNotOptimize(curve);
    t += 0.1;
    if (t > 12.0) t = 8.0;
  }
}
BENCHMARK(BM_FieldQueryCached);

void BM_Reconstruct(benchmark::State& state) {
  const auto& field = shared_field();
  std::vector<double> hours, temps;
  for (double t = -200.0; t <= 0.0; t += 1.0) {
    hours.push_back(t);
    temps.push_back(10.0);
  }
  const TemperatureProfile profile(hours, temps);
  for (auto _ : state) {
    auto traj = reconstruct_growth(field, profile, -100.0, 0.0, 1.0);
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_Reconstruct);

void BM_CriterionProfile(benchmark::State& state) {
  const auto& field = shared_field();
  std::vector<double> hours, temps;
  for (double t = -200.0; t <= 0.0; t += 1.0) {
    hours.push_back(t);
    temps.push_back(10.0);
  }
  const TemperatureProfile profile(hours, temps);
  const double truth =
      reconstruct_growth(field, profile, -100.0, 0.0, 1.0).final_length();
  CaseObservation obs;
  obs.lengths_mm = {truth, truth + 0.1, truth - 0.1};
  obs.t_star_h = 0.0;
  obs.t_a_h = -200.0;
  const auto grid = make_candidate_grid(-200.0, 0.0, 1.0);
  for (auto _ : state) {
    auto criterion = criterion_profile(field, profile, obs, grid, 1.0);
    benchmark::DoNotOptimize(criterion);
  }
}
BENCHMARK(BM_CriterionProfile);

} // namespace
