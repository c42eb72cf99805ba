#include <cmath>
#include <cstdio>

#include "larvest/growth_dynamics.hpp"
#include "larvest/sim_harness.hpp"

using namespace larvest;

int main() {
  const auto field = canonical_study_field();
  const double T = 18.0;
  const auto ref = field.curve_at(T);
  std::printf("t_pup=%.3f t_max=%.3f max=%.6f hatch=%.4f final=%.6f\n",
              ref.t_pup(), *ref.t_max(), ref.max_value(), ref.hatch_value(),
              ref.final_value());
  const std::size_t peak = ref.argmax_index();
  for (std::size_t j = peak - 3; j <= peak + 3; ++j)
    std::printf("  knot %zu: t=%.4f v=%.9f d=%+.3e\n", j, ref.grid_time(j),
                ref.values()[j], ref.derivs()[j]);

  std::vector<double> hours, temps;
  for (double t = -std::ceil(ref.t_pup() + 2.0); t <= 0.0; t += 1.0) {
    hours.push_back(t);
    temps.push_back(T);
  }
  const TemperatureProfile profile(hours, temps);
  const auto traj = reconstruct_growth(field, profile, -ref.t_pup(), 0.0, 0.25);
  std::printf("traj: n=%zu final_t=%.2f final_len=%.6f final_phase=%s\n",
              traj.times_h.size(), traj.final_time(), traj.final_length(),
              to_string(traj.final_phase()));
  // Print around the maximum of the trajectory.
  std::size_t arg = 0;
  for (std::size_t i = 1; i < traj.lengths_mm.size(); ++i)
    if (traj.lengths_mm[i] > traj.lengths_mm[arg]) arg = i;
  std::printf("traj max %.9f at t=%.2f (phase %s)\n", traj.lengths_mm[arg],
              traj.times_h[arg], to_string(traj.phases[arg]));
  for (std::size_t i = arg > 4 ? arg - 4 : 0;
       i < std::min(arg + 8, traj.lengths_mm.size()); ++i)
    std::printf("  t=%8.2f L=%.9f phase=%s\n", traj.times_h[i],
                traj.lengths_mm[i], to_string(traj.phases[i]));
  return 0;
}
