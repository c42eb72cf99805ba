#include <cmath>
#include <cstdio>
#include <vector>

#include "larvest/local_smoother.hpp"
#include "larvest/registration.hpp"
#include "larvest/synth_model.hpp"

using namespace larvest;

int main() {
  SynthFamily family;
  family.rate_coeff = 0.004;
  family.base_temp_c = 5.0;
  family.hatch_len_mm = 2.0;
  family.max_len_mm = 14.0;
  family.shrink_frac = 0.8;
  const std::vector<double> temps = {6, 9, 12, 15, 18, 21, 24, 27, 30};
  const auto ds = synth_dataset(family, temps, 25, 1, 1);

  const int nc = 512, ns = 4096;
  std::vector<Landmarks> lms;
  std::vector<ConstantTempCurve> curves;
  for (const auto& batch : ds.batches) {
    SmootherConfig cfg;
    cfg.grid_points = nc;
    curves.push_back(local_linear_fit(batch_summaries(batch), cfg,
                                      batch.temperature_c, batch.last_time()));
    lms.push_back(find_landmarks(curves.back()));
  }
  const double alpha = default_alpha(lms);
  std::printf("alpha=%.6f\n", alpha);
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto w = WarpingQuadratic::fit(lms[k].t_max_h, lms[k].t_pup_h, alpha);
    const auto shape = compute_shape(curves[k], w, ns);
    double worst = 0.0, worst_t = 0.0;
    for (std::size_t g = 0; g < curves[k].grid_size(); ++g) {
      const double t = curves[k].grid_time(g);
      const double err = std::abs(shape.at(w(t)) - curves[k].values()[g]);
      if (err > worst) {
        worst = err;
        worst_t = t;
      }
    }
    std::printf(
        "T=%4.1f r=%.4f b*tp^2=%+.4f worst=%.3e at t=%.2f (t/tpup=%.3f, "
        "t_max=%.2f)\n",
        curves[k].temperature_c(), lms[k].peak_ratio(),
        w.b() * w.t_pup() * w.t_pup(), worst, worst_t, worst_t / w.t_pup(),
        lms[k].t_max_h);
  }
  return 0;
}
