// Scratch: measure the composition-identity error against grid sizes.
#include <cmath>
#include <cstdio>
#include <vector>

#include "larvest/local_smoother.hpp"
#include "larvest/registration.hpp"
#include "larvest/synth_model.hpp"

using namespace larvest;

int main() {
  // Worst-case family for the identity: large rise delta.
  SynthFamily family;
  family.rate_coeff = 0.004;
  family.base_temp_c = 5.0;
  family.hatch_len_mm = 2.0;
  family.max_len_mm = 14.0;
  family.shrink_frac = 0.8;
  const std::vector<double> temps = {6, 9, 12, 15, 18, 21, 24, 27, 30};
  const auto ds = synth_dataset(family, temps, 25, 1, 1);

  for (int nc : {512, 1024, 2048, 4096}) {
    for (int ns : {2048, 4096, 8192, 16384}) {
      double worst = 0.0;
      std::vector<Landmarks> lms;
      std::vector<ConstantTempCurve> curves;
      for (const auto& batch : ds.batches) {
        SmootherConfig cfg;
        cfg.grid_points = nc;
        curves.push_back(local_linear_fit(batch_summaries(batch), cfg,
                                          batch.temperature_c,
                                          batch.last_time()));
        lms.push_back(find_landmarks(curves.back()));
      }
      const double alpha = default_alpha(lms);
      for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto w = WarpingQuadratic::fit(lms[k].t_max_h, lms[k].t_pup_h, alpha);
        const auto shape = compute_shape(curves[k], w, ns);
        for (std::size_t g = 0; g < curves[k].grid_size(); ++g) {
          const double t = curves[k].grid_time(g);
          worst = std::max(worst,
                           std::abs(shape.at(w(t)) - curves[k].values()[g]));
        }
      }
      std::printf("nc=%5d ns=%6d worst=%.3e\n", nc, ns, worst);
    }
  }
  return 0;
}
