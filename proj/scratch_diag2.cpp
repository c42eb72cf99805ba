#include <cmath>
#include <cstdio>
#include <vector>

#include "larvest/local_smoother.hpp"
#include "larvest/registration.hpp"
#include "larvest/synth_model.hpp"

using namespace larvest;

namespace {

double identity_error(const ConstantTempCurve& curve, double alpha, int ns) {
  Landmarks lm = find_landmarks(curve);
  const auto w = WarpingQuadratic::fit(lm.t_max_h, lm.t_pup_h, alpha);
  const auto shape = compute_shape(curve, w, ns);
  double worst = 0.0;
  for (std::size_t g = 0; g < curve.grid_size(); ++g) {
    const double t = curve.grid_time(g);
    worst = std::max(worst, std::abs(shape.at(w(t)) - curve.values()[g]));
  }
  return worst;
}

} // namespace

int main() {
  SynthFamily family;
  family.rate_coeff = 0.004;
  family.base_temp_c = 5.0;
  family.hatch_len_mm = 2.0;
  family.max_len_mm = 14.0;
  family.shrink_frac = 0.8;
  const std::vector<double> temps = {15.0};
  const auto ds = synth_dataset(family, temps, 25, 1, 1);
  const auto summaries = batch_summaries(ds.batches[0]);
  const double t_pup = ds.batches[0].last_time();

  std::printf("— smoothed curve, Epanechnikov vs Gaussian time kernel —\n");
  for (Kernel kernel : {Kernel::Epanechnikov, Kernel::Gaussian}) {
    for (int nc : {512, 2048}) {
      for (int ns : {4096, 8192, 16384}) {
        SmootherConfig cfg;
        cfg.kernel = kernel;
        cfg.grid_points = nc;
        const auto curve = local_linear_fit(summaries, cfg, 15.0, t_pup);
        std::printf("kernel=%-12s nc=%5d ns=%6d worst=%.3e\n",
                    to_string(kernel), nc, ns,
                    identity_error(curve, 0.6, ns));
      }
    }
  }

  std::printf("— exact truth curve (no smoothing) —\n");
  for (int nc : {512, 2048}) {
    for (int ns : {4096, 8192, 16384}) {
      const auto curve = synth_truth_curve(family, 15.0, nc);
      std::printf("nc=%5d ns=%6d worst=%.3e\n", nc, ns,
                  identity_error(curve, 0.6, ns));
    }
  }
  return 0;
}
