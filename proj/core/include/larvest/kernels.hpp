#ifndef LARVEST_KERNELS_HPP
#define LARVEST_KERNELS_HPP

#include <cmath>
#include <string>

#include "larvest/errors.hpp"

namespace larvest {

enum class Kernel { Epanechnikov, Gaussian };

/// Normalized kernel value K(u). Epanechnikov is compactly supported on
/// (-1, 1); Gaussian has full support.
inline double kernel_value(Kernel k, double u) {
  switch (k) {
    case Kernel::Epanechnikov:
      return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case Kernel::Gaussian:
      return 0.3989422804014327 * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

inline bool kernel_is_compact(Kernel k) { return k == Kernel::Epanechnikov; }

inline const char* to_string(Kernel k) {
  return k == Kernel::Epanechnikov ? "epanechnikov" : "gaussian";
}

inline Kernel kernel_from_string(const std::string& name) {
  if (name == "epanechnikov") return Kernel::Epanechnikov;
  if (name == "gaussian") return Kernel::Gaussian;
  throw Error(ErrorCode::OutOfRange, "unknown kernel '" + name + "'");
}

} // namespace larvest

#endif
