#ifndef LARVEST_STATS_HPP
#define LARVEST_STATS_HPP

#include <cstddef>
#include <span>

namespace larvest {

/// Inverse standard normal CDF. Rational approximation refined by one
/// Halley step against erfc, accurate to a few ulps for p in (0, 1).
double normal_quantile(double p);

/// Quantile of chi-square with one degree of freedom, via the identity
/// chi2(1) = Z^2.
double chi_square_quantile_1df(double p);

double mean(std::span<const double> xs);

/// Unbiased sample variance (n-1 denominator). Requires n >= 2.
double sample_variance(std::span<const double> xs);

double median(std::span<const double> xs);

struct OlsLine {
  double intercept = 0.0;
  double slope = 0.0;

  double predict(double x) const { return intercept + slope * x; }
};

/// Ordinary least squares y on x; slope = Sxy/Sxx.
OlsLine fit_ols(std::span<const double> x, std::span<const double> y);

} // namespace larvest

#endif
