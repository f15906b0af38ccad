#pragma once

#include <span>

namespace phmgp {

/// Inverse standard-normal CDF.  Rational approximation refined with one
/// Halley step against erfc; accurate to ~1e-15 over (0, 1).
double normal_quantile(double p);

/// Two-sided z multiplier for a central interval covering `level` percent.
double z_for_level(double level_percent);

double mean_of(std::span<const double> v);

/// Unbiased sample variance (n - 1 divisor); needs at least two values.
double sample_variance(std::span<const double> v);

}  // namespace phmgp
