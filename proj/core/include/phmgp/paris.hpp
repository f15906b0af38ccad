#pragma once

#include <vector>

#include "phmgp/quadrature.hpp"

namespace phmgp {

/// Finite-width center-cracked plate geometry and crack-growth constants.
/// Lengths in mm, stress in MPa.
struct ParisLawConfig {
  double width = 0.0;             // plate width W
  double stress_range = 0.0;      // remote stress amplitude
  double initial_crack = 0.0;     // half-length a0 at cycle zero
  double growth_scale = 1.0;      // growth-rate coefficient C
  std::vector<double> exponents;  // growth-rate exponents (one basis column each)

  /// Throws InvalidArgument unless 0 < initial_crack < width / 2, the stress
  /// range and growth scale are positive, and exponents are finite,
  /// non-negative, and non-empty.
  void validate() const;

  double max_crack() const noexcept { return 0.5 * width; }
};

/// Stress intensity range for half crack length a: stress_range * sqrt(pi a)
/// with the finite-width secant correction.  Domain [0, width / 2).
double stress_intensity_range(double a, const ParisLawConfig& cfg);

/// Cycle count to grow from initial_crack to a under exponent alpha:
///   (1 / (C s^alpha pi^(alpha/2))) * integral_{a0}^{a} (cos(pi z / W) / z)^(alpha/2) dz
/// evaluated with adaptive quadrature.  Domain [initial_crack, width / 2).
double paris_cycles(double a, double alpha, const ParisLawConfig& cfg,
                    const QuadratureOptions& opts = {});

/// Derivative of paris_cycles with respect to a (reciprocal growth rate).
double paris_cycles_deriv(double a, double alpha, const ParisLawConfig& cfg);

}  // namespace phmgp
