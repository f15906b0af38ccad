#pragma once

#include <span>

namespace phmgp {

/// Squared-exponential covariance parameters.  sigma_f, ell > 0; sigma_y >= 0.
struct SeParams {
  double sigma_f = 1.0;
  double ell = 1.0;
  double sigma_y = 0.0;
};

/// Inhomogeneous polynomial covariance parameters.  sigma_f, b > 0; q >= 1;
/// sigma_y >= 0.
struct PolyKernelParams {
  int q = 1;
  double sigma_f = 1.0;
  double b = 1.0;
  double sigma_y = 0.0;
};

/// sigma_f^2 exp(-(x - xp)^2 / (2 ell^2)) + sigma_y^2 [same_index].
/// Noise attaches to identical observation indices, not equal coordinates.
double kernel_se(double x, double xp, const SeParams& p, bool same_index = false);

/// sigma_f^2 (x xp + b)^q + sigma_y^2 [same_index].
double kernel_poly(double x, double xp, const PolyKernelParams& p, bool same_index = false);

/// sum_k coeffs[k] x^k (coeffs[0] is the constant term).  Horner evaluation.
double mean_poly(double x, std::span<const double> coeffs);

/// Derivative of mean_poly with respect to x.
double mean_poly_deriv(double x, std::span<const double> coeffs);

}  // namespace phmgp
