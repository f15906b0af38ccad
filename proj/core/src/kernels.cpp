#include "phmgp/kernels.hpp"

#include <cmath>

#include "phmgp/errors.hpp"

namespace phmgp {

namespace {

void require_finite(double x, double xp) {
  if (!std::isfinite(x) || !std::isfinite(xp)) {
    throw InvalidArgument("kernel inputs must be finite");
  }
}

}  // namespace

double kernel_se(double x, double xp, const SeParams& p, bool same_index) {
  require_finite(x, xp);
  double d = x - xp;
  double k = p.sigma_f * p.sigma_f * std::exp(-d * d / (2.0 * p.ell * p.ell));
  if (same_index) k += p.sigma_y * p.sigma_y;
  return k;
}

double kernel_poly(double x, double xp, const PolyKernelParams& p, bool same_index) {
  require_finite(x, xp);
  if (p.q < 1) throw InvalidArgument("polynomial kernel degree must be at least 1");
  double k = p.sigma_f * p.sigma_f * std::pow(x * xp + p.b, p.q);
  if (same_index) k += p.sigma_y * p.sigma_y;
  return k;
}

double mean_poly(double x, std::span<const double> coeffs) {
  if (!std::isfinite(x)) throw InvalidArgument("mean input must be finite");
  if (coeffs.empty()) throw InvalidArgument("polynomial mean needs at least one coefficient");
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

double mean_poly_deriv(double x, std::span<const double> coeffs) {
  if (!std::isfinite(x)) throw InvalidArgument("mean input must be finite");
  if (coeffs.empty()) throw InvalidArgument("polynomial mean needs at least one coefficient");
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + coeffs[i] * static_cast<double>(i);
  return acc;
}

}  // namespace phmgp
