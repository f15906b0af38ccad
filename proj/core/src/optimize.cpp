#include "phmgp/optimize.hpp"

#include <cmath>

#include "phmgp/errors.hpp"

namespace phmgp {

GoldenSectionResult golden_section_maximize(const std::function<double(double)>& objective,
                                            double lo, double hi, double tol) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("golden-section bracket must be a finite nonempty interval");
  }
  if (!(tol > 0.0)) throw InvalidArgument("golden-section tolerance must be positive");

  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  GoldenSectionResult result;
  result.x = fc > fd ? c : d;
  result.value = fc > fd ? fc : fd;
  result.at_lower_bound = result.x - lo <= 10.0 * tol;
  result.at_upper_bound = hi - result.x <= 10.0 * tol;
  return result;
}

}  // namespace phmgp
