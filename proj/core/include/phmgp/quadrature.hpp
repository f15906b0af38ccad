#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "phmgp/errors.hpp"

namespace phmgp {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  int max_depth = 40;
};

namespace detail {

template <class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F& f, double a, double fa, double b, double fb, double m, double fm,
                            double whole, double eps, int depth, int max_depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = simpson_step(f, a, fa, m, fm, lm, flm);
  double right = simpson_step(f, m, fm, b, fb, rm, frm);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  if (depth >= max_depth) {
    throw QuadratureError("adaptive quadrature did not converge within depth " +
                          std::to_string(max_depth));
  }
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1, max_depth) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1, max_depth);
}

}  // namespace detail

/// Integrates f over [a, b] with adaptive Simpson refinement to a relative
/// tolerance.  Exact on cubics per panel; a == b returns 0.
template <class F>
double adaptive_simpson(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("quadrature limits must be finite");
  }
  if (a == b) return 0.0;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  double fa = f(a);
  double fb = f(b);
  double m = 0.5 * (a + b);
  double fm = f(m);
  double whole = detail::simpson_step(f, a, fa, b, fb, m, fm);
  double scale = std::max({std::abs(whole), std::abs(fa) * (b - a), 1e-300});
  double eps = opts.rel_tol * scale;
  return sign *
         detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, eps, 0, opts.max_depth);
}

}  // namespace phmgp
