#include "phmgp/standardize.hpp"

#include <cstddef>

namespace phmgp {

namespace {

struct Moments {
  double mean = 0.0;
  double scale = 1.0;
};

Moments pooled_moments(std::span<const Trajectory> trajectories, bool use_y) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : trajectories) {
    const auto& v = use_y ? t.ys : t.xs;
    for (double a : v) sum += a;
    n += v.size();
  }
  if (n == 0) throw InvalidArgument("standardization needs at least one sample");
  double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& t : trajectories) {
    const auto& v = use_y ? t.ys : t.xs;
    for (double a : v) ss += (a - mean) * (a - mean);
  }
  double sd = std::sqrt(ss / static_cast<double>(n));
  if (!(sd > 0.0) || !std::isfinite(sd)) sd = 1.0;
  return {mean, sd};
}

}  // namespace

Standardization Standardization::fit(std::span<const Trajectory> trajectories) {
  Moments mx = pooled_moments(trajectories, false);
  Moments my = pooled_moments(trajectories, true);
  return {mx.mean, mx.scale, my.mean, my.scale};
}

bool operator==(const Standardization& a, const Standardization& b) noexcept {
  return a.x_mean == b.x_mean && a.x_scale == b.x_scale && a.y_mean == b.y_mean &&
         a.y_scale == b.y_scale;
}

}  // namespace phmgp
