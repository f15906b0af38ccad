#pragma once

#include <cmath>
#include <span>

#include "phmgp/errors.hpp"
#include "phmgp/trajectory.hpp"

namespace phmgp {

/// Affine map between raw data coordinates (x, y) and the standardized
/// coordinates (u, v) all numerical kernels operate in.  Scales are never
/// zero; degenerate (constant) data keeps scale 1.
struct Standardization {
  double x_mean = 0.0;
  double x_scale = 1.0;
  double y_mean = 0.0;
  double y_scale = 1.0;

  double to_u(double x) const noexcept { return (x - x_mean) / x_scale; }
  double to_x(double u) const noexcept { return x_mean + x_scale * u; }
  double to_v(double y) const noexcept { return (y - y_mean) / y_scale; }
  double to_y(double v) const noexcept { return y_mean + y_scale * v; }

  bool is_identity() const noexcept {
    return x_mean == 0.0 && x_scale == 1.0 && y_mean == 0.0 && y_scale == 1.0;
  }

  static Standardization identity() { return {}; }

  /// Pooled mean and population standard deviation over all samples of all
  /// trajectories, per axis.  A zero or non-finite deviation falls back to
  /// scale 1 so the map stays invertible.
  static Standardization fit(std::span<const Trajectory> trajectories);
};

bool operator==(const Standardization& a, const Standardization& b) noexcept;

}  // namespace phmgp
