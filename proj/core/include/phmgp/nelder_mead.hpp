#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace phmgp {

struct NelderMeadOptions {
  int max_iterations = 500;
  double spread_tolerance = 1e-8;  // stop when max - min objective over the simplex drops below
  double initial_step = 0.25;      // per-coordinate offset building the initial simplex
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;  // objective at x (maximization)
  int iterations = 0;
  bool converged = false;            // spread tolerance reached before the iteration cap
  std::vector<double> best_trace;    // best objective after each iteration, non-decreasing
};

/// Derivative-free simplex ascent.  The objective may throw; a throwing
/// vertex is treated as -infinity, so the search backs away from it.
NelderMeadResult nelder_mead_maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                                      const Eigen::VectorXd& start,
                                      const NelderMeadOptions& opts = {});

}  // namespace phmgp
