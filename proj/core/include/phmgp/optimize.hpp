#pragma once

#include <functional>

namespace phmgp {

struct GoldenSectionResult {
  double x = 0.0;
  double value = 0.0;
  bool at_lower_bound = false;  // maximum pinned against the lower bracket edge
  bool at_upper_bound = false;
};

/// Golden-section ascent of a unimodal objective on [lo, hi]; stops once the
/// bracket width drops below tol.
GoldenSectionResult golden_section_maximize(const std::function<double(double)>& objective,
                                            double lo, double hi, double tol = 1e-4);

}  // namespace phmgp
