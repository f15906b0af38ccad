#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace phmgp {

/// One degradation history: strictly increasing locations xs with one
/// observed quantity ys per location.
struct Trajectory {
  std::string id;
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t size() const noexcept { return xs.size(); }
};

/// Throws InvalidArgument unless xs/ys have equal nonzero length, all values
/// are finite, and xs is strictly increasing.
void validate_trajectory(const Trajectory& t);

}  // namespace phmgp
