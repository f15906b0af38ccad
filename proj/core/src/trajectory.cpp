#include "phmgp/trajectory.hpp"

#include <cmath>

#include "phmgp/errors.hpp"

namespace phmgp {

void validate_trajectory(const Trajectory& t) {
  if (t.xs.empty()) throw InvalidArgument("trajectory '" + t.id + "' has no samples");
  if (t.xs.size() != t.ys.size()) {
    throw InvalidArgument("trajectory '" + t.id + "' has mismatched xs/ys lengths");
  }
  for (std::size_t i = 0; i < t.xs.size(); ++i) {
    if (!std::isfinite(t.xs[i]) || !std::isfinite(t.ys[i])) {
      throw InvalidArgument("trajectory '" + t.id + "' has a non-finite sample at index " +
                            std::to_string(i));
    }
    if (i > 0 && !(t.xs[i] > t.xs[i - 1])) {
      throw InvalidArgument("trajectory '" + t.id + "' locations are not strictly increasing at index " +
                            std::to_string(i));
    }
  }
}

}  // namespace phmgp
