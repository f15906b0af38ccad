#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

namespace phmgp {

/// One prediction fan: posterior mean with a credible band, the true
/// trajectory, and the observed prefix the posterior conditioned on.
struct FanChart {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  std::vector<double> xs;     // query locations
  std::vector<double> mean;   // posterior mean per location
  std::vector<double> lower;  // band bounds per location
  std::vector<double> upper;
  std::vector<double> truth_xs, truth_ys;
  std::vector<double> observed_xs, observed_ys;
};

/// Self-contained SVG document; throws InvalidArgument on mismatched or
/// non-finite inputs.
std::string svg_prediction_fan(const FanChart& chart);

/// Nominal central-interval levels against observed coverage, one bar pair
/// per level on a 0..1 axis.
std::string svg_calibration_bars(std::span<const double> levels_percent,
                                 std::span<const double> empirical, const std::string& title);

/// Matrix cells colored on a linear white-to-blue ramp from the minimum to the
/// maximum entry; row 0 renders at the top.
std::string svg_heatmap(const Eigen::MatrixXd& values, const std::string& title);

}  // namespace phmgp
