#include <doctest.h>

#include <Eigen/Core>
#include <string>
#include <vector>

#include "phmgp/errors.hpp"
#include "phmgp/svg.hpp"

using namespace phmgp;

namespace {

FanChart demo_fan() {
  FanChart chart;
  chart.title = "demo fan";
  chart.xs = {0.0, 0.5, 1.0};
  chart.mean = {1.0, 1.5, 2.0};
  chart.lower = {0.8, 1.2, 1.6};
  chart.upper = {1.2, 1.8, 2.4};
  chart.truth_xs = {0.0, 0.5, 1.0};
  chart.truth_ys = {1.0, 1.4, 2.1};
  chart.observed_xs = {0.0, 0.5};
  chart.observed_ys = {1.0, 1.4};
  return chart;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("svg") {

TEST_CASE("prediction fan renders band, lines, points, and labels") {
  std::string svg = svg_prediction_fan(demo_fan());
  CHECK(contains(svg, "<svg xmlns=\"http://www.w3.org/2000/svg\""));
  CHECK(contains(svg, "</svg>"));
  CHECK(contains(svg, "<polygon"));             // credible band
  CHECK(svg.find("<polyline") != svg.rfind("<polyline"));  // truth and mean lines
  CHECK(contains(svg, "<circle"));              // observed points
  CHECK(contains(svg, "demo fan"));
  // deterministic output
  CHECK(svg == svg_prediction_fan(demo_fan()));
}

TEST_CASE("prediction fan validates its inputs") {
  FanChart chart = demo_fan();
  chart.mean.pop_back();
  CHECK_THROWS_AS(svg_prediction_fan(chart), InvalidArgument);
  chart = demo_fan();
  chart.upper[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(svg_prediction_fan(chart), InvalidArgument);
  chart = demo_fan();
  chart.xs.clear();
  chart.mean.clear();
  chart.lower.clear();
  chart.upper.clear();
  CHECK_THROWS_AS(svg_prediction_fan(chart), InvalidArgument);
}

TEST_CASE("titles are xml-escaped") {
  FanChart chart = demo_fan();
  chart.title = "a < b & c > d";
  std::string svg = svg_prediction_fan(chart);
  CHECK(contains(svg, "a &lt; b &amp; c &gt; d"));
  CHECK_FALSE(contains(svg, "a < b & c > d"));
}

TEST_CASE("calibration bars pair nominal with observed coverage") {
  std::vector<double> levels{50.0, 90.0, 95.0, 99.0};
  std::vector<double> empirical{0.52, 0.89, 0.95, 0.99};
  std::string svg = svg_calibration_bars(levels, empirical, "coverage");
  CHECK(contains(svg, "coverage"));
  CHECK(contains(svg, "50%"));
  CHECK(contains(svg, "99%"));
  CHECK(contains(svg, "nominal"));
  CHECK(contains(svg, "observed"));
  // one nominal and one observed bar per level plus two legend swatches
  std::size_t rects = 0;
  for (std::size_t pos = svg.find("<rect"); pos != std::string::npos;
       pos = svg.find("<rect", pos + 1)) {
    ++rects;
  }
  CHECK(rects == 2 * levels.size() + 2 + 1);  // + background

  CHECK_THROWS_AS(svg_calibration_bars(levels, std::vector<double>{0.5}, "bad"),
                  InvalidArgument);
  CHECK_THROWS_AS(svg_calibration_bars(std::vector<double>{50.0}, std::vector<double>{1.5}, "bad"),
                  InvalidArgument);
}

TEST_CASE("heatmap renders one cell per entry with range labels") {
  Eigen::MatrixXd m(2, 3);
  m << 0.0, 0.5, 1.0, 1.5, 2.0, 2.5;
  std::string svg = svg_heatmap(m, "cells");
  std::size_t rects = 0;
  for (std::size_t pos = svg.find("<rect"); pos != std::string::npos;
       pos = svg.find("<rect", pos + 1)) {
    ++rects;
  }
  CHECK(rects == 6 + 1);  // cells + background
  CHECK(contains(svg, "min 0"));
  CHECK(contains(svg, "max 2.5"));
  CHECK_THROWS_AS(svg_heatmap(Eigen::MatrixXd(), "empty"), InvalidArgument);
  Eigen::MatrixXd bad(1, 1);
  bad << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svg_heatmap(bad, "nan"), InvalidArgument);
}

TEST_CASE("constant matrices render without dividing by zero") {
  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(3, 3, 4.0);
  std::string svg = svg_heatmap(flat, "flat");
  CHECK(contains(svg, "min 4"));
  CHECK(contains(svg, "max 4"));
}

}  // TEST_SUITE
