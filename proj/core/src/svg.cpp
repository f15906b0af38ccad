#include "phmgp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phmgp/dataset.hpp"
#include "phmgp/errors.hpp"

namespace phmgp {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string escape_text(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  // fixed short decimals keep the documents small and byte-stable
  double rounded = std::round(v * 100.0) / 100.0;
  if (rounded == 0.0) rounded = 0.0;  // avoid "-0"
  return format_double(rounded);
}

struct Extent {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(std::span<const double> values) {
    for (double v : values) {
      if (!std::isfinite(v)) throw InvalidArgument("chart values must be finite");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
    double span = hi - lo;
    lo -= 0.05 * span;
    hi += 0.05 * span;
  }
};

struct Scale {
  double lo = 0.0, hi = 1.0, out_lo = 0.0, out_hi = 1.0;

  double operator()(double v) const {
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

std::string document_open(const std::string& title) {
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
      num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out += "<text x=\"" + num(kWidth / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape_text(title) + "</text>\n";
  }
  return out;
}

std::string axes(const Scale& x, const Scale& y, const std::string& x_label,
                 const std::string& y_label) {
  std::string out;
  double x0 = x.out_lo, x1 = x.out_hi, y0 = y.out_lo, y1 = y.out_hi;
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
         num(y0) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
         num(y1) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double fx = x.lo + (x.hi - x.lo) * i / 4.0;
    double px = x(fx);
    out += "<line x1=\"" + num(px) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px) + "\" y2=\"" +
           num(y0 + 5) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(px) + "\" y=\"" + num(y0 + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape_text(format_double(std::round(fx * 1000.0) / 1000.0)) + "</text>\n";
    double fy = y.lo + (y.hi - y.lo) * i / 4.0;
    double py = y(fy);
    out += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x0) +
           "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           escape_text(format_double(std::round(fy * 1000.0) / 1000.0)) + "</text>\n";
  }
  out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape_text(x_label) + "</text>\n";
  out += "<text x=\"16\" y=\"" + num((y0 + y1) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
         num((y0 + y1) / 2) + ")\">" + escape_text(y_label) + "</text>\n";
  return out;
}

std::string polyline(std::span<const double> xs, std::span<const double> ys, const Scale& x,
                     const Scale& y, const std::string& stroke, double width) {
  if (xs.empty()) return {};
  std::string out = "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
                    num(width) + "\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ' ';
    out += num(x(xs[i])) + "," + num(y(ys[i]));
  }
  out += "\"/>\n";
  return out;
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgument(std::string(what) + ": mismatched lengths");
}

}  // namespace

std::string svg_prediction_fan(const FanChart& chart) {
  require_same_size(chart.xs.size(), chart.mean.size(), "fan mean");
  require_same_size(chart.xs.size(), chart.lower.size(), "fan lower band");
  require_same_size(chart.xs.size(), chart.upper.size(), "fan upper band");
  require_same_size(chart.truth_xs.size(), chart.truth_ys.size(), "fan truth");
  require_same_size(chart.observed_xs.size(), chart.observed_ys.size(), "fan observations");
  if (chart.xs.empty()) throw InvalidArgument("fan chart needs at least one query location");

  Extent ex, ey;
  ex.add(chart.xs);
  ex.add(chart.truth_xs);
  ex.add(chart.observed_xs);
  ey.add(chart.mean);
  ey.add(chart.lower);
  ey.add(chart.upper);
  ey.add(chart.truth_ys);
  ey.add(chart.observed_ys);
  ex.pad();
  ey.pad();
  Scale x{ex.lo, ex.hi, kMarginLeft, kWidth - kMarginRight};
  Scale y{ey.lo, ey.hi, kHeight - kMarginBottom, kMarginTop};

  std::string out = document_open(chart.title);
  // credible band as a closed polygon: upper bound forward, lower bound back
  std::string band = "<polygon fill=\"#a6c8ff\" fill-opacity=\"0.55\" stroke=\"none\" points=\"";
  for (std::size_t i = 0; i < chart.xs.size(); ++i) {
    if (i > 0) band += ' ';
    band += num(x(chart.xs[i])) + "," + num(y(chart.upper[i]));
  }
  for (std::size_t i = chart.xs.size(); i-- > 0;) {
    band += ' ';
    band += num(x(chart.xs[i])) + "," + num(y(chart.lower[i]));
  }
  band += "\"/>\n";
  out += band;
  out += polyline(chart.truth_xs, chart.truth_ys, x, y, "#c62828", 1.5);
  out += polyline(chart.xs, chart.mean, x, y, "#1155cc", 2.0);
  for (std::size_t i = 0; i < chart.observed_xs.size(); ++i) {
    out += "<circle cx=\"" + num(x(chart.observed_xs[i])) + "\" cy=\"" +
           num(y(chart.observed_ys[i])) + "\" r=\"3\" fill=\"black\"/>\n";
  }
  out += axes(x, y, chart.x_label, chart.y_label);
  out += "</svg>\n";
  return out;
}

std::string svg_calibration_bars(std::span<const double> levels_percent,
                                 std::span<const double> empirical, const std::string& title) {
  require_same_size(levels_percent.size(), empirical.size(), "calibration bars");
  if (levels_percent.empty()) throw InvalidArgument("calibration chart needs at least one level");
  for (double f : empirical) {
    if (!std::isfinite(f) || f < 0.0 || f > 1.0) {
      throw InvalidArgument("empirical frequencies must lie in [0, 1]");
    }
  }
  Scale y{0.0, 1.0, kHeight - kMarginBottom, kMarginTop};
  double plot_w = kWidth - kMarginLeft - kMarginRight;
  double group_w = plot_w / static_cast<double>(levels_percent.size());
  double bar_w = group_w * 0.3;

  std::string out = document_open(title);
  for (std::size_t i = 0; i <= 4; ++i) {
    double f = static_cast<double>(i) / 4.0;
    double py = y(f);
    out += "<line x1=\"" + num(kMarginLeft) + "\" y1=\"" + num(py) + "\" x2=\"" +
           num(kWidth - kMarginRight) + "\" y2=\"" + num(py) +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + num(kMarginLeft - 8) + "\" y=\"" + num(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(f) + "</text>\n";
  }
  for (std::size_t i = 0; i < levels_percent.size(); ++i) {
    double cx = kMarginLeft + group_w * (static_cast<double>(i) + 0.5);
    double nominal = levels_percent[i] / 100.0;
    double y0 = y(0.0);
    out += "<rect x=\"" + num(cx - bar_w) + "\" y=\"" + num(y(nominal)) + "\" width=\"" +
           num(bar_w) + "\" height=\"" + num(y0 - y(nominal)) + "\" fill=\"#9e9e9e\"/>\n";
    out += "<rect x=\"" + num(cx) + "\" y=\"" + num(y(empirical[i])) + "\" width=\"" +
           num(bar_w) + "\" height=\"" + num(y0 - y(empirical[i])) + "\" fill=\"#1155cc\"/>\n";
    out += "<text x=\"" + num(cx) + "\" y=\"" + num(y0 + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           format_double(levels_percent[i]) + "%</text>\n";
  }
  out += "<rect x=\"" + num(kWidth - 200) + "\" y=\"" + num(kMarginTop) +
         "\" width=\"12\" height=\"12\" fill=\"#9e9e9e\"/>\n";
  out += "<text x=\"" + num(kWidth - 184) + "\" y=\"" + num(kMarginTop + 10) +
         "\" font-family=\"sans-serif\" font-size=\"12\">nominal</text>\n";
  out += "<rect x=\"" + num(kWidth - 110) + "\" y=\"" + num(kMarginTop) +
         "\" width=\"12\" height=\"12\" fill=\"#1155cc\"/>\n";
  out += "<text x=\"" + num(kWidth - 94) + "\" y=\"" + num(kMarginTop + 10) +
         "\" font-family=\"sans-serif\" font-size=\"12\">observed</text>\n";
  out += "</svg>\n";
  return out;
}

std::string svg_heatmap(const Eigen::MatrixXd& values, const std::string& title) {
  if (values.size() == 0) throw InvalidArgument("heatmap needs a non-empty matrix");
  if (!values.allFinite()) throw InvalidArgument("heatmap values must be finite");
  double lo = values.minCoeff();
  double hi = values.maxCoeff();
  double span = hi - lo;
  if (span == 0.0) span = 1.0;

  double plot_w = kWidth - kMarginLeft - kMarginRight - 60.0;  // room for the range labels
  double plot_h = kHeight - kMarginTop - kMarginBottom;
  double cell_w = plot_w / static_cast<double>(values.cols());
  double cell_h = plot_h / static_cast<double>(values.rows());

  std::string out = document_open(title);
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      double t = (values(i, j) - lo) / span;
      int r = static_cast<int>(std::lround(255.0 + t * (17.0 - 255.0)));
      int g = static_cast<int>(std::lround(255.0 + t * (85.0 - 255.0)));
      int b = static_cast<int>(std::lround(255.0 + t * (204.0 - 255.0)));
      out += "<rect x=\"" + num(kMarginLeft + cell_w * static_cast<double>(j)) + "\" y=\"" +
             num(kMarginTop + cell_h * static_cast<double>(i)) + "\" width=\"" +
             num(cell_w + 0.5) + "\" height=\"" + num(cell_h + 0.5) + "\" fill=\"rgb(" +
             std::to_string(r) + "," + std::to_string(g) + "," + std::to_string(b) + ")\"/>\n";
    }
  }
  out += "<text x=\"" + num(kWidth - 70) + "\" y=\"" + num(kMarginTop + 12) +
         "\" font-family=\"sans-serif\" font-size=\"11\">max " +
         escape_text(format_double(hi)) + "</text>\n";
  out += "<text x=\"" + num(kWidth - 70) + "\" y=\"" + num(kHeight - kMarginBottom) +
         "\" font-family=\"sans-serif\" font-size=\"11\">min " +
         escape_text(format_double(lo)) + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace phmgp
