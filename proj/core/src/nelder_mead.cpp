#include "phmgp/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phmgp/errors.hpp"

namespace phmgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double guarded_eval(const std::function<double(const Eigen::VectorXd&)>& f,
                    const Eigen::VectorXd& x) {
  try {
    double v = f(x);
    return std::isfinite(v) ? v : kNegInf;
  } catch (...) {
    return kNegInf;
  }
}

}  // namespace

NelderMeadResult nelder_mead_maximize(
    const std::function<double(const Eigen::VectorXd&)>& objective, const Eigen::VectorXd& start,
    const NelderMeadOptions& opts) {
  const Eigen::Index dim = start.size();
  if (dim == 0) throw InvalidArgument("optimizer start point must be non-empty");

  const int vertex_count = static_cast<int>(dim) + 1;
  std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(vertex_count), start);
  std::vector<double> fs(static_cast<std::size_t>(vertex_count));
  for (int i = 1; i < vertex_count; ++i) {
    double step = opts.initial_step * std::max(1.0, std::abs(start(i - 1)));
    xs[static_cast<std::size_t>(i)](i - 1) += step;
  }
  for (int i = 0; i < vertex_count; ++i) {
    fs[static_cast<std::size_t>(i)] = guarded_eval(objective, xs[static_cast<std::size_t>(i)]);
  }

  std::vector<int> order(static_cast<std::size_t>(vertex_count));
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return fs[static_cast<std::size_t>(a)] > fs[static_cast<std::size_t>(b)];
    });
  };

  NelderMeadResult result;
  result.best_trace.reserve(static_cast<std::size_t>(opts.max_iterations));

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    sort_vertices();
    int best = order[0];
    int worst = order[static_cast<std::size_t>(vertex_count - 1)];
    int second_worst = order[static_cast<std::size_t>(vertex_count - 2)];

    double spread = fs[static_cast<std::size_t>(best)] - fs[static_cast<std::size_t>(worst)];
    if (std::isfinite(spread) && spread < opts.spread_tolerance) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < vertex_count; ++i) {
      if (i == worst) continue;
      centroid += xs[static_cast<std::size_t>(i)];
    }
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd& xw = xs[static_cast<std::size_t>(worst)];
    Eigen::VectorXd reflected = centroid + (centroid - xw);
    double fr = guarded_eval(objective, reflected);

    if (fr > fs[static_cast<std::size_t>(best)]) {
      Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xw);
      double fe = guarded_eval(objective, expanded);
      if (fe > fr) {
        xs[static_cast<std::size_t>(worst)] = std::move(expanded);
        fs[static_cast<std::size_t>(worst)] = fe;
      } else {
        xs[static_cast<std::size_t>(worst)] = std::move(reflected);
        fs[static_cast<std::size_t>(worst)] = fr;
      }
    } else if (fr > fs[static_cast<std::size_t>(second_worst)]) {
      xs[static_cast<std::size_t>(worst)] = std::move(reflected);
      fs[static_cast<std::size_t>(worst)] = fr;
    } else {
      bool outside = fr > fs[static_cast<std::size_t>(worst)];
      Eigen::VectorXd contracted =
          outside ? centroid + 0.5 * (reflected - centroid) : centroid + 0.5 * (xw - centroid);
      double fc = guarded_eval(objective, contracted);
      double reference = outside ? fr : fs[static_cast<std::size_t>(worst)];
      if (fc >= reference) {
        xs[static_cast<std::size_t>(worst)] = std::move(contracted);
        fs[static_cast<std::size_t>(worst)] = fc;
      } else {
        // shrink toward the best vertex
        const Eigen::VectorXd xb = xs[static_cast<std::size_t>(best)];
        for (int i = 0; i < vertex_count; ++i) {
          if (i == best) continue;
          xs[static_cast<std::size_t>(i)] = xb + 0.5 * (xs[static_cast<std::size_t>(i)] - xb);
          fs[static_cast<std::size_t>(i)] = guarded_eval(objective, xs[static_cast<std::size_t>(i)]);
        }
      }
    }

    double best_now = *std::max_element(fs.begin(), fs.end());
    if (!result.best_trace.empty()) best_now = std::max(best_now, result.best_trace.back());
    result.best_trace.push_back(best_now);
  }

  sort_vertices();
  int best = order[0];
  result.x = xs[static_cast<std::size_t>(best)];
  result.value = fs[static_cast<std::size_t>(best)];
  result.iterations = iter;
  return result;
}

}  // namespace phmgp
