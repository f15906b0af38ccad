#include "phmgp/igpm.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "phmgp/errors.hpp"
#include "phmgp/optimize.hpp"

namespace phmgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kLogNoiseLo = -13.815510557964274;  // log(1e-6)
constexpr double kLogNoiseHi = 4.605170185988092;    // log(1e2)

std::vector<double> basis_locations(const Trajectory& t, const BasisSet& basis,
                                    const Standardization& s) {
  if (basis.raw_domain()) return t.xs;
  std::vector<double> us(t.xs.size());
  for (std::size_t i = 0; i < us.size(); ++i) us[i] = s.to_u(t.xs[i]);
  return us;
}

Eigen::VectorXd standardized_values(const Trajectory& t, const Standardization& s) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(t.ys.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = s.to_v(t.ys[static_cast<std::size_t>(i)]);
  return v;
}

template <class Fn>
auto with_trajectory_context(const Trajectory& t, Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError("trajectory '" + t.id + "': " + e.what());
  } catch (const QuadratureError& e) {
    throw QuadratureError("trajectory '" + t.id + "': " + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("trajectory '" + t.id + "': " + e.what());
  }
}

}  // namespace

GpModel IgpmModel::gp() const {
  return GpModel(BasisMeanFn{basis, stats.mu}, BasisCovFn{basis, stats.sigma}, noise,
                 standardization);
}

Eigen::VectorXd fit_coefficients(const Trajectory& t, const BasisSet& basis,
                                 const Standardization& s) {
  validate_trajectory(t);
  return with_trajectory_context(t, [&] {
    std::vector<double> locs = basis_locations(t, basis, s);
    Eigen::MatrixXd phi = basis.design(locs);
    Eigen::VectorXd v = standardized_values(t, s);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    return Eigen::VectorXd(svd.solve(v));
  });
}

CoefficientStats coefficient_stats(const Eigen::MatrixXd& columns) {
  const Eigen::Index p = columns.rows();
  const Eigen::Index m = columns.cols();
  if (p < 1) throw InvalidArgument("coefficient columns must be non-empty");
  if (m < 2) {
    throw InsufficientTrajectories("coefficient statistics need at least 2 trajectories, got " +
                                   std::to_string(m));
  }
  CoefficientStats stats;
  stats.trajectory_count = static_cast<int>(m);
  stats.mu = columns.rowwise().mean();
  Eigen::MatrixXd centered = columns.colwise() - stats.mu;
  Eigen::MatrixXd outer = centered * centered.transpose() / static_cast<double>(m - 1);
  // mirror the upper triangle so the covariance is symmetric to the bit
  stats.sigma.resize(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i; j < p; ++j) {
      stats.sigma(i, j) = outer(i, j);
      stats.sigma(j, i) = outer(i, j);
    }
  }
  if (m <= p) {
    stats.perturbation = 1e-8 * stats.sigma.trace() / static_cast<double>(p);
    stats.sigma.diagonal().array() += stats.perturbation;
  }
  return stats;
}

double observation_error_rms(std::span<const Trajectory> previous, const BasisSet& basis,
                             const Eigen::MatrixXd& coefficient_columns,
                             const Standardization& s) {
  const Eigen::Index m = coefficient_columns.cols();
  if (static_cast<std::size_t>(m) != previous.size()) {
    throw InvalidArgument("coefficient column count must match the trajectory count");
  }
  double acc = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Trajectory& t = previous[static_cast<std::size_t>(j)];
    std::vector<double> locs = basis_locations(t, basis, s);
    Eigen::MatrixXd phi = basis.design(locs);
    Eigen::VectorXd r = standardized_values(t, s) - phi * coefficient_columns.col(j);
    acc += r.squaredNorm() / static_cast<double>(t.size());
  }
  return std::sqrt(acc / static_cast<double>(m));
}

NoiseSearchResult observation_error_ml(std::span<const Trajectory> previous,
                                       const std::shared_ptr<const BasisSet>& basis,
                                       const CoefficientStats& stats, const Standardization& s) {
  if (previous.empty()) throw InvalidArgument("noise estimation needs at least one trajectory");
  auto objective = [&](double log_sigma) {
    GpModel model(BasisMeanFn{basis, stats.mu}, BasisCovFn{basis, stats.sigma},
                  ConstantNoise{std::exp(log_sigma)}, s);
    double acc = 0.0;
    for (const Trajectory& t : previous) {
      acc += log_marginal_likelihood(model, t.xs, t.ys);
    }
    return acc;
  };
  GoldenSectionResult best = golden_section_maximize(objective, kLogNoiseLo, kLogNoiseHi, 1e-4);
  return {std::exp(best.x), best.at_lower_bound};
}

NoiseSearchResult scaled_error_ml(std::span<const Trajectory> previous,
                                  const std::shared_ptr<const BasisSet>& basis,
                                  const CoefficientStats& stats, const Standardization& s) {
  if (previous.empty()) throw InvalidArgument("noise estimation needs at least one trajectory");
  struct LastPoint {
    double u;
    double r;
  };
  std::vector<LastPoint> last;
  last.reserve(previous.size());
  GpModel mean_only(BasisMeanFn{basis, stats.mu}, BasisCovFn{basis, stats.sigma},
                    ConstantNoise{0.0}, s);
  for (const Trajectory& t : previous) {
    double u = s.to_u(t.xs.back());
    last.push_back({u, s.to_v(t.ys.back()) - mean_only.mean_std(u)});
  }
  // the searched factor is sigma_x / x_scale, so the bracket matches the
  // standardized range used by the constant-noise search
  auto objective = [&](double log_factor) {
    GpModel model(BasisMeanFn{basis, stats.mu}, BasisCovFn{basis, stats.sigma},
                  ScaledNoise{std::exp(log_factor) * s.x_scale}, s);
    double acc = 0.0;
    for (const LastPoint& lp : last) {
      double k = model.cov_std(lp.u, lp.u) + model.noise_var_std(lp.u);
      if (!(k > 0.0)) return -std::numeric_limits<double>::infinity();
      acc += -0.5 * lp.r * lp.r / k - 0.5 * std::log(k) - 0.5 * kLog2Pi;
    }
    return acc;
  };
  GoldenSectionResult best = golden_section_maximize(objective, kLogNoiseLo, kLogNoiseHi, 1e-4);
  return {std::exp(best.x) * s.x_scale, best.at_lower_bound};
}

IgpmModel infer_model(std::span<const Trajectory> previous, std::shared_ptr<const BasisSet> basis,
                      const InferOptions& opts) {
  if (!basis) throw InvalidArgument("inference needs a basis");
  if (previous.size() < 2) {
    throw InsufficientTrajectories("inference needs at least 2 previous trajectories, got " +
                                   std::to_string(previous.size()));
  }
  Standardization s;
  if (opts.standardization) {
    s = *opts.standardization;
  } else {
    s = Standardization::fit(previous);
    // a raw-domain basis spans curves pinned at zero offset; shifting values
    // would push the data outside that span and bias every coefficient fit
    if (basis->raw_domain()) s.y_mean = 0.0;
  }

  Eigen::MatrixXd columns(basis->size(), static_cast<Eigen::Index>(previous.size()));
  for (std::size_t j = 0; j < previous.size(); ++j) {
    columns.col(static_cast<Eigen::Index>(j)) = fit_coefficients(previous[j], *basis, s);
  }

  IgpmModel model;
  model.basis = std::move(basis);
  model.stats = coefficient_stats(columns);
  model.standardization = s;
  if (opts.noise == NoiseModelKind::scaled) {
    NoiseSearchResult r = scaled_error_ml(previous, model.basis, model.stats, s);
    model.noise = ScaledNoise{r.sigma};
    model.noise_at_bound = r.at_lower_bound;
  } else if (opts.estimator == ErrorEstimator::marginal_likelihood) {
    NoiseSearchResult r = observation_error_ml(previous, model.basis, model.stats, s);
    model.noise = ConstantNoise{r.sigma};
    model.noise_at_bound = r.at_lower_bound;
  } else {
    model.noise = ConstantNoise{observation_error_rms(previous, *model.basis, columns, s)};
  }
  return model;
}

}  // namespace phmgp
