#include "phmgp/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "phmgp/errors.hpp"

namespace phmgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)

void require_finite_span(std::span<const double> xs, const char* what) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " must be finite");
  }
}

/// Coordinate a basis-backed term evaluates at: raw-domain bases see raw
/// locations, everything else standardized ones.
double basis_coord(const BasisSet& basis, double u, const Standardization& s) {
  return basis.raw_domain() ? s.to_x(u) : u;
}

}  // namespace

GpModel::GpModel(MeanFn mean, CovFn cov, NoiseFn noise, Standardization standardization)
    : mean_(std::move(mean)), cov_(std::move(cov)), noise_(std::move(noise)),
      std_(standardization) {
  validate();
}

void GpModel::validate() const {
  if (!(std_.x_scale > 0.0) || !(std_.y_scale > 0.0)) {
    throw InvalidArgument("standardization scales must be positive");
  }
  if (const auto* pm = std::get_if<PolyMeanFn>(&mean_)) {
    if (pm->coeffs.size() == 0) throw InvalidArgument("polynomial mean needs coefficients");
  } else if (const auto* bm = std::get_if<BasisMeanFn>(&mean_)) {
    if (!bm->basis) throw InvalidArgument("basis mean needs a basis");
    if (bm->mu.size() != bm->basis->size()) {
      throw InvalidArgument("basis mean coefficient count does not match the basis size");
    }
  }
  if (const auto* se = std::get_if<SeCovFn>(&cov_)) {
    if (!(se->sigma_f > 0.0) || !(se->ell > 0.0)) {
      throw InvalidArgument("squared-exponential parameters must be positive");
    }
  } else if (const auto* po = std::get_if<PolyCovFn>(&cov_)) {
    if (po->q < 1) throw InvalidArgument("polynomial kernel degree must be at least 1");
    if (!(po->sigma_f > 0.0) || !(po->b > 0.0)) {
      throw InvalidArgument("polynomial kernel parameters must be positive");
    }
  } else if (const auto* bc = std::get_if<BasisCovFn>(&cov_)) {
    if (!bc->basis) throw InvalidArgument("basis covariance needs a basis");
    if (bc->sigma.rows() != bc->basis->size() || bc->sigma.cols() != bc->basis->size()) {
      throw InvalidArgument("basis covariance shape does not match the basis size");
    }
  }
  if (const auto* cn = std::get_if<ConstantNoise>(&noise_)) {
    if (!(cn->sigma_y >= 0.0) || !std::isfinite(cn->sigma_y)) {
      throw InvalidArgument("observation noise must be finite and non-negative");
    }
  } else if (const auto* sn = std::get_if<ScaledNoise>(&noise_)) {
    if (!(sn->sigma_x >= 0.0) || !std::isfinite(sn->sigma_x)) {
      throw InvalidArgument("slope-scaled noise factor must be finite and non-negative");
    }
  }
}

double GpModel::mean_std(double u) const {
  if (std::holds_alternative<ZeroMean>(mean_)) return 0.0;
  if (const auto* pm = std::get_if<PolyMeanFn>(&mean_)) {
    return mean_poly(u, {pm->coeffs.data(), static_cast<std::size_t>(pm->coeffs.size())});
  }
  const auto& bm = std::get<BasisMeanFn>(mean_);
  return bm.basis->eval_all(basis_coord(*bm.basis, u, std_)).dot(bm.mu);
}

double GpModel::mean_deriv_std(double u) const {
  if (std::holds_alternative<ZeroMean>(mean_)) return 0.0;
  if (const auto* pm = std::get_if<PolyMeanFn>(&mean_)) {
    return mean_poly_deriv(u, {pm->coeffs.data(), static_cast<std::size_t>(pm->coeffs.size())});
  }
  const auto& bm = std::get<BasisMeanFn>(mean_);
  double slope = bm.basis->deriv_all(basis_coord(*bm.basis, u, std_)).dot(bm.mu);
  // raw-domain bases differentiate in x; chain rule back to u
  return bm.basis->raw_domain() ? slope * std_.x_scale : slope;
}

double GpModel::cov_std(double u1, double u2) const {
  if (const auto* se = std::get_if<SeCovFn>(&cov_)) {
    return kernel_se(u1, u2, {se->sigma_f, se->ell, 0.0});
  }
  if (const auto* po = std::get_if<PolyCovFn>(&cov_)) {
    return kernel_poly(u1, u2, {po->q, po->sigma_f, po->b, 0.0});
  }
  const auto& bc = std::get<BasisCovFn>(cov_);
  Eigen::VectorXd p1 = bc.basis->eval_all(basis_coord(*bc.basis, u1, std_));
  Eigen::VectorXd p2 = bc.basis->eval_all(basis_coord(*bc.basis, u2, std_));
  return p1.dot(bc.sigma * p2);
}

double GpModel::noise_var_std(double u) const {
  if (const auto* cn = std::get_if<ConstantNoise>(&noise_)) return cn->sigma_y * cn->sigma_y;
  const auto& sn = std::get<ScaledNoise>(noise_);
  double sd = sn.sigma_x / std_.x_scale * std::abs(mean_deriv_std(u));
  return sd * sd;
}

double GpModel::mean(double x) const { return std_.to_y(mean_std(std_.to_u(x))); }

double GpModel::cov(double x, double xp) const {
  return std_.y_scale * std_.y_scale * cov_std(std_.to_u(x), std_.to_u(xp));
}

double GpModel::noise_sd(double x) const {
  return std_.y_scale * std::sqrt(noise_var_std(std_.to_u(x)));
}

namespace {

std::vector<double> standardize_all(std::span<const double> xs, const Standardization& s) {
  std::vector<double> us(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) us[i] = s.to_u(xs[i]);
  return us;
}

/// Noise-free covariance between two location sets, with the basis design
/// matrices hoisted out of the pair loop when the covariance is basis-backed.
Eigen::MatrixXd cross_cov_std(const GpModel& model, std::span<const double> us_a,
                              std::span<const double> us_b) {
  const Eigen::Index na = static_cast<Eigen::Index>(us_a.size());
  const Eigen::Index nb = static_cast<Eigen::Index>(us_b.size());
  Eigen::MatrixXd out(na, nb);
  if (const auto* bc = std::get_if<BasisCovFn>(&model.cov_fn())) {
    const auto& s = model.standardization();
    Eigen::MatrixXd pa(na, bc->basis->size());
    Eigen::MatrixXd pb(nb, bc->basis->size());
    for (Eigen::Index i = 0; i < na; ++i) {
      pa.row(i) =
          bc->basis->eval_all(basis_coord(*bc->basis, us_a[static_cast<std::size_t>(i)], s));
    }
    for (Eigen::Index j = 0; j < nb; ++j) {
      pb.row(j) =
          bc->basis->eval_all(basis_coord(*bc->basis, us_b[static_cast<std::size_t>(j)], s));
    }
    out.noalias() = pa * bc->sigma * pb.transpose();
    return out;
  }
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j) {
      out(i, j) =
          model.cov_std(us_a[static_cast<std::size_t>(i)], us_b[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Eigen::MatrixXd gram_std(const GpModel& model, std::span<const double> us, bool add_noise) {
  const Eigen::Index n = static_cast<Eigen::Index>(us.size());
  Eigen::MatrixXd k(n, n);
  if (std::holds_alternative<BasisCovFn>(model.cov_fn())) {
    Eigen::MatrixXd full = cross_cov_std(model, us, us);
    // mirror the upper triangle so the result is symmetric to the bit
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        k(i, j) = full(i, j);
        k(j, i) = full(i, j);
      }
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        double v = model.cov_std(us[static_cast<std::size_t>(i)], us[static_cast<std::size_t>(j)]);
        k(i, j) = v;
        k(j, i) = v;
      }
    }
  }
  if (add_noise) {
    for (Eigen::Index i = 0; i < n; ++i) {
      k(i, i) += model.noise_var_std(us[static_cast<std::size_t>(i)]);
    }
  }
  return k;
}

}  // namespace

Eigen::MatrixXd gram(std::span<const double> xs, const GpModel& model, bool add_noise) {
  require_finite_span(xs, "gram locations");
  std::vector<double> us = standardize_all(xs, model.standardization());
  return gram_std(model, us, add_noise);
}

CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& K) {
  if (K.rows() != K.cols() || K.rows() == 0) {
    throw InvalidArgument("Cholesky needs a nonempty square matrix");
  }
  double diag_scale = K.diagonal().mean();
  if (!(diag_scale > 0.0) || !std::isfinite(diag_scale)) diag_scale = 1.0;
  constexpr double kLambdas[] = {0.0, 1e-12, 1e-10, 1e-8, 1e-6};
  double jitter = 0.0;
  for (double lambda : kLambdas) {
    jitter = lambda * diag_scale;
    Eigen::MatrixXd A = K;
    A.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd L = llt.matrixL();
    if ((L.diagonal().array() > 0.0).all() && L.diagonal().allFinite()) {
      return {std::move(L), jitter};
    }
  }
  throw NumericalError("Cholesky factorization failed with final jitter " + std::to_string(jitter),
                       jitter);
}

double log_marginal_likelihood(const GpModel& model, std::span<const double> xs,
                               std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("xs and ys must have equal length");
  if (xs.empty()) throw InvalidArgument("log marginal likelihood needs at least one observation");
  require_finite_span(xs, "observation locations");
  require_finite_span(ys, "observation values");
  const auto& s = model.standardization();
  std::vector<double> us = standardize_all(xs, s);
  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i) = s.to_v(ys[static_cast<std::size_t>(i)]) - model.mean_std(us[static_cast<std::size_t>(i)]);
  }
  CholeskyResult chol = cholesky_with_jitter(gram_std(model, us, true));
  Eigen::VectorXd alpha = chol.L.triangularView<Eigen::Lower>().solve(r);
  double lml = -0.5 * alpha.squaredNorm() - chol.L.diagonal().array().log().sum() -
               0.5 * static_cast<double>(n) * kLog2Pi;
  // de-standardization: each of the n observations was scaled by 1 / y_scale
  return lml - static_cast<double>(n) * std::log(s.y_scale);
}

PosteriorPrediction posterior(const GpModel& model, std::span<const double> xs_obs,
                              std::span<const double> ys_obs, std::span<const double> xs_query,
                              const PosteriorOptions& opts) {
  if (xs_obs.size() != ys_obs.size()) throw InvalidArgument("xs and ys must have equal length");
  if (xs_obs.empty()) throw InvalidArgument("posterior needs at least one observation");
  if (xs_query.empty()) throw InvalidArgument("posterior needs at least one query location");
  require_finite_span(xs_obs, "observation locations");
  require_finite_span(ys_obs, "observation values");
  require_finite_span(xs_query, "query locations");

  const auto& s = model.standardization();
  std::vector<double> us = standardize_all(xs_obs, s);
  std::vector<double> uq = standardize_all(xs_query, s);
  const Eigen::Index n = static_cast<Eigen::Index>(us.size());
  const Eigen::Index q = static_cast<Eigen::Index>(uq.size());

  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i) = s.to_v(ys_obs[static_cast<std::size_t>(i)]) -
           model.mean_std(us[static_cast<std::size_t>(i)]);
  }
  CholeskyResult chol = cholesky_with_jitter(gram_std(model, us, true));
  Eigen::VectorXd alpha = chol.L.triangularView<Eigen::Lower>().solve(r);
  Eigen::MatrixXd cross = cross_cov_std(model, us, uq);
  Eigen::MatrixXd a = chol.L.triangularView<Eigen::Lower>().solve(cross);

  double mean_gram_diag = 1.0;
  {
    double d = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) d += model.cov_std(us[static_cast<std::size_t>(i)], us[static_cast<std::size_t>(i)]);
    mean_gram_diag = std::max(1e-300, d / static_cast<double>(n));
  }

  PosteriorPrediction out;
  out.jitter = chol.jitter;
  out.xs = Eigen::Map<const Eigen::VectorXd>(xs_query.data(), q);
  out.mean.resize(q);
  out.var.resize(q);
  const double y_var_scale = s.y_scale * s.y_scale;
  for (Eigen::Index j = 0; j < q; ++j) {
    double u = uq[static_cast<std::size_t>(j)];
    double prior = model.cov_std(u, u);
    double v = prior - a.col(j).squaredNorm();
    if (opts.predictive_noise) v += model.noise_var_std(u);
    double tol = 1e-8 * std::max(prior, mean_gram_diag);
    if (v < -tol) {
      throw NumericalError("posterior variance " + std::to_string(v) +
                               " below the jitter tolerance at query index " + std::to_string(j),
                           chol.jitter);
    }
    if (v < 0.0) v = 0.0;
    out.mean(j) = s.to_y(model.mean_std(u) + a.col(j).dot(alpha));
    out.var(j) = y_var_scale * v;
  }
  if (opts.full_covariance) {
    Eigen::MatrixXd kq = cross_cov_std(model, uq, uq);
    Eigen::MatrixXd post = kq - a.transpose() * a;
    post = 0.5 * (post + post.transpose());
    if (opts.predictive_noise) {
      for (Eigen::Index j = 0; j < q; ++j) {
        post(j, j) += model.noise_var_std(uq[static_cast<std::size_t>(j)]);
      }
    }
    out.cov = y_var_scale * post;
  }
  return out;
}

}  // namespace phmgp
