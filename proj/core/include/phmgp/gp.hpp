#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <span>
#include <variant>

#include "phmgp/basis.hpp"
#include "phmgp/kernels.hpp"
#include "phmgp/standardize.hpp"

namespace phmgp {

// --- mean functions (evaluated in standardized coordinates unless the
// --- attached basis declares a raw domain) ---

struct ZeroMean {};

struct PolyMeanFn {
  Eigen::VectorXd coeffs;  // constant term first
};

struct BasisMeanFn {
  std::shared_ptr<const BasisSet> basis;
  Eigen::VectorXd mu;  // coefficient mean
};

using MeanFn = std::variant<ZeroMean, PolyMeanFn, BasisMeanFn>;

// --- noise-free covariance functions ---

struct SeCovFn {
  double sigma_f = 1.0;
  double ell = 1.0;
};

struct PolyCovFn {
  int q = 1;
  double sigma_f = 1.0;
  double b = 1.0;
};

struct BasisCovFn {
  std::shared_ptr<const BasisSet> basis;
  Eigen::MatrixXd sigma;  // coefficient covariance
};

using CovFn = std::variant<SeCovFn, PolyCovFn, BasisCovFn>;

// --- observation noise models ---

struct ConstantNoise {
  double sigma_y = 0.0;  // standard deviation in standardized units
};

/// Standard deviation proportional to the local mean slope:
/// sigma(x) = sigma_x * |dm/dx| in raw units.
struct ScaledNoise {
  double sigma_x = 0.0;
};

using NoiseFn = std::variant<ConstantNoise, ScaledNoise>;

/// A Gaussian process fixed by its mean, covariance, and noise model plus the
/// standardization all internal arithmetic runs in.  Raw-domain bases (crack
/// growth) are fed raw locations; everything else sees standardized ones.
class GpModel {
 public:
  GpModel(MeanFn mean, CovFn cov, NoiseFn noise,
          Standardization standardization = Standardization::identity());

  // standardized-coordinate surface used by gram / likelihood / posterior
  double mean_std(double u) const;
  double mean_deriv_std(double u) const;  // d mean_std / du
  double cov_std(double u1, double u2) const;
  double noise_var_std(double u) const;

  // raw-coordinate convenience surface
  double mean(double x) const;
  double cov(double x, double xp) const;
  double noise_sd(double x) const;

  const Standardization& standardization() const noexcept { return std_; }
  const MeanFn& mean_fn() const noexcept { return mean_; }
  const CovFn& cov_fn() const noexcept { return cov_; }
  const NoiseFn& noise_fn() const noexcept { return noise_; }

 private:
  void validate() const;

  MeanFn mean_;
  CovFn cov_;
  NoiseFn noise_;
  Standardization std_;
};

/// Covariance matrix of the model over the raw locations, evaluated in
/// standardized coordinates, with the noise variance added on the diagonal
/// unless disabled.  Built symmetric by construction (upper triangle
/// mirrored).
Eigen::MatrixXd gram(std::span<const double> xs, const GpModel& model, bool add_noise = true);

/// Cholesky factor with escalating diagonal jitter.  Tries no jitter first,
/// then lambda * mean(diag) for lambda in {1e-12, 1e-10, 1e-8, 1e-6}; throws
/// NumericalError carrying the final jitter if all attempts fail.
struct CholeskyResult {
  Eigen::MatrixXd L;
  double jitter = 0.0;  // absolute value added to the diagonal
};
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& K);

/// Log marginal likelihood of the raw observations under the model,
/// log p(y | x) = -r^T K^-1 r / 2 - log det K / 2 - n log(2 pi) / 2,
/// computed through the jittered Cholesky factor in standardized coordinates
/// and corrected back to the raw data scale.
double log_marginal_likelihood(const GpModel& model, std::span<const double> xs,
                               std::span<const double> ys);

struct PosteriorOptions {
  bool predictive_noise = false;  // add observation noise to query variances
  bool full_covariance = false;
};

struct PosteriorPrediction {
  Eigen::VectorXd xs;    // query locations (raw)
  Eigen::VectorXd mean;  // posterior mean (raw units)
  Eigen::VectorXd var;   // posterior variance (raw units), non-negative
  std::optional<Eigen::MatrixXd> cov;  // full posterior covariance if requested
  double jitter = 0.0;   // diagonal jitter the factorization needed
};

/// Posterior of the latent function at the query locations given the
/// observations.  Variances within jitter tolerance below zero clamp to
/// zero; larger negative values raise NumericalError.
PosteriorPrediction posterior(const GpModel& model, std::span<const double> xs_obs,
                              std::span<const double> ys_obs, std::span<const double> xs_query,
                              const PosteriorOptions& opts = {});

}  // namespace phmgp
