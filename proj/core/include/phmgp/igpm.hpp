#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <span>

#include "phmgp/basis.hpp"
#include "phmgp/gp.hpp"
#include "phmgp/standardize.hpp"
#include "phmgp/trajectory.hpp"

namespace phmgp {

/// Sample moments of the per-trajectory regression coefficients.
struct CoefficientStats {
  Eigen::VectorXd mu;      // sample mean, length p
  Eigen::MatrixXd sigma;   // unbiased sample covariance, p x p, perturbation included
  int trajectory_count = 0;
  double perturbation = 0.0;  // diagonal shift applied when trajectories <= p
};

enum class ErrorEstimator { rms, marginal_likelihood };
enum class NoiseModelKind { constant, scaled };

/// Gaussian process whose mean and covariance are inferred from the
/// coefficient statistics of previously observed trajectories.
struct IgpmModel {
  std::shared_ptr<const BasisSet> basis;
  CoefficientStats stats;
  NoiseFn noise;
  Standardization standardization;
  bool noise_at_bound = false;  // noise search ended pinned at the lower bracket edge

  /// Assembles the equivalent process: mean phi(x)^T mu, covariance
  /// phi(x)^T sigma phi(x'), plus the stored noise model.
  GpModel gp() const;
};

/// Least-squares coefficients of one trajectory in the basis, minimum-norm
/// when the design matrix is rank-deficient (singular values below 1e-10
/// relative are truncated).  Values are standardized before fitting; a
/// raw-domain basis sees raw locations.
Eigen::VectorXd fit_coefficients(const Trajectory& t, const BasisSet& basis,
                                 const Standardization& s = Standardization::identity());

/// Sample mean (1/m) and unbiased covariance (1/(m-1)) over coefficient
/// columns.  With m <= p columns the covariance gains a diagonal shift of
/// 1e-8 * trace / p to stay usable as a prior.  Needs m >= 2.
CoefficientStats coefficient_stats(const Eigen::MatrixXd& columns);

/// Pooled constant observation noise: square root of the mean over
/// trajectories of each trajectory's residual mean square (standardized).
double observation_error_rms(std::span<const Trajectory> previous, const BasisSet& basis,
                             const Eigen::MatrixXd& coefficient_columns, const Standardization& s);

struct NoiseSearchResult {
  double sigma = 0.0;
  bool at_lower_bound = false;
};

/// Constant observation noise maximizing the summed log marginal likelihood
/// of the previous trajectories under the inferred mean and covariance.
/// Golden-section search on log sigma over [1e-6, 1e2] (standardized) with
/// tolerance 1e-4.
NoiseSearchResult observation_error_ml(std::span<const Trajectory> previous,
                                       const std::shared_ptr<const BasisSet>& basis,
                                       const CoefficientStats& stats, const Standardization& s);

/// Slope-scaled noise factor maximizing the summed log marginal likelihood of
/// each previous trajectory's final observation; same bracketed search on the
/// standardized factor.  Returns sigma in raw x units.
NoiseSearchResult scaled_error_ml(std::span<const Trajectory> previous,
                                  const std::shared_ptr<const BasisSet>& basis,
                                  const CoefficientStats& stats, const Standardization& s);

struct InferOptions {
  ErrorEstimator estimator = ErrorEstimator::rms;  // used by constant noise
  NoiseModelKind noise = NoiseModelKind::constant;
  std::optional<Standardization> standardization;  // default: fitted to the previous data
};

/// Full inference pipeline over the previous trajectories: per-trajectory
/// coefficients, their sample moments, and the observation-noise estimate.
IgpmModel infer_model(std::span<const Trajectory> previous,
                      std::shared_ptr<const BasisSet> basis, const InferOptions& opts = {});

}  // namespace phmgp
