#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phmgp/gp.hpp"
#include "phmgp/nelder_mead.hpp"
#include "phmgp/trajectory.hpp"

namespace phmgp {

enum class MeanKind { zero, polynomial };
enum class CovKind { squared_exponential, polynomial };

struct ModelFamily {
  MeanKind mean = MeanKind::zero;
  CovKind cov = CovKind::squared_exponential;
  int order = 1;  // polynomial kernel degree and mean degree
};

/// Free parameters of a trainable family.  Positive scalars are optimized on
/// their logarithms; mean coefficients stay linear and act on standardized
/// coordinates.
struct Hyperparameters {
  double sigma_f = 1.0;
  double length_scale = 1.0;  // squared-exponential covariance only
  double offset = 1.0;        // polynomial covariance only
  double sigma_y = 0.1;
  Eigen::VectorXd mean_coeffs;  // order + 1 entries when the mean is polynomial

  /// Throws InvalidArgument unless every parameter the family uses is
  /// positive (finite for coefficients) and the coefficient count matches.
  void validate(const ModelFamily& family) const;
};

int packed_size(const ModelFamily& family);
Eigen::VectorXd pack(const ModelFamily& family, const Hyperparameters& hp);
Hyperparameters unpack(const ModelFamily& family, const Eigen::VectorXd& packed);

GpModel make_model(const ModelFamily& family, const Hyperparameters& hp,
                   const Standardization& s = Standardization::identity());

struct StartReport {
  Eigen::VectorXd start;  // packed start point
  double value = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool failed = false;     // objective unusable at the start point
  std::string diagnostic;  // failure reason when failed
};

struct OptimizationReport {
  ModelFamily family;
  Standardization standardization;
  Hyperparameters best;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<StartReport> starts;  // provided/canonical start first, restarts after
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;

  GpModel model() const { return make_model(family, best, standardization); }
};

struct TrainOptions {
  int extra_starts = 7;  // random restarts beyond the first start
  std::uint64_t seed = 0;
  NelderMeadOptions nelder_mead;
  std::optional<Standardization> standardization;  // default: fitted from the data
};

/// Maximizes the log marginal likelihood of one series, restarting from
/// positive parameters drawn log-uniform over [1e-2, 1e2] (mean coefficients
/// standard normal).  Throws TrainingFailed when every start is unusable.
OptimizationReport fit_current(const ModelFamily& family, std::span<const double> xs,
                               std::span<const double> ys, const Hyperparameters& start,
                               const TrainOptions& opts = {});

/// Maximizes the summed log marginal likelihood over whole previous
/// trajectories under one shared parameter set.
OptimizationReport fit_previous(const ModelFamily& family, std::span<const Trajectory> previous,
                                const TrainOptions& opts = {});

struct OrderCandidate {
  int order = 0;
  double mean_test_mse = std::numeric_limits<double>::quiet_NaN();
  int skipped = 0;  // trajectories too short to split
  bool feasible = false;
};

struct OrderSelection {
  int order = 0;
  std::vector<OrderCandidate> candidates;  // ascending by order
};

/// Polynomial order chosen by seeded per-trajectory 70/30 train/test splits,
/// minimizing the mean held-out MSE; ties keep the smaller order.
OrderSelection select_order(std::span<const Trajectory> previous,
                            std::span<const int> candidate_orders, std::uint64_t split_seed = 0);

}  // namespace phmgp
