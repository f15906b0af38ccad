#pragma once

#include <Eigen/Core>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "phmgp/paris.hpp"

namespace phmgp {

struct PolyBasisDescriptor {
  int order = 1;  // highest power; p = order + 1 monomials
};

struct ParisBasisDescriptor {
  ParisLawConfig config;
  bool direct_quadrature = false;  // bypass the cached interpolant
};

using BasisDescriptor = std::variant<PolyBasisDescriptor, ParisBasisDescriptor>;

/// Fixed family of scalar basis functions phi_1..phi_p used for per-trajectory
/// regression and for the inferred mean and covariance.
///
/// Polynomial bases are the monomials 1, x, ..., x^order and accept any finite
/// location.  Crack-growth bases hold one cycle-count curve per exponent,
/// defined on [initial_crack, width / 2); they evaluate against raw locations
/// (raw_domain() is true) and are precomputed on a dense grid with cubic
/// Hermite interpolation between nodes unless direct quadrature is requested.
class BasisSet {
 public:
  static std::shared_ptr<const BasisSet> polynomial(int order);
  static std::shared_ptr<const BasisSet> paris(const ParisLawConfig& cfg,
                                               bool direct_quadrature = false);

  int size() const noexcept { return p_; }
  bool raw_domain() const noexcept;
  const BasisDescriptor& descriptor() const noexcept { return descriptor_; }

  /// Inclusive-exclusive evaluation domain [lo, hi); monomial bases are
  /// unbounded (infinite limits).
  double domain_lo() const noexcept { return domain_lo_; }
  double domain_hi() const noexcept { return domain_hi_; }

  double eval(int k, double x) const;
  double deriv(int k, double x) const;
  Eigen::VectorXd eval_all(double x) const;
  Eigen::VectorXd deriv_all(double x) const;

  /// Rows phi(x)^T for each location; the regression design matrix.
  Eigen::MatrixXd design(std::span<const double> xs) const;

 private:
  struct CurveTable {
    double prefactor = 1.0;
    std::vector<double> value;  // cycle counts at the grid nodes
    std::vector<double> deriv;  // exact reciprocal growth rates at the nodes
  };

  explicit BasisSet(BasisDescriptor d);
  void build_paris_tables();
  void check_conditioning() const;
  double paris_eval(int k, double a) const;
  double paris_deriv(int k, double a) const;
  void check_domain(double x) const;

  BasisDescriptor descriptor_;
  int p_ = 0;
  double domain_lo_;
  double domain_hi_;
  // cached interpolation grid (crack-growth bases only)
  double grid_lo_ = 0.0;
  double grid_step_ = 0.0;
  std::vector<CurveTable> tables_;

  static constexpr int kGridPoints = 2048;
  static constexpr double kConditionLimit = 1e12;
};

/// Condition number of the column-scaled design matrix on a probe grid; the
/// value checked against the construction gate.
double basis_condition_number(const BasisSet& basis);

}  // namespace phmgp
