#include "phmgp/basis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "phmgp/errors.hpp"

namespace phmgp {

namespace {

constexpr int kProbes = 64;

/// Column-scaled design matrix on the probe grid used for conditioning checks.
Eigen::MatrixXd scaled_probe_design(const BasisSet& basis) {
  double lo, hi;
  if (basis.raw_domain()) {
    lo = basis.domain_lo();
    hi = basis.domain_hi() * (1.0 - 1e-9);
  } else {
    lo = -1.0;
    hi = 1.0;
  }
  Eigen::MatrixXd probe(kProbes, basis.size());
  for (int i = 0; i < kProbes; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / (kProbes - 1);
    probe.row(i) = basis.eval_all(x).transpose();
  }
  for (int k = 0; k < basis.size(); ++k) {
    double norm = probe.col(k).norm();
    if (norm > 0.0) probe.col(k) /= norm;
  }
  return probe;
}

double condition_of(const Eigen::MatrixXd& scaled) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

BasisSet::BasisSet(BasisDescriptor d) : descriptor_(std::move(d)) {
  if (const auto* poly = std::get_if<PolyBasisDescriptor>(&descriptor_)) {
    if (poly->order < 0) throw InvalidArgument("polynomial basis order must be non-negative");
    p_ = poly->order + 1;
    domain_lo_ = -std::numeric_limits<double>::infinity();
    domain_hi_ = std::numeric_limits<double>::infinity();
  } else {
    const auto& paris = std::get<ParisBasisDescriptor>(descriptor_);
    paris.config.validate();
    p_ = static_cast<int>(paris.config.exponents.size());
    domain_lo_ = paris.config.initial_crack;
    domain_hi_ = paris.config.max_crack();
    if (!paris.direct_quadrature) build_paris_tables();
  }
  check_conditioning();
}

std::shared_ptr<const BasisSet> BasisSet::polynomial(int order) {
  return std::shared_ptr<const BasisSet>(new BasisSet(PolyBasisDescriptor{order}));
}

std::shared_ptr<const BasisSet> BasisSet::paris(const ParisLawConfig& cfg, bool direct_quadrature) {
  return std::shared_ptr<const BasisSet>(new BasisSet(ParisBasisDescriptor{cfg, direct_quadrature}));
}

bool BasisSet::raw_domain() const noexcept {
  return std::holds_alternative<ParisBasisDescriptor>(descriptor_);
}

void BasisSet::build_paris_tables() {
  const auto& cfg = std::get<ParisBasisDescriptor>(descriptor_).config;
  grid_lo_ = cfg.initial_crack;
  // keep the last node strictly inside the domain so the cosine stays positive
  double grid_hi = cfg.max_crack() * (1.0 - 1e-9);
  grid_step_ = (grid_hi - grid_lo_) / static_cast<double>(kGridPoints - 1);
  tables_.resize(static_cast<std::size_t>(p_));
  for (int k = 0; k < p_; ++k) {
    double alpha = cfg.exponents[static_cast<std::size_t>(k)];
    auto rate = [&](double z) { return paris_cycles_deriv(z, alpha, cfg); };
    CurveTable& table = tables_[static_cast<std::size_t>(k)];
    table.value.resize(kGridPoints);
    table.deriv.resize(kGridPoints);
    table.value[0] = 0.0;
    table.deriv[0] = rate(grid_lo_);
    for (int i = 1; i < kGridPoints; ++i) {
      double a0 = grid_lo_ + grid_step_ * (i - 1);
      double a1 = grid_lo_ + grid_step_ * i;
      table.value[static_cast<std::size_t>(i)] =
          table.value[static_cast<std::size_t>(i - 1)] + adaptive_simpson(rate, a0, a1);
      table.deriv[static_cast<std::size_t>(i)] = rate(a1);
    }
  }
}

void BasisSet::check_domain(double x) const {
  if (!std::isfinite(x)) throw InvalidArgument("basis input must be finite");
  if (raw_domain() && (x < domain_lo_ || x >= domain_hi_)) {
    throw DomainError("crack length " + std::to_string(x) + " outside [" +
                      std::to_string(domain_lo_) + ", " + std::to_string(domain_hi_) + ")");
  }
}

double BasisSet::paris_eval(int k, double a) const {
  const auto& desc = std::get<ParisBasisDescriptor>(descriptor_);
  double alpha = desc.config.exponents[static_cast<std::size_t>(k)];
  if (desc.direct_quadrature) return paris_cycles(a, alpha, desc.config);
  const CurveTable& table = tables_[static_cast<std::size_t>(k)];
  int cell = static_cast<int>((a - grid_lo_) / grid_step_);
  cell = std::clamp(cell, 0, kGridPoints - 2);
  double t = (a - (grid_lo_ + grid_step_ * cell)) / grid_step_;
  double v0 = table.value[static_cast<std::size_t>(cell)];
  double v1 = table.value[static_cast<std::size_t>(cell + 1)];
  double d0 = table.deriv[static_cast<std::size_t>(cell)];
  double d1 = table.deriv[static_cast<std::size_t>(cell + 1)];
  double t2 = t * t;
  double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * v0 + (t3 - 2.0 * t2 + t) * grid_step_ * d0 +
         (-2.0 * t3 + 3.0 * t2) * v1 + (t3 - t2) * grid_step_ * d1;
}

double BasisSet::paris_deriv(int k, double a) const {
  const auto& desc = std::get<ParisBasisDescriptor>(descriptor_);
  double alpha = desc.config.exponents[static_cast<std::size_t>(k)];
  return paris_cycles_deriv(a, alpha, desc.config);
}

double BasisSet::eval(int k, double x) const {
  if (k < 0 || k >= p_) throw InvalidArgument("basis index out of range");
  check_domain(x);
  if (raw_domain()) return paris_eval(k, x);
  double acc = 1.0;
  for (int i = 0; i < k; ++i) acc *= x;
  return acc;
}

double BasisSet::deriv(int k, double x) const {
  if (k < 0 || k >= p_) throw InvalidArgument("basis index out of range");
  check_domain(x);
  if (raw_domain()) return paris_deriv(k, x);
  if (k == 0) return 0.0;
  double acc = static_cast<double>(k);
  for (int i = 0; i < k - 1; ++i) acc *= x;
  return acc;
}

Eigen::VectorXd BasisSet::eval_all(double x) const {
  Eigen::VectorXd phi(p_);
  for (int k = 0; k < p_; ++k) phi(k) = eval(k, x);
  return phi;
}

Eigen::VectorXd BasisSet::deriv_all(double x) const {
  Eigen::VectorXd dphi(p_);
  for (int k = 0; k < p_; ++k) dphi(k) = deriv(k, x);
  return dphi;
}

Eigen::MatrixXd BasisSet::design(std::span<const double> xs) const {
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(xs.size()), p_);
  for (Eigen::Index i = 0; i < phi.rows(); ++i) {
    phi.row(i) = eval_all(xs[static_cast<std::size_t>(i)]).transpose();
  }
  return phi;
}

void BasisSet::check_conditioning() const {
  Eigen::MatrixXd scaled = scaled_probe_design(*this);
  double cond = condition_of(scaled);
  if (cond < kConditionLimit) return;
  int worst_i = 0, worst_j = p_ > 1 ? 1 : 0;
  double worst = -1.0;
  for (int i = 0; i < p_; ++i) {
    for (int j = i + 1; j < p_; ++j) {
      double c = std::abs(scaled.col(i).dot(scaled.col(j)));
      if (c > worst) {
        worst = c;
        worst_i = i;
        worst_j = j;
      }
    }
  }
  std::string li, lj;
  if (raw_domain()) {
    const auto& cfg = std::get<ParisBasisDescriptor>(descriptor_).config;
    li = "alpha=" + std::to_string(cfg.exponents[static_cast<std::size_t>(worst_i)]);
    lj = "alpha=" + std::to_string(cfg.exponents[static_cast<std::size_t>(worst_j)]);
  } else {
    li = "x^" + std::to_string(worst_i);
    lj = "x^" + std::to_string(worst_j);
  }
  throw IllConditionedBasis("basis condition number " + std::to_string(cond) +
                            " exceeds 1e12; most collinear pair: " + li + ", " + lj);
}

double basis_condition_number(const BasisSet& basis) {
  return condition_of(scaled_probe_design(basis));
}

}  // namespace phmgp
