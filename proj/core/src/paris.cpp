#include "phmgp/paris.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "phmgp/errors.hpp"

namespace phmgp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_exponent(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw InvalidArgument("growth exponent must be finite and non-negative");
  }
}

/// Reciprocal of the growth-rate power law without its constant prefactor:
/// (cos(pi z / width) / z) ^ (alpha / 2).
double cycle_integrand(double z, double alpha, const ParisLawConfig& cfg) {
  return std::pow(std::cos(kPi * z / cfg.width) / z, 0.5 * alpha);
}

double cycle_prefactor(double alpha, const ParisLawConfig& cfg) {
  return 1.0 / (cfg.growth_scale * std::pow(cfg.stress_range, alpha) * std::pow(kPi, 0.5 * alpha));
}

void require_in_domain(double a, const ParisLawConfig& cfg) {
  if (!std::isfinite(a) || a < cfg.initial_crack || a >= cfg.max_crack()) {
    throw DomainError("crack length " + std::to_string(a) + " outside [" +
                      std::to_string(cfg.initial_crack) + ", " + std::to_string(cfg.max_crack()) +
                      ")");
  }
}

}  // namespace

void ParisLawConfig::validate() const {
  if (!std::isfinite(width) || width <= 0.0) throw InvalidArgument("plate width must be positive");
  if (!std::isfinite(initial_crack) || initial_crack <= 0.0 || initial_crack >= max_crack()) {
    throw InvalidArgument("initial crack length must lie in (0, width / 2)");
  }
  if (!std::isfinite(stress_range) || stress_range <= 0.0) {
    throw InvalidArgument("stress range must be positive");
  }
  if (!std::isfinite(growth_scale) || growth_scale <= 0.0) {
    throw InvalidArgument("growth scale must be positive");
  }
  if (exponents.empty()) throw InvalidArgument("at least one growth exponent is required");
  for (double alpha : exponents) require_exponent(alpha);
}

double stress_intensity_range(double a, const ParisLawConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(a) || a < 0.0 || a >= cfg.max_crack()) {
    throw DomainError("crack length " + std::to_string(a) + " outside [0, width / 2)");
  }
  return cfg.stress_range * std::sqrt(kPi * a) / std::sqrt(std::cos(kPi * a / cfg.width));
}

double paris_cycles(double a, double alpha, const ParisLawConfig& cfg,
                    const QuadratureOptions& opts) {
  cfg.validate();
  require_exponent(alpha);
  require_in_domain(a, cfg);
  double integral =
      adaptive_simpson([&](double z) { return cycle_integrand(z, alpha, cfg); },
                       cfg.initial_crack, a, opts);
  return cycle_prefactor(alpha, cfg) * integral;
}

double paris_cycles_deriv(double a, double alpha, const ParisLawConfig& cfg) {
  cfg.validate();
  require_exponent(alpha);
  require_in_domain(a, cfg);
  return cycle_prefactor(alpha, cfg) * cycle_integrand(a, alpha, cfg);
}

}  // namespace phmgp
