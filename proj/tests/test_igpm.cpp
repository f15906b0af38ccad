#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "phmgp/errors.hpp"
#include "phmgp/igpm.hpp"
#include "phmgp/igpm_io.hpp"
#include "phmgp/optimize.hpp"
#include "phmgp/paris.hpp"

using namespace phmgp;

namespace {

/// Trajectories drawn from a linear-coefficient population on a fixed grid.
std::vector<Trajectory> linear_population(int count, const Eigen::Vector2d& mu,
                                          const Eigen::Vector2d& coeff_sd, double noise_sd,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Trajectory> out;
  for (int j = 0; j < count; ++j) {
    Trajectory t;
    t.id = "t" + std::to_string(j);
    double b0 = mu(0) + coeff_sd(0) * gauss(rng);
    double b1 = mu(1) + coeff_sd(1) * gauss(rng);
    for (int i = 0; i < 10; ++i) {
      double x = static_cast<double>(i) / 9.0;
      t.xs.push_back(x);
      t.ys.push_back(b0 + b1 * x + noise_sd * gauss(rng));
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST_SUITE("igpm") {

TEST_CASE("least squares on a symmetric three-point design") {
  Trajectory t{"t", {-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}};
  Eigen::VectorXd beta = fit_coefficients(t, *BasisSet::polynomial(1));
  CHECK(beta(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(beta(1) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("exact linear data is recovered exactly") {
  Trajectory t{"t", {0.0, 0.5, 1.0, 2.0}, {2.0, 3.5, 5.0, 8.0}};
  Eigen::VectorXd beta = fit_coefficients(t, *BasisSet::polynomial(1));
  CHECK(beta(0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(beta(1) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("rank-deficient fits return the minimum-norm solution") {
  Trajectory t{"t", {1.0}, {5.0}};
  Eigen::VectorXd beta = fit_coefficients(t, *BasisSet::polynomial(1));
  CHECK(beta(0) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(beta(1) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("coefficient statistics on three unit columns") {
  Eigen::MatrixXd cols(2, 3);
  cols << 1.0, 0.0, 1.0,
          0.0, 1.0, 1.0;
  CoefficientStats stats = coefficient_stats(cols);
  CHECK(stats.trajectory_count == 3);
  CHECK(stats.perturbation == 0.0);
  CHECK(stats.mu(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(stats.mu(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(stats.sigma(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(stats.sigma(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(stats.sigma(0, 1) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(stats.sigma(0, 1) == stats.sigma(1, 0));
}

TEST_CASE("few trajectories trigger the diagonal perturbation") {
  Eigen::MatrixXd cols(2, 2);
  cols << 1.0, 3.0,
          2.0, 6.0;
  CoefficientStats stats = coefficient_stats(cols);
  CHECK(stats.perturbation > 0.0);
  // raw covariance [[2, 4], [4, 8]] has trace 10, so the shift is 1e-8 * 5
  CHECK(stats.perturbation == doctest::Approx(5e-8).epsilon(1e-10));
  CHECK(stats.sigma(0, 0) == doctest::Approx(2.0 + 5e-8).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(stats.sigma);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("a single trajectory cannot define statistics") {
  Eigen::MatrixXd cols(2, 1);
  cols << 1.0, 2.0;
  CHECK_THROWS_AS(coefficient_stats(cols), InsufficientTrajectories);
}

TEST_CASE("pooled residual error over per-trajectory mean squares") {
  // constant-only fits leave residuals of +-1 and +-2
  Trajectory t1{"a", {0.0, 1.0}, {4.0, 2.0}};
  Trajectory t2{"b", {0.0, 1.0}, {7.0, 3.0}};
  std::vector<Trajectory> ts{t1, t2};
  auto basis = BasisSet::polynomial(0);
  Eigen::MatrixXd cols(1, 2);
  cols(0, 0) = fit_coefficients(t1, *basis)(0);
  cols(0, 1) = fit_coefficients(t2, *basis)(0);
  CHECK(cols(0, 0) == doctest::Approx(3.0));
  CHECK(cols(0, 1) == doctest::Approx(5.0));
  double rms = observation_error_rms(ts, *basis, cols, Standardization::identity());
  CHECK(rms == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
}

TEST_CASE("value shifts and scalings map through the pipeline affinely") {
  auto basis = BasisSet::polynomial(1);
  std::vector<Trajectory> base = linear_population(6, {1.0, 2.0}, {0.3, 0.2}, 0.05, 99);
  const double a = 2.5, b = -4.0;
  std::vector<Trajectory> shifted = base;
  for (auto& t : shifted) {
    for (auto& y : t.ys) y = a * y + b;
  }
  InferOptions opts;
  opts.standardization = Standardization::identity();
  IgpmModel m0 = infer_model(base, basis, opts);
  IgpmModel m1 = infer_model(shifted, basis, opts);
  CHECK(m1.stats.mu(0) == doctest::Approx(a * m0.stats.mu(0) + b).epsilon(1e-9));
  CHECK(m1.stats.mu(1) == doctest::Approx(a * m0.stats.mu(1)).epsilon(1e-9));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(m1.stats.sigma(i, j) == doctest::Approx(a * a * m0.stats.sigma(i, j)).epsilon(1e-9));
    }
  }
}

TEST_CASE("population moments are recovered from a synthetic cohort") {
  Eigen::Vector2d mu(1.0, 2.0);
  Eigen::Vector2d sd(0.2, 0.1);
  double noise = 0.05;
  std::vector<Trajectory> cohort = linear_population(300, mu, sd, noise, 7);
  InferOptions opts;
  opts.standardization = Standardization::identity();
  IgpmModel model = infer_model(cohort, BasisSet::polynomial(1), opts);
  CHECK(model.stats.mu(0) == doctest::Approx(mu(0)).epsilon(0.05));
  CHECK(model.stats.mu(1) == doctest::Approx(mu(1)).epsilon(0.05));
  CHECK(model.stats.sigma(0, 0) == doctest::Approx(sd(0) * sd(0)).epsilon(0.30));
  CHECK(model.stats.sigma(1, 1) == doctest::Approx(sd(1) * sd(1)).epsilon(0.30));
  double rms_sigma = std::get<ConstantNoise>(model.noise).sigma_y;
  CHECK(rms_sigma == doctest::Approx(noise).epsilon(0.15));

  InferOptions ml_opts = opts;
  ml_opts.estimator = ErrorEstimator::marginal_likelihood;
  IgpmModel ml_model = infer_model(cohort, BasisSet::polynomial(1), ml_opts);
  double ml_sigma = std::get<ConstantNoise>(ml_model.noise).sigma_y;
  CHECK(ml_sigma == doctest::Approx(noise).epsilon(0.20));
  CHECK_FALSE(ml_model.noise_at_bound);
}

TEST_CASE("likelihood noise search lands on the grid-scan maximum") {
  std::vector<Trajectory> cohort = linear_population(12, {0.5, 1.5}, {0.25, 0.15}, 0.08, 21);
  Standardization ident = Standardization::identity();
  auto basis = BasisSet::polynomial(1);
  Eigen::MatrixXd cols(2, 12);
  for (int j = 0; j < 12; ++j) {
    cols.col(j) = fit_coefficients(cohort[static_cast<std::size_t>(j)], *basis, ident);
  }
  CoefficientStats stats = coefficient_stats(cols);
  NoiseSearchResult found = observation_error_ml(cohort, basis, stats, ident);

  auto objective = [&](double sigma) {
    GpModel m(BasisMeanFn{basis, stats.mu}, BasisCovFn{basis, stats.sigma}, ConstantNoise{sigma},
              ident);
    double acc = 0.0;
    for (const auto& t : cohort) acc += log_marginal_likelihood(m, t.xs, t.ys);
    return acc;
  };
  double best_grid = -1.0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    double logs = -13.8155 + (4.6052 + 13.8155) * static_cast<double>(i) / 200.0;
    double v = objective(std::exp(logs));
    if (v > best_val) {
      best_val = v;
      best_grid = std::exp(logs);
    }
  }
  CHECK(std::abs(std::log(found.sigma) - std::log(best_grid)) < 0.1);
  CHECK(objective(found.sigma) >= best_val - 1e-6);
}

TEST_CASE("noise-free data pins the likelihood search at the lower edge") {
  std::vector<Trajectory> cohort = linear_population(8, {1.0, -0.5}, {0.3, 0.2}, 0.0, 5);
  InferOptions opts;
  opts.standardization = Standardization::identity();
  opts.estimator = ErrorEstimator::marginal_likelihood;
  IgpmModel model = infer_model(cohort, BasisSet::polynomial(1), opts);
  CHECK(model.noise_at_bound);
  CHECK(std::get<ConstantNoise>(model.noise).sigma_y < 1e-4);
}

TEST_CASE("the assembled process exposes the inferred mean and covariance") {
  Eigen::MatrixXd cols(2, 3);
  cols << 1.0, 2.0, 3.0,
          0.5, 1.0, 1.5;
  CoefficientStats stats = coefficient_stats(cols);
  IgpmModel model;
  model.basis = BasisSet::polynomial(1);
  model.stats = stats;
  model.noise = ConstantNoise{0.1};
  model.standardization = Standardization::identity();
  GpModel gp = model.gp();
  double x = 0.7, xp = 1.3;
  Eigen::Vector2d phi(1.0, x), phip(1.0, xp);
  CHECK(gp.mean(x) == doctest::Approx(phi.dot(stats.mu)).epsilon(1e-14));
  CHECK(gp.cov(x, xp) == doctest::Approx(phi.dot(stats.sigma * phip)).epsilon(1e-14));
}

TEST_CASE("posterior matches a dense Bayesian linear regression oracle") {
  std::vector<Trajectory> cohort = linear_population(20, {1.0, 2.0}, {0.3, 0.2}, 0.05, 31);
  InferOptions opts;
  opts.standardization = Standardization::identity();
  IgpmModel model = infer_model(cohort, BasisSet::polynomial(1), opts);
  double sigma = std::get<ConstantNoise>(model.noise).sigma_y;

  std::vector<double> xs{0.1, 0.4, 0.9};
  std::vector<double> ys{1.3, 1.9, 3.1};
  std::vector<double> xq{0.5, 1.2};
  PosteriorPrediction pred = posterior(model.gp(), xs, ys, xq);

  // conjugate update of the coefficient prior
  Eigen::MatrixXd phi(3, 2);
  for (int i = 0; i < 3; ++i) {
    phi(i, 0) = 1.0;
    phi(i, 1) = xs[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), 3);
  const Eigen::MatrixXd& prior = model.stats.sigma;
  Eigen::MatrixXd gram_obs =
      phi * prior * phi.transpose() + sigma * sigma * Eigen::MatrixXd::Identity(3, 3);
  Eigen::MatrixXd gain = prior * phi.transpose() * gram_obs.inverse();
  Eigen::VectorXd mu_post = model.stats.mu + gain * (y - phi * model.stats.mu);
  Eigen::MatrixXd sigma_post = prior - gain * phi * prior;
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector2d phiq(1.0, xq[static_cast<std::size_t>(j)]);
    CHECK(pred.mean(j) == doctest::Approx(phiq.dot(mu_post)).epsilon(1e-8));
    CHECK(pred.var(j) == doctest::Approx(phiq.dot(sigma_post * phiq)).epsilon(1e-8));
  }
}

TEST_CASE("slope-scaled noise inference produces a positive factor") {
  std::vector<Trajectory> cohort = linear_population(15, {0.5, 3.0}, {0.2, 0.3}, 0.05, 77);
  InferOptions opts;
  opts.standardization = Standardization::identity();
  opts.noise = NoiseModelKind::scaled;
  IgpmModel model = infer_model(cohort, BasisSet::polynomial(1), opts);
  const auto& noise = std::get<ScaledNoise>(model.noise);
  CHECK(noise.sigma_x > 0.0);
  GpModel gp = model.gp();
  // slope of the inferred mean is near-constant, so noise tracks |mu_1|
  CHECK(gp.noise_sd(0.5) ==
        doctest::Approx(noise.sigma_x * std::abs(model.stats.mu(1))).epsilon(1e-9));
}

TEST_CASE("zero-offset physics bases default to a shift-free value map") {
  // curves proportional to the cycle integral pass through zero at the
  // initial length; subtracting the value mean would leave the basis span
  ParisLawConfig cfg;
  cfg.width = 152.4;
  cfg.stress_range = 48.26;
  cfg.initial_crack = 9.0;
  cfg.growth_scale = 8.7096e-11;
  cfg.exponents = {2.9};
  auto basis = BasisSet::paris(cfg);

  std::mt19937_64 rng(88);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Trajectory> cohort;
  double beta_sum = 0.0;
  for (int j = 0; j < 12; ++j) {
    double beta = 1.0 + 0.08 * gauss(rng);
    beta_sum += beta;
    Trajectory t;
    t.id = "c" + std::to_string(j);
    for (int i = 0; i < 12; ++i) {
      double a = 10.0 + 3.3 * i;
      t.xs.push_back(a);
      t.ys.push_back(beta * paris_cycles(a, 2.9, cfg) + 20.0 * gauss(rng));
    }
    cohort.push_back(std::move(t));
  }

  IgpmModel model = infer_model(cohort, basis, {});
  CHECK(model.standardization.y_mean == 0.0);
  CHECK(model.standardization.y_scale > 1.0);
  // prior mean tracks the cohort's mean curve instead of dipping where the
  // mean-shift bias would pull it
  double target = 45.0;
  double want = (beta_sum / 12.0) * paris_cycles(target, 2.9, cfg);
  CHECK(model.gp().mean(target) == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("inference requires at least two previous trajectories") {
  std::vector<Trajectory> one = linear_population(1, {1.0, 1.0}, {0.1, 0.1}, 0.01, 3);
  CHECK_THROWS_AS(infer_model(one, BasisSet::polynomial(1), {}), InsufficientTrajectories);
}

TEST_CASE("domain failures carry the offending trajectory id") {
  ParisLawConfig cfg;
  cfg.width = 152.4;
  cfg.stress_range = 48.26;
  cfg.initial_crack = 9.0;
  cfg.growth_scale = 8.7096e-11;
  cfg.exponents = {2.9};
  Trajectory bad{"bad-traj", {5.0, 10.0}, {1.0, 2.0}};  // 5.0 is below the initial crack
  try {
    fit_coefficients(bad, *BasisSet::paris(cfg));
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("bad-traj") != std::string::npos);
  }
}

TEST_CASE("model serialization round-trips bit-exactly") {
  std::vector<Trajectory> cohort = linear_population(9, {0.3, 1.7}, {0.21, 0.13}, 0.04, 55);
  IgpmModel model = infer_model(cohort, BasisSet::polynomial(2), {});
  std::filesystem::path path =
      std::filesystem::path(PHMGP_TEST_TMP_DIR) / "igpm_roundtrip.json";
  save_model(model, path);
  IgpmModel loaded = load_model(path);
  CHECK(loaded.stats.mu == model.stats.mu);
  CHECK(loaded.stats.sigma == model.stats.sigma);
  CHECK(loaded.stats.trajectory_count == model.stats.trajectory_count);
  CHECK(loaded.stats.perturbation == model.stats.perturbation);
  CHECK(std::get<ConstantNoise>(loaded.noise).sigma_y ==
        std::get<ConstantNoise>(model.noise).sigma_y);
  CHECK(loaded.standardization == model.standardization);
  CHECK(loaded.basis->size() == model.basis->size());
  // a second dump is byte-identical
  CHECK(model_to_json(loaded) == model_to_json(model));
}

TEST_CASE("malformed model files raise schema errors") {
  CHECK_THROWS_AS(model_from_json("not json"), SchemaError);
  CHECK_THROWS_AS(model_from_json("{}"), SchemaError);
  CHECK_THROWS_AS(model_from_json(R"({"format_version": 99})"), SchemaError);
  CHECK_THROWS_AS(model_from_json(R"({"format_version": 1, "basis": {"kind": "mystery"}})"),
                  SchemaError);
}

}  // TEST_SUITE
