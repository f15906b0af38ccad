// Acceptance gate: one line per criterion, [PASS]/[FAIL]/[SKIP], exit 1 on
// any failure.  Every expected value is computed here from first principles
// (closed forms, dense linear algebra, composite panels) independent of the
// library code under test.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "phmgp/basis.hpp"
#include "phmgp/bench.hpp"
#include "phmgp/dataset.hpp"
#include "phmgp/gp.hpp"
#include "phmgp/igpm.hpp"
#include "phmgp/paris.hpp"
#include "phmgp/quadrature.hpp"
#include "phmgp/stats.hpp"
#include "phmgp/train.hpp"

namespace fs = std::filesystem;
using namespace phmgp;

namespace {

struct Outcome {
  bool failed = false;
  bool skipped = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

fs::path data_root() {
  if (const char* env = std::getenv("PHMGP_DATA_DIR")) return fs::path(env);
  return fs::path(PHMGP_REPO_DATA_DIR);
}

std::vector<Trajectory> make_cohort(std::shared_ptr<const BasisSet> basis,
                                    const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                                    double sigma_y, const std::vector<double>& grid, int count,
                                    std::uint64_t seed) {
  GeneratorSpec spec;
  spec.basis = std::move(basis);
  spec.mu = mu;
  spec.sigma = sigma;
  spec.sigma_y = sigma_y;
  spec.grid = grid;
  spec.count = count;
  spec.seed = seed;
  return synthesize(spec);
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

PreparedMethod fixed_inferred(const IgpmModel& model, bool predictive_noise) {
  PreparedMethod prep;
  prep.spec.kind = MethodKind::igpm_poly;
  prep.spec.predictive_noise = predictive_noise;
  prep.model = model.gp();
  prep.igpm = model;
  return prep;
}

// criterion 1 -----------------------------------------------------------

Outcome criterion_variance_value_independence() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    ModelFamily family;
    Hyperparameters hp;
    int pick = k % 3;
    if (pick == 0) {
      family = {MeanKind::zero, CovKind::squared_exponential, 1};
    } else if (pick == 1) {
      family = {MeanKind::zero, CovKind::polynomial, 2};
    } else {
      family = {MeanKind::polynomial, CovKind::polynomial, 1};
      hp.mean_coeffs = Eigen::VectorXd::Zero(2);
      hp.mean_coeffs << unit(rng) - 0.5, unit(rng) - 0.5;
    }
    hp.sigma_f = 0.5 + 1.5 * unit(rng);
    hp.length_scale = 0.5 + 1.5 * unit(rng);
    hp.offset = 0.5 + 1.5 * unit(rng);
    hp.sigma_y = 0.05 + 0.25 * unit(rng);
    Standardization s;
    s.x_mean = unit(rng) - 0.5;
    s.x_scale = 0.5 + unit(rng);
    s.y_mean = 2.0 * unit(rng) - 1.0;
    s.y_scale = 0.5 + unit(rng);
    GpModel model = make_model(family, hp, s);

    int n = 3 + k % 6;
    std::vector<double> xs(static_cast<std::size_t>(n));
    double x = unit(rng);
    for (double& xi : xs) xi = (x += 0.1 + 0.5 * unit(rng));
    std::vector<double> ya(xs.size()), yb(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ya[i] = 4.0 * unit(rng) - 2.0;
      yb[i] = 4.0 * unit(rng) - 2.0;
    }
    std::vector<double> query = {xs.front() - 0.3, 0.5 * (xs.front() + xs.back()),
                                 xs.back() + 0.7};
    for (bool predictive : {false, true}) {
      PosteriorOptions opts;
      opts.predictive_noise = predictive;
      PosteriorPrediction pa = posterior(model, xs, ya, query, opts);
      PosteriorPrediction pb = posterior(model, xs, yb, query, opts);
      for (Eigen::Index i = 0; i < pa.var.size(); ++i) {
        worst = std::max(worst, std::abs(pa.var(i) - pb.var(i)));
      }
    }
  }
  double dt = seconds_since(t0);
  Outcome out;
  out.failed = worst > 1e-12 || dt > 10.0;
  out.detail = "max variance shift " + num(worst) + " over 100 models (tol 1e-12), " + num(dt) +
               " s (limit 10)";
  return out;
}

// criterion 2 -----------------------------------------------------------

Outcome criterion_weight_space_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    int p = 1 + k % 4;
    int n = 1 + static_cast<int>(unit(rng) * 29.0);
    auto basis = BasisSet::polynomial(p - 1);

    Eigen::VectorXd mu(p);
    for (int i = 0; i < p; ++i) mu(i) = gauss(rng);
    Eigen::MatrixXd a(p, p);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) a(i, j) = 0.6 * gauss(rng);
    }
    Eigen::MatrixXd sigma = a * a.transpose() + 0.01 * Eigen::MatrixXd::Identity(p, p);
    double sigma_y = 0.05 + 0.45 * unit(rng);

    IgpmModel model;
    model.basis = basis;
    model.stats.mu = mu;
    model.stats.sigma = sigma;
    model.stats.trajectory_count = 100;
    model.noise = ConstantNoise{sigma_y};
    model.standardization = Standardization::identity();

    std::vector<double> xs(static_cast<std::size_t>(n));
    double x = -1.0;
    for (double& xi : xs) xi = (x += 0.02 + 0.06 * unit(rng));
    std::vector<double> ys(xs.size());
    for (double& yi : ys) yi = 2.0 * gauss(rng);

    // weight-space oracle: posterior over coefficients, then project
    Eigen::MatrixXd phi(n, p);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd row = basis->eval_all(xs[static_cast<std::size_t>(i)]);
      phi.row(i) = row.transpose();
    }
    Eigen::MatrixXd prior_inv = sigma.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::MatrixXd post_prec = prior_inv + phi.transpose() * phi / (sigma_y * sigma_y);
    Eigen::MatrixXd post_cov = post_prec.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    Eigen::Map<const Eigen::VectorXd> yv(ys.data(), n);
    Eigen::VectorXd post_mean =
        post_cov * (prior_inv * mu + phi.transpose() * yv / (sigma_y * sigma_y));

    std::vector<double> query = {-1.2, -0.4, 0.1, 0.8, 1.3};
    PosteriorPrediction post = posterior(model.gp(), xs, ys, query, {});
    for (std::size_t i = 0; i < query.size(); ++i) {
      Eigen::VectorXd q = basis->eval_all(query[i]);
      double mean_oracle = q.dot(post_mean);
      double var_oracle = q.dot(post_cov * q);
      worst = std::max(worst, std::abs(post.mean(static_cast<Eigen::Index>(i)) - mean_oracle));
      worst = std::max(worst, std::abs(post.var(static_cast<Eigen::Index>(i)) - var_oracle));
    }
  }
  double dt = seconds_since(t0);
  Outcome out;
  out.failed = worst > 1e-8 || dt > 10.0;
  out.detail = "max |process - weight-space| " + num(worst) +
               " over 50 instances (tol 1e-8), " + num(dt) + " s (limit 10)";
  return out;
}

// criterion 3 -----------------------------------------------------------

Outcome criterion_quadratic_expansion() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(303);
  std::normal_distribution<double> gauss(0.0, 0.5);
  auto basis = BasisSet::polynomial(2);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    Eigen::MatrixXd a(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a(i, j) = gauss(rng);
    }
    Eigen::MatrixXd sigma = a * a.transpose();
    IgpmModel model;
    model.basis = basis;
    model.stats.mu = Eigen::VectorXd::Zero(3);
    model.stats.sigma = sigma;
    model.stats.trajectory_count = 10;
    model.noise = ConstantNoise{0.0};
    model.standardization = Standardization::identity();
    GpModel gp = model.gp();

    std::uniform_real_distribution<double> loc(-1.0, 1.0);
    for (int r = 0; r < 10; ++r) {
      double x = loc(rng);
      double xp = loc(rng);
      // six monomial terms of (1, x, x^2) Sigma (1, x', x'^2)^T
      double expansion = sigma(0, 0) + sigma(0, 1) * (x + xp) +
                         sigma(0, 2) * (x * x + xp * xp) + sigma(1, 1) * x * xp +
                         sigma(1, 2) * (x * x * xp + x * xp * xp) +
                         sigma(2, 2) * x * x * xp * xp;
      worst = std::max(worst, std::abs(gp.cov(x, xp) - expansion));
    }
  }
  double dt = seconds_since(t0);
  Outcome out;
  out.failed = worst > 1e-12;
  out.detail = "max |covariance - six-term expansion| " + num(worst) +
               " over 100 coefficient covariances (tol 1e-12), " + num(dt) + " s";
  return out;
}

// criterion 4 -----------------------------------------------------------

double composite_simpson_cycles(const ParisLawConfig& cfg, double alpha, double a_hi,
                                long panels) {
  // independent integrand: inverse growth rate with the finite-width secant
  auto f = [&](double z) {
    double dk = cfg.stress_range * std::sqrt(M_PI * z / std::cos(M_PI * z / cfg.width));
    return 1.0 / (cfg.growth_scale * std::pow(dk, alpha));
  };
  double a = cfg.initial_crack;
  double h = (a_hi - a) / static_cast<double>(panels);
  double sum = f(a) + f(a_hi);
  for (long i = 1; i < panels; ++i) {
    sum += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

Outcome criterion_cycle_integral_oracles() {
  auto t0 = std::chrono::steady_clock::now();
  ParisLawConfig virkler;
  virkler.width = 152.4;
  virkler.stress_range = 48.26;
  virkler.initial_crack = 9.0;
  virkler.growth_scale = 8.7096e-11;
  virkler.exponents = {2.9};

  // exponent 0: the growth rate is constant, so cycles are linear in length
  double got0 = paris_cycles(30.0, 0.0, virkler);
  double want0 = (30.0 - virkler.initial_crack) / virkler.growth_scale;
  double rel0 = std::abs(got0 - want0) / std::abs(want0);

  // exponent 4 on an effectively infinite plate has a closed form
  ParisLawConfig wide = virkler;
  wide.width = 1e9;
  double a_hi = 49.8;
  double got4 = paris_cycles(a_hi, 4.0, wide);
  double want4 = (1.0 / wide.initial_crack - 1.0 / a_hi) /
                 (wide.growth_scale * std::pow(wide.stress_range, 4.0) * M_PI * M_PI);
  double rel4 = std::abs(got4 - want4) / std::abs(want4);

  // fractional exponent on the finite plate against a one-million-panel sum
  double got29 = paris_cycles(a_hi, 2.9, virkler);
  double want29 = composite_simpson_cycles(virkler, 2.9, a_hi, 1000000);
  double rel29 = std::abs(got29 - want29) / std::abs(want29);

  double dt = seconds_since(t0);
  Outcome out;
  out.failed = rel0 > 1e-12 || rel4 > 1e-6 || rel29 > 1e-8 || dt > 30.0;
  out.detail = "rel errors: constant-rate " + num(rel0) + " (tol 1e-12), wide-plate " +
               num(rel4) + " (tol 1e-6), panel oracle " + num(rel29) + " (tol 1e-8), " +
               num(dt) + " s (limit 30)";
  return out;
}

// criterion 5 -----------------------------------------------------------

Outcome criterion_dense_likelihood() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    ModelFamily family;
    Hyperparameters hp;
    if (k % 2 == 0) {
      family = {MeanKind::zero, CovKind::squared_exponential, 1};
    } else {
      family = {MeanKind::polynomial, CovKind::polynomial, 1};
      hp.mean_coeffs = Eigen::VectorXd::Zero(2);
      hp.mean_coeffs << gauss(rng), gauss(rng);
    }
    hp.sigma_f = 0.5 + unit(rng);
    hp.length_scale = 0.5 + unit(rng);
    hp.offset = 0.5 + unit(rng);
    hp.sigma_y = 0.05 + 0.3 * unit(rng);
    GpModel model = make_model(family, hp, Standardization::identity());

    int n = 1 + k % 5;
    std::vector<double> xs(static_cast<std::size_t>(n));
    double x = unit(rng);
    for (double& xi : xs) xi = (x += 0.05 + 0.4 * unit(rng));
    std::vector<double> ys(xs.size());
    for (double& yi : ys) yi = 2.0 * gauss(rng);

    double got = log_marginal_likelihood(model, xs, ys);

    Eigen::MatrixXd k_mat(n, n);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
      double xi = xs[static_cast<std::size_t>(i)];
      r(i) = ys[static_cast<std::size_t>(i)] - model.mean(xi);
      for (int j = 0; j < n; ++j) {
        k_mat(i, j) = model.cov(xi, xs[static_cast<std::size_t>(j)]);
      }
      k_mat(i, i) += model.noise_sd(xi) * model.noise_sd(xi);
    }
    double want = -0.5 * r.dot(k_mat.inverse() * r) - 0.5 * std::log(k_mat.determinant()) -
                  0.5 * n * std::log(2.0 * M_PI);
    worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
  }
  double dt = seconds_since(t0);
  Outcome out;
  out.failed = worst > 1e-9;
  out.detail = "max relative likelihood gap " + num(worst) +
               " over 1000 instances (tol 1e-9), " + num(dt) + " s";
  return out;
}

// criterion 6 -----------------------------------------------------------

Outcome criterion_generator_recovery() {
  auto t0 = std::chrono::steady_clock::now();
  auto basis = BasisSet::polynomial(2);
  Eigen::VectorXd mu(3);
  mu << 1.0, 0.4, -0.2;
  Eigen::MatrixXd sigma(3, 3);
  sigma << 0.09, 0.01, 0.0, 0.01, 0.04, 0.005, 0.0, 0.005, 0.0225;
  // dense grid and light noise keep the per-trajectory coefficient fits near
  // the drawn coefficients, so sample moments estimate generator moments
  std::vector<double> grid = linspace(0.0, 1.1, 30);
  std::vector<Trajectory> cohort = make_cohort(basis, mu, sigma, 0.02, grid, 500, 606);

  InferOptions opts;
  opts.standardization = Standardization::identity();
  IgpmModel fit = infer_model(cohort, basis, opts);
  double mu_rel = (fit.stats.mu - mu).norm() / mu.norm();
  double sigma_rel = (fit.stats.sigma - sigma).norm() / sigma.norm();

  const double true_sigma = 0.08;
  std::vector<double> grid50 = linspace(0.0, 1.1, 50);
  std::vector<Trajectory> noisy = make_cohort(basis, mu, sigma, true_sigma, grid50, 20, 707);
  InferOptions rms_opts = opts;
  rms_opts.estimator = ErrorEstimator::rms;
  double sd_rms = std::get<ConstantNoise>(infer_model(noisy, basis, rms_opts).noise).sigma_y;
  InferOptions ml_opts = opts;
  ml_opts.estimator = ErrorEstimator::marginal_likelihood;
  double sd_ml = std::get<ConstantNoise>(infer_model(noisy, basis, ml_opts).noise).sigma_y;
  double rms_rel = std::abs(sd_rms - true_sigma) / true_sigma;
  double ml_rel = std::abs(sd_ml - true_sigma) / true_sigma;

  double dt = seconds_since(t0);
  Outcome out;
  out.failed = mu_rel > 0.15 || sigma_rel > 0.15 || rms_rel > 0.2 || ml_rel > 0.2 || dt > 60.0;
  out.detail = "mean rel " + num(mu_rel) + ", cov rel " + num(sigma_rel) +
               " (tol 0.15); noise rel rms " + num(rms_rel) + ", likelihood " + num(ml_rel) +
               " (tol 0.2), " + num(dt) + " s (limit 60)";
  return out;
}

// criterion 7 -----------------------------------------------------------

Outcome criterion_interval_coverage() {
  auto t0 = std::chrono::steady_clock::now();
  auto basis = BasisSet::polynomial(1);
  Eigen::VectorXd mu(2);
  mu << 1.0, 2.0;
  Eigen::MatrixXd sigma(2, 2);
  sigma << 0.04, 0.01, 0.01, 0.09;
  const double sigma_y = 0.1;
  std::vector<double> grid = linspace(0.0, 2.0, 21);
  std::vector<Trajectory> cohort = make_cohort(basis, mu, sigma, sigma_y, grid, 500, 808);

  IgpmModel model;
  model.basis = basis;
  model.stats.mu = mu;
  model.stats.sigma = sigma;
  model.stats.trajectory_count = 500;
  model.noise = ConstantNoise{sigma_y};
  model.standardization = Standardization::identity();
  PreparedMethod prep = fixed_inferred(model, true);

  std::vector<PredictionSeries> series;
  series.reserve(cohort.size());
  for (const Trajectory& t : cohort) series.push_back(sequential_predict(prep, t));

  std::vector<double> levels = {50.0, 90.0, 95.0, 99.0};
  CalibrationResult cal = calibration(series, levels);
  double worst = 0.0;
  std::string gaps;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    double gap = std::abs(cal.empirical[i] - levels[i] / 100.0);
    worst = std::max(worst, gap);
    if (!gaps.empty()) gaps += "/";
    gaps += num(cal.empirical[i]);
  }
  double dt = seconds_since(t0);
  Outcome out;
  out.failed = worst > 0.03 || cal.pairs < 10000;
  out.detail = "coverage " + gaps + " at 50/90/95/99% over " + std::to_string(cal.pairs) +
               " pairs, worst gap " + num(worst) + " (tol 0.03), " + num(dt) + " s";
  return out;
}

// criterion 8 -----------------------------------------------------------

Outcome criterion_speed_ratio() {
  auto t0 = std::chrono::steady_clock::now();
  auto basis = BasisSet::polynomial(1);
  Eigen::VectorXd mu(2);
  mu << 2.0, 1.0;
  Eigen::MatrixXd sigma(2, 2);
  sigma << 0.25, 0.02, 0.02, 0.09;
  std::vector<double> grid = linspace(0.0, 0.9, 10);
  std::vector<Trajectory> cohort = make_cohort(basis, mu, sigma, 0.1, grid, 20, 909);

  BenchOptions opts;
  opts.timing = TimingMode::single;
  opts.threads = 1;

  MethodSpec inferred;
  inferred.kind = MethodKind::igpm_poly;
  inferred.order = 1;
  LeaveOneOutResult fast = leave_one_out(inferred, cohort, opts);

  MethodSpec retrained;
  retrained.kind = MethodKind::gpm_curr;
  retrained.order = 1;
  retrained.extra_starts = 0;  // pure re-optimization from the seeded start
  retrained.seed = 909;
  LeaveOneOutResult slow = leave_one_out(retrained, cohort, opts);

  double ratio = slow.row.pred_time_s / fast.row.pred_time_s;
  double dt = seconds_since(t0);
  Outcome out;
  out.failed = !(ratio >= 10.0) || dt > 300.0;
  out.detail = "mean series time " + num(fast.row.pred_time_s) + " s inferred vs " +
               num(slow.row.pred_time_s) + " s retrained, ratio " + num(ratio) +
               " (needs >= 10), " + num(dt) + " s (limit 300)";
  return out;
}

// criterion 9 -----------------------------------------------------------

Outcome criterion_method_ordering() {
  auto t0 = std::chrono::steady_clock::now();
  auto basis = BasisSet::polynomial(2);
  const double b = 0.5;
  const double sf = 0.4;
  Eigen::VectorXd mu(3);
  mu << 0.5, 0.4, 0.3;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(3, 3);
  sigma(0, 0) = sf * sf * b * b;
  sigma(1, 1) = sf * sf * 2.0 * b;
  sigma(2, 2) = sf * sf;
  std::vector<double> grid = linspace(0.2, 1.6, 8);

  int wins = 0;
  std::string per_seed;
  for (int seed = 0; seed < 10; ++seed) {
    std::vector<Trajectory> cohort =
        make_cohort(basis, mu, sigma, 0.05, grid, 12, 1000 + static_cast<std::uint64_t>(seed));

    auto run = [&](MethodKind kind) {
      MethodSpec spec;
      spec.kind = kind;
      spec.order = 2;
      spec.extra_starts = 2;
      spec.seed = static_cast<std::uint64_t>(seed);
      return leave_one_out(spec, cohort, {}).row.rmse;
    };
    double r_inferred = run(MethodKind::igpm_poly);
    double r_poly = run(MethodKind::gpm_prev_poly);
    double r_zm_se = run(MethodKind::gpm_prev_zm_se);
    double r_curr = run(MethodKind::gpm_curr);

    bool agree = std::abs(r_inferred - r_poly) <= 0.15 * std::max(r_inferred, r_poly);
    bool beat = r_inferred < r_zm_se && r_inferred < r_curr && r_poly < r_zm_se &&
                r_poly < r_curr;
    if (agree && beat) ++wins;
    if (!per_seed.empty()) per_seed += " ";
    per_seed += (agree && beat) ? "y" : "n";
  }
  double dt = seconds_since(t0);
  Outcome out;
  out.failed = wins < 6;
  out.detail = std::to_string(wins) +
               "/10 seeds satisfy agreement within 15% plus both-beat-baselines [" + per_seed +
               "], " + num(dt) + " s";
  return out;
}

// criterion 10 ----------------------------------------------------------

Outcome criterion_crack_dataset_ordering() {
  auto t0 = std::chrono::steady_clock::now();
  fs::path manifest = data_root() / "virkler" / "manifest.json";
  Outcome out;
  if (!fs::exists(manifest)) {
    out.skipped = true;
    out.detail = "user-supplied crack-growth dataset not present (" + manifest.string() + ")";
    return out;
  }
  Dataset ds = load_dataset(manifest);

  // scale factor back to raw cycle counts for the advisory comparison
  double y_divisor = 1.0;
  {
    std::ifstream in(manifest);
    std::stringstream buf;
    buf << in.rdbuf();
    y_divisor = manifest_from_json_text(buf.str()).normalization.divide_y_by;
  }

  BenchOptions opts;
  auto split = ds.inference_indices();
  if (split) {
    opts.infer_indices = split;
  } else {
    std::vector<std::size_t> first47(47);
    for (std::size_t i = 0; i < first47.size(); ++i) first47[i] = i;
    opts.infer_indices = first47;
  }

  ParisLawConfig base;
  if (ds.manifest.crack_growth) {
    base = *ds.manifest.crack_growth;
  } else {
    base.width = 152.4;
    base.stress_range = 48.26;
    base.initial_crack = 9.0;
    base.growth_scale = 8.7096e-11;
  }
  auto paris_spec = [&](std::vector<double> exponents) {
    MethodSpec spec;
    spec.kind = MethodKind::igpm_paris;
    spec.crack_growth = base;
    spec.crack_growth->exponents = std::move(exponents);
    return spec;
  };
  MethodSpec multi = paris_spec({2.6, 2.8, 3.0, 3.2});
  MethodSpec single = paris_spec({2.9});
  MethodSpec poly4;
  poly4.kind = MethodKind::igpm_poly;
  poly4.order = 4;

  MetricsRow row_multi = leave_one_out(multi, ds.trajectories, opts).row;
  MetricsRow row_single = leave_one_out(single, ds.trajectories, opts).row;
  MetricsRow row_poly = leave_one_out(poly4, ds.trajectories, opts).row;

  bool full_order = row_multi.rmse < row_poly.rmse && row_poly.rmse < row_single.rmse;
  bool half_order = row_multi.rmse_half < row_single.rmse_half &&
                    row_single.rmse_half < row_poly.rmse_half;

  auto cycles = [&](double v) { return v * y_divisor; };
  auto band = [&](double got, double want) {
    return std::abs(got - want) / want <= 0.15 ? "in" : "out";
  };
  std::string advisory =
      std::string("advisory bands: full ") + band(cycles(row_multi.rmse), 7376.90) + "/" +
      band(cycles(row_poly.rmse), 9059.10) + "/" + band(cycles(row_single.rmse), 9368.90) +
      ", half " + band(cycles(row_multi.rmse_half), 3266.80) + "/" +
      band(cycles(row_single.rmse_half), 3528.50) + "/" +
      band(cycles(row_poly.rmse_half), 5157.40);

  double dt = seconds_since(t0);
  out.failed = !(full_order && half_order);
  out.detail = "full rmse multi/poly4/single = " + num(cycles(row_multi.rmse)) + "/" +
               num(cycles(row_poly.rmse)) + "/" + num(cycles(row_single.rmse)) +
               (full_order ? " ordered" : " NOT ordered") +
               "; half multi/single/poly4 = " + num(cycles(row_multi.rmse_half)) + "/" +
               num(cycles(row_single.rmse_half)) + "/" + num(cycles(row_poly.rmse_half)) +
               (half_order ? " ordered" : " NOT ordered") + "; " + advisory + ", " + num(dt) +
               " s";
  return out;
}

// criterion 11 ----------------------------------------------------------

Outcome criterion_order_selection() {
  auto t0 = std::chrono::steady_clock::now();
  auto basis = BasisSet::polynomial(2);
  Eigen::VectorXd mu(3);
  mu << 1.0, -0.6, 0.9;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(3, 3);
  sigma(0, 0) = 0.01;
  sigma(1, 1) = 0.0049;
  sigma(2, 2) = 0.0036;
  std::vector<double> grid = linspace(0.0, 1.35, 14);
  std::vector<int> candidates = {1, 2, 3, 4};

  int picked_quadratic = 0;
  for (int seed = 0; seed < 100; ++seed) {
    std::vector<Trajectory> cohort =
        make_cohort(basis, mu, sigma, 0.05, grid, 12, 2000 + static_cast<std::uint64_t>(seed));
    OrderSelection sel = select_order(cohort, candidates, static_cast<std::uint64_t>(seed));
    if (sel.order == 2) ++picked_quadratic;
  }
  bool synthetic_ok = picked_quadratic >= 95;

  // published datasets, when supplied: degradation sets expect the linear
  // order, crack-growth sets the quadratic
  std::string real = "";
  bool real_ok = true;
  const struct {
    const char* name;
    int expected;
  } expectations[] = {{"laser", 1}, {"milling", 1}, {"virkler", 2}, {"hudak", 2}};
  for (const auto& e : expectations) {
    fs::path manifest = data_root() / e.name / "manifest.json";
    if (!fs::exists(manifest)) continue;
    Dataset ds = load_dataset(manifest);
    std::vector<Trajectory> previous;
    if (auto idx = ds.inference_indices()) {
      for (std::size_t i : *idx) previous.push_back(ds.trajectories[i]);
    } else {
      previous = ds.trajectories;
    }
    OrderSelection sel = select_order(previous, candidates, 0);
    bool ok = sel.order == e.expected;
    real_ok = real_ok && ok;
    real += std::string("; ") + e.name + " -> " + std::to_string(sel.order) + " (wants " +
            std::to_string(e.expected) + (ok ? ")" : ", MISMATCH)");
  }
  if (real.empty()) real = "; no user-supplied datasets present";

  double dt = seconds_since(t0);
  Outcome out;
  out.failed = !synthetic_ok || !real_ok;
  out.detail = "quadratic chosen in " + std::to_string(picked_quadratic) +
               "/100 seeded synthetic runs (needs >= 95)" + real + ", " + num(dt) + " s";
  return out;
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"posterior variance ignores observed values", criterion_variance_value_independence},
      {"inferred process matches weight-space regression", criterion_weight_space_equivalence},
      {"quadratic-basis covariance equals its six-term expansion",
       criterion_quadratic_expansion},
      {"cycle integrals match closed forms and a dense panel oracle",
       criterion_cycle_integral_oracles},
      {"factorized marginal likelihood equals the dense formula", criterion_dense_likelihood},
      {"generator moments and noise are recovered", criterion_generator_recovery},
      {"central intervals hit nominal coverage", criterion_interval_coverage},
      {"inference predicts 10x faster than per-step retraining", criterion_speed_ratio},
      {"inferred and trained polynomial models agree and beat baselines",
       criterion_method_ordering},
      {"crack-growth dataset error ordering (user-supplied data)",
       criterion_crack_dataset_ordering},
      {"order selection picks the quadratic", criterion_order_selection},
  };

  bool any_failed = false;
  int index = 0;
  for (const Entry& entry : entries) {
    ++index;
    Outcome outcome;
    try {
      outcome = entry.fn();
    } catch (const std::exception& e) {
      outcome.failed = true;
      outcome.detail = std::string("unexpected exception: ") + e.what();
    }
    const char* tag = outcome.skipped ? "[SKIP]" : (outcome.failed ? "[FAIL]" : "[PASS]");
    std::printf("%s criterion %d: %s (%s)\n", tag, index, entry.label, outcome.detail.c_str());
    std::fflush(stdout);
    any_failed = any_failed || outcome.failed;
  }
  return any_failed ? 1 : 0;
}
