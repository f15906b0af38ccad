#include "phmgp/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "phmgp/basis.hpp"
#include "phmgp/errors.hpp"
#include "phmgp/igpm.hpp"

namespace phmgp {

namespace {

constexpr double kStartLo = -4.605170185988091;  // log(1e-2)
constexpr double kStartHi = 4.605170185988092;   // log(1e2)

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(name) + " must be positive and finite");
  }
}

int coeff_count(const ModelFamily& family) {
  return family.mean == MeanKind::polynomial ? family.order + 1 : 0;
}

/// Objective over packed parameters; infinite penalty outside the usable set.
using Objective = std::function<double(const Eigen::VectorXd&)>;

OptimizationReport run_multistart(const ModelFamily& family, const Objective& objective,
                                  const Eigen::VectorXd& first_start, const Standardization& s,
                                  const TrainOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  if (opts.extra_starts < 0) throw InvalidArgument("extra start count must be non-negative");

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(first_start);
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> log_unif(kStartLo, kStartHi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n_pos = packed_size(family) - coeff_count(family);
  for (int r = 0; r < opts.extra_starts; ++r) {
    Eigen::VectorXd p(packed_size(family));
    for (int i = 0; i < n_pos; ++i) p(i) = log_unif(rng);
    for (int i = n_pos; i < p.size(); ++i) p(i) = gauss(rng);
    starts.push_back(std::move(p));
  }

  OptimizationReport report;
  report.family = family;
  report.standardization = s;
  report.seed = opts.seed;
  int best_index = -1;
  Eigen::VectorXd best_packed;
  for (const Eigen::VectorXd& start : starts) {
    StartReport sr;
    sr.start = start;
    double at_start;
    try {
      at_start = objective(start);
      if (!std::isfinite(at_start)) throw NumericalError("objective not finite at start", 0.0);
    } catch (const std::exception& e) {
      sr.failed = true;
      sr.diagnostic = e.what();
      report.starts.push_back(std::move(sr));
      continue;
    }
    NelderMeadResult nm = nelder_mead_maximize(objective, start, opts.nelder_mead);
    sr.value = std::max(nm.value, at_start);
    sr.iterations = nm.iterations;
    if (sr.value > report.best_value) {
      report.best_value = sr.value;
      best_packed = nm.value >= at_start ? nm.x : start;
      best_index = static_cast<int>(report.starts.size());
    }
    report.starts.push_back(std::move(sr));
  }
  if (best_index < 0) {
    std::vector<std::string> diags;
    for (std::size_t i = 0; i < report.starts.size(); ++i) {
      diags.push_back("start " + std::to_string(i) + ": " + report.starts[i].diagnostic);
    }
    throw TrainingFailed("every optimizer start failed", std::move(diags));
  }
  report.best = unpack(family, best_packed);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace

void Hyperparameters::validate(const ModelFamily& family) const {
  require_positive(sigma_f, "sigma_f");
  require_positive(sigma_y, "sigma_y");
  if (family.cov == CovKind::squared_exponential) {
    require_positive(length_scale, "length_scale");
  } else {
    require_positive(offset, "offset");
    if (family.order < 1) throw InvalidArgument("polynomial kernel degree must be at least 1");
  }
  if (family.mean == MeanKind::polynomial) {
    if (mean_coeffs.size() != family.order + 1) {
      throw InvalidArgument("polynomial mean needs order + 1 coefficients");
    }
    if (!mean_coeffs.allFinite()) throw InvalidArgument("mean coefficients must be finite");
  }
}

int packed_size(const ModelFamily& family) { return 3 + coeff_count(family); }

Eigen::VectorXd pack(const ModelFamily& family, const Hyperparameters& hp) {
  hp.validate(family);
  Eigen::VectorXd p(packed_size(family));
  p(0) = std::log(hp.sigma_f);
  p(1) = family.cov == CovKind::squared_exponential ? std::log(hp.length_scale)
                                                    : std::log(hp.offset);
  p(2) = std::log(hp.sigma_y);
  for (int i = 0; i < coeff_count(family); ++i) p(3 + i) = hp.mean_coeffs(i);
  return p;
}

Hyperparameters unpack(const ModelFamily& family, const Eigen::VectorXd& packed) {
  if (packed.size() != packed_size(family)) {
    throw InvalidArgument("packed parameter size does not match the family");
  }
  Hyperparameters hp;
  hp.sigma_f = std::exp(packed(0));
  if (family.cov == CovKind::squared_exponential) {
    hp.length_scale = std::exp(packed(1));
  } else {
    hp.offset = std::exp(packed(1));
  }
  hp.sigma_y = std::exp(packed(2));
  if (int n = coeff_count(family); n > 0) hp.mean_coeffs = packed.segment(3, n);
  return hp;
}

GpModel make_model(const ModelFamily& family, const Hyperparameters& hp,
                   const Standardization& s) {
  hp.validate(family);
  MeanFn mean;
  if (family.mean == MeanKind::polynomial) {
    mean = PolyMeanFn{hp.mean_coeffs};
  } else {
    mean = ZeroMean{};
  }
  CovFn cov;
  if (family.cov == CovKind::squared_exponential) {
    cov = SeCovFn{hp.sigma_f, hp.length_scale};
  } else {
    cov = PolyCovFn{family.order, hp.sigma_f, hp.offset};
  }
  return GpModel(std::move(mean), std::move(cov), ConstantNoise{hp.sigma_y}, s);
}

OptimizationReport fit_current(const ModelFamily& family, std::span<const double> xs,
                               std::span<const double> ys, const Hyperparameters& start,
                               const TrainOptions& opts) {
  if (xs.size() != ys.size() || xs.empty()) {
    throw InvalidArgument("training series must be non-empty with matching lengths");
  }
  Standardization s;
  if (opts.standardization) {
    s = *opts.standardization;
  } else {
    Trajectory t{"series", {xs.begin(), xs.end()}, {ys.begin(), ys.end()}};
    std::vector<Trajectory> wrap{std::move(t)};
    s = Standardization::fit(wrap);
  }
  std::vector<double> xv(xs.begin(), xs.end());
  std::vector<double> yv(ys.begin(), ys.end());
  auto objective = [family, s, xv, yv](const Eigen::VectorXd& packed) {
    GpModel model = make_model(family, unpack(family, packed), s);
    return log_marginal_likelihood(model, xv, yv);
  };
  return run_multistart(family, objective, pack(family, start), s, opts);
}

OptimizationReport fit_previous(const ModelFamily& family, std::span<const Trajectory> previous,
                                const TrainOptions& opts) {
  if (previous.empty()) throw InvalidArgument("previous-data training needs trajectories");
  for (const Trajectory& t : previous) validate_trajectory(t);
  Standardization s =
      opts.standardization ? *opts.standardization : Standardization::fit(previous);
  std::vector<Trajectory> data(previous.begin(), previous.end());
  auto objective = [family, s, data](const Eigen::VectorXd& packed) {
    GpModel model = make_model(family, unpack(family, packed), s);
    double acc = 0.0;
    for (const Trajectory& t : data) acc += log_marginal_likelihood(model, t.xs, t.ys);
    return acc;
  };
  Hyperparameters canonical;
  if (family.mean == MeanKind::polynomial) {
    canonical.mean_coeffs = Eigen::VectorXd::Zero(family.order + 1);
  }
  return run_multistart(family, objective, pack(family, canonical), s, opts);
}

OrderSelection select_order(std::span<const Trajectory> previous,
                            std::span<const int> candidate_orders, std::uint64_t split_seed) {
  if (previous.empty()) throw InvalidArgument("order selection needs trajectories");
  if (candidate_orders.empty()) throw InvalidArgument("order selection needs candidate orders");
  for (int q : candidate_orders) {
    if (q < 0) throw InvalidArgument("candidate orders must be non-negative");
  }
  for (const Trajectory& t : previous) validate_trajectory(t);
  Standardization s = Standardization::fit(previous);

  std::vector<int> orders(candidate_orders.begin(), candidate_orders.end());
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());

  // one split per trajectory, shared across candidate orders
  std::mt19937_64 rng(split_seed);
  std::vector<std::pair<Trajectory, Trajectory>> splits;  // train, test
  int too_short = 0;
  for (const Trajectory& t : previous) {
    const std::size_t n = t.size();
    if (n < 2) {
      ++too_short;
      continue;
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t n_train = static_cast<std::size_t>(
        std::ceil(0.7 * static_cast<double>(n)));
    n_train = std::min(n_train, n - 1);
    std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    Trajectory train{t.id, {}, {}};
    Trajectory test{t.id, {}, {}};
    for (std::size_t i : train_idx) {
      train.xs.push_back(t.xs[i]);
      train.ys.push_back(t.ys[i]);
    }
    for (std::size_t i : test_idx) {
      test.xs.push_back(t.xs[i]);
      test.ys.push_back(t.ys[i]);
    }
    splits.emplace_back(std::move(train), std::move(test));
  }
  if (splits.empty()) {
    throw InvalidArgument("order selection skipped every trajectory (all have fewer than 2 samples)");
  }

  OrderSelection selection;
  double best_mse = std::numeric_limits<double>::infinity();
  for (int q : orders) {
    OrderCandidate cand;
    cand.order = q;
    cand.skipped = too_short;
    auto basis = BasisSet::polynomial(q);
    double acc = 0.0;
    for (const auto& [train, test] : splits) {
      Eigen::VectorXd beta = fit_coefficients(train, *basis, s);
      double mse = 0.0;
      for (std::size_t i = 0; i < test.size(); ++i) {
        double pred = basis->eval_all(s.to_u(test.xs[i])).dot(beta);
        double err = pred - s.to_v(test.ys[i]);
        mse += err * err;
      }
      acc += mse / static_cast<double>(test.size());
    }
    cand.mean_test_mse = acc / static_cast<double>(splits.size());
    cand.feasible = true;
    if (cand.mean_test_mse < best_mse) {
      best_mse = cand.mean_test_mse;
      selection.order = q;
    }
    selection.candidates.push_back(cand);
  }
  return selection;
}

}  // namespace phmgp
