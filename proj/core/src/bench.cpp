#include "phmgp/bench.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>

#include "phmgp/dataset.hpp"
#include "phmgp/errors.hpp"
#include "phmgp/parallel.hpp"
#include "phmgp/stats.hpp"

namespace phmgp {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kMapeGuard = 1e-12;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Runs the work once (or three times for the median mode) and returns the
/// wall time; nan without timing.  The work must be deterministic because
/// repeats overwrite its outputs.
double run_timed(TimingMode mode, const std::function<void()>& work) {
  if (mode == TimingMode::off) {
    work();
    return kNan;
  }
  int reps = mode == TimingMode::median3 ? 3 : 1;
  std::array<double, 3> times{};
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    work();
    times[static_cast<std::size_t>(r)] = seconds_since(t0);
  }
  std::sort(times.begin(), times.begin() + reps);
  return times[static_cast<std::size_t>(reps / 2)];
}

[[noreturn]] void rethrow_with_context(const std::string& prefix) {
  try {
    throw;
  } catch (const TrainingFailed& e) {
    throw TrainingFailed(prefix + e.what(), e.diagnostics());
  } catch (const NumericalError& e) {
    throw NumericalError(prefix + e.what(), e.final_jitter());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const QuadratureError& e) {
    throw QuadratureError(prefix + e.what());
  } catch (const IllConditionedBasis& e) {
    throw IllConditionedBasis(prefix + e.what());
  } catch (const InsufficientTrajectories& e) {
    throw InsufficientTrajectories(prefix + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(prefix + e.what());
  }
}

TrainOptions train_options(const MethodSpec& spec) {
  TrainOptions opts;
  opts.extra_starts = spec.extra_starts;
  opts.seed = spec.seed;
  return opts;
}

}  // namespace

std::string method_label(MethodKind kind) {
  switch (kind) {
    case MethodKind::gpm_curr: return "gpm-curr";
    case MethodKind::gpm_prev_zm_se: return "gpm-prev-zm-se";
    case MethodKind::gpm_prev_poly: return "gpm-prev-poly";
    case MethodKind::igpm_poly: return "igpm-poly";
    case MethodKind::igpm_paris: return "igpm-paris";
  }
  throw InvalidArgument("unknown method kind");
}

const std::vector<std::string>& method_labels() {
  static const std::vector<std::string> labels = {
      method_label(MethodKind::gpm_curr), method_label(MethodKind::gpm_prev_zm_se),
      method_label(MethodKind::gpm_prev_poly), method_label(MethodKind::igpm_poly),
      method_label(MethodKind::igpm_paris)};
  return labels;
}

MethodKind parse_method_label(std::string_view label) {
  std::string lowered(label);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (MethodKind kind : {MethodKind::gpm_curr, MethodKind::gpm_prev_zm_se,
                          MethodKind::gpm_prev_poly, MethodKind::igpm_poly,
                          MethodKind::igpm_paris}) {
    if (lowered == method_label(kind)) return kind;
  }
  std::string known;
  for (const std::string& l : method_labels()) {
    if (!known.empty()) known += ", ";
    known += l;
  }
  throw InvalidArgument("unknown method label '" + std::string(label) + "'; known labels: " +
                        known);
}

void MethodSpec::validate() const {
  if (order < 0) throw InvalidArgument("method order must be non-negative");
  if (extra_starts < 0) throw InvalidArgument("extra_starts must be non-negative");
  if (kind == MethodKind::igpm_paris) {
    if (!crack_growth) {
      throw InvalidArgument("method '" + method_label(kind) + "' needs a crack_growth config");
    }
    crack_growth->validate();
  } else if (crack_growth) {
    throw InvalidArgument("method '" + method_label(kind) +
                          "' does not take a crack_growth config");
  }
}

PreparedMethod prepare_method(const MethodSpec& spec, std::span<const Trajectory> previous,
                              TimingMode timing) {
  spec.validate();
  if (previous.empty()) throw InvalidArgument("method preparation needs previous trajectories");
  for (const Trajectory& t : previous) validate_trajectory(t);
  PreparedMethod prep;
  prep.spec = spec;
  auto work = [&] {
    switch (spec.kind) {
      case MethodKind::gpm_prev_zm_se: {
        ModelFamily family{MeanKind::zero, CovKind::squared_exponential, spec.order};
        prep.report = fit_previous(family, previous, train_options(spec));
        prep.model = prep.report->model();
        break;
      }
      case MethodKind::gpm_prev_poly: {
        ModelFamily family{MeanKind::polynomial, CovKind::polynomial, spec.order};
        prep.report = fit_previous(family, previous, train_options(spec));
        prep.model = prep.report->model();
        break;
      }
      case MethodKind::igpm_poly:
      case MethodKind::igpm_paris: {
        std::shared_ptr<const BasisSet> basis =
            spec.kind == MethodKind::igpm_poly
                ? BasisSet::polynomial(spec.order)
                : BasisSet::paris(*spec.crack_growth, spec.direct_quadrature);
        InferOptions io;
        io.estimator = spec.estimator;
        io.noise = spec.noise;
        prep.igpm = infer_model(previous, std::move(basis), io);
        prep.model = prep.igpm->gp();
        break;
      }
      case MethodKind::gpm_curr: {
        prep.family = ModelFamily{MeanKind::zero, CovKind::polynomial, spec.order};
        if (spec.cold_start) {
          prep.start = Hyperparameters{};
          prep.standardization = Standardization::fit(previous);
        } else {
          prep.report = fit_previous(prep.family, previous, train_options(spec));
          prep.start = prep.report->best;
          prep.standardization = prep.report->standardization;
        }
        break;
      }
    }
  };
  if (spec.kind == MethodKind::gpm_curr) {
    // seeding is free by protocol: no model is selected for this method
    work();
    prep.select_time_s = 0.0;
  } else {
    prep.select_time_s = run_timed(timing, work);
  }
  return prep;
}

double PredictionSeries::total_time_s() const {
  double sum = 0.0;
  for (const PredictionStep& s : steps) sum += s.time_s;
  return sum;
}

GpModel posterior_model_at(const PreparedMethod& prep, std::span<const double> prefix_xs,
                           std::span<const double> prefix_ys) {
  if (prep.spec.kind == MethodKind::gpm_curr) {
    TrainOptions topts = train_options(prep.spec);
    topts.standardization = prep.standardization;
    OptimizationReport report = fit_current(prep.family, prefix_xs, prefix_ys, prep.start, topts);
    return report.model();
  }
  if (!prep.model) throw InvalidArgument("prepared method holds no model");
  return *prep.model;
}

PredictionSeries sequential_predict(const PreparedMethod& prep, const Trajectory& held_out,
                                    const SequentialOptions& opts) {
  validate_trajectory(held_out);
  std::size_t n = held_out.xs.size();
  if (n < 2) {
    throw InvalidArgument("held-out trajectory '" + held_out.id +
                          "' needs at least 2 points for a prediction series");
  }
  PredictionSeries series;
  series.trajectory_id = held_out.id;
  series.target_x = held_out.xs.back();
  series.target_truth = held_out.ys.back();
  const double query[1] = {series.target_x};
  PosteriorOptions popts;
  popts.predictive_noise = prep.spec.predictive_noise;
  for (std::size_t i = 1; i < n; ++i) {
    std::span<const double> prefix_x(held_out.xs.data(), i);
    std::span<const double> prefix_y(held_out.ys.data(), i);
    PredictionStep step;
    step.prefix = static_cast<int>(i);
    auto work = [&] {
      GpModel model = posterior_model_at(prep, prefix_x, prefix_y);
      PosteriorPrediction post = posterior(model, prefix_x, prefix_y, query, popts);
      step.mean = post.mean[0];
      step.variance = post.var[0];
    };
    try {
      step.time_s = run_timed(opts.timing, work);
    } catch (...) {
      rethrow_with_context("trajectory '" + held_out.id + "' step " + std::to_string(i) + ": ");
    }
    series.steps.push_back(step);
  }
  return series;
}

MetricsRow metrics_from_series(const std::string& label, std::span<const PredictionSeries> series,
                               std::span<const double> select_times) {
  if (series.empty()) throw InvalidArgument("metrics need at least one prediction series");
  MetricsRow row;
  row.model = label;
  double rmse_sum = 0.0, rmse_half_sum = 0.0;
  double mape_sum = 0.0, mape_half_sum = 0.0;
  long mape_count = 0, mape_half_count = 0;
  double time_sum = 0.0;
  for (const PredictionSeries& s : series) {
    if (s.steps.empty()) {
      throw InvalidArgument("prediction series '" + s.trajectory_id + "' has no steps");
    }
    std::size_t n = s.steps.size() + 1;       // points in the trajectory
    std::size_t half_start = (n + 1) / 2;     // first prefix of the half metrics
    double sq = 0.0, sq_half = 0.0;
    double ape = 0.0, ape_half = 0.0;
    long ape_steps = 0, ape_half_steps = 0;
    std::size_t half_steps = 0;
    for (const PredictionStep& step : s.steps) {
      double err = step.mean - s.target_truth;
      bool in_half = static_cast<std::size_t>(step.prefix) >= half_start;
      sq += err * err;
      if (in_half) {
        sq_half += err * err;
        ++half_steps;
      }
      if (std::abs(s.target_truth) < kMapeGuard) {
        ++row.mape_skipped;
      } else {
        double rel = std::abs(err / s.target_truth);
        ape += rel;
        ++ape_steps;
        if (in_half) {
          ape_half += rel;
          ++ape_half_steps;
        }
      }
    }
    rmse_sum += std::sqrt(sq / static_cast<double>(s.steps.size()));
    rmse_half_sum += std::sqrt(sq_half / static_cast<double>(half_steps));
    if (ape_steps > 0) {
      mape_sum += ape / static_cast<double>(ape_steps);
      ++mape_count;
    }
    if (ape_half_steps > 0) {
      mape_half_sum += ape_half / static_cast<double>(ape_half_steps);
      ++mape_half_count;
    }
    time_sum += s.total_time_s();
  }
  double m = static_cast<double>(series.size());
  row.rmse = rmse_sum / m;
  row.rmse_half = rmse_half_sum / m;
  row.mape = mape_count > 0 ? mape_sum / static_cast<double>(mape_count) : kNan;
  row.mape_half = mape_half_count > 0 ? mape_half_sum / static_cast<double>(mape_half_count) : kNan;
  row.pred_time_s = time_sum / m;
  if (select_times.empty()) {
    row.select_time_s = kNan;
  } else {
    double sum = 0.0;
    for (double t : select_times) sum += t;
    row.select_time_s = sum / static_cast<double>(select_times.size());
  }
  return row;
}

LeaveOneOutResult leave_one_out(const MethodSpec& spec, std::span<const Trajectory> trajectories,
                                const BenchOptions& opts) {
  if (trajectories.size() < 3) {
    throw InvalidArgument("leave-one-out needs at least 3 trajectories, got " +
                          std::to_string(trajectories.size()));
  }
  // timing fidelity requires sequential execution
  int threads = opts.timing == TimingMode::off ? opts.threads : 1;
  SequentialOptions sopts;
  sopts.timing = opts.timing;
  LeaveOneOutResult result;
  std::vector<double> select_times;
  if (opts.infer_indices) {
    std::vector<char> is_infer(trajectories.size(), 0);
    for (std::size_t i : *opts.infer_indices) {
      if (i >= trajectories.size()) {
        throw InvalidArgument("inference index " + std::to_string(i) + " out of range");
      }
      is_infer[i] = 1;
    }
    std::vector<Trajectory> previous;
    std::vector<std::size_t> eval_idx;
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      if (is_infer[i]) {
        previous.push_back(trajectories[i]);
      } else {
        eval_idx.push_back(i);
      }
    }
    if (previous.empty()) throw InvalidArgument("inference split selects no trajectories");
    if (eval_idx.empty()) throw InvalidArgument("inference split leaves nothing to evaluate");
    PreparedMethod prep = prepare_method(spec, previous, opts.timing);
    select_times.push_back(prep.select_time_s);
    result.series.resize(eval_idx.size());
    parallel_for(eval_idx.size(), threads, [&](std::size_t k) {
      result.series[k] = sequential_predict(prep, trajectories[eval_idx[k]], sopts);
    });
  } else {
    result.series.resize(trajectories.size());
    select_times.resize(trajectories.size());
    parallel_for(trajectories.size(), threads, [&](std::size_t j) {
      std::vector<Trajectory> previous;
      previous.reserve(trajectories.size() - 1);
      for (std::size_t i = 0; i < trajectories.size(); ++i) {
        if (i != j) previous.push_back(trajectories[i]);
      }
      PreparedMethod prep = prepare_method(spec, previous, opts.timing);
      select_times[j] = prep.select_time_s;
      result.series[j] = sequential_predict(prep, trajectories[j], sopts);
    });
  }
  result.row = metrics_from_series(method_label(spec.kind), result.series, select_times);
  return result;
}

CalibrationResult calibration(std::span<const PredictionSeries> series,
                              std::span<const double> levels_percent) {
  long pairs = 0;
  for (const PredictionSeries& s : series) pairs += static_cast<long>(s.steps.size());
  if (pairs == 0) throw InvalidArgument("calibration needs at least one prediction step");
  CalibrationResult result;
  result.pairs = pairs;
  for (double level : levels_percent) {
    double z = z_for_level(level);
    long covered = 0;
    for (const PredictionSeries& s : series) {
      for (const PredictionStep& step : s.steps) {
        double half = z * std::sqrt(step.variance);
        if (std::abs(s.target_truth - step.mean) <= half) ++covered;
      }
    }
    result.levels.push_back(level);
    result.empirical.push_back(static_cast<double>(covered) / static_cast<double>(pairs));
  }
  return result;
}

VarianceForecast variance_forecast(const GpModel& model, std::span<const double> schedule,
                                   double target_x, std::span<const int> step_counts,
                                   bool predictive_noise) {
  if (!std::isfinite(target_x)) throw InvalidArgument("forecast target must be finite");
  for (double x : schedule) {
    if (!std::isfinite(x)) throw InvalidArgument("forecast schedule must be finite");
  }
  double z = z_for_level(95.0);
  VarianceForecast forecast;
  PosteriorOptions popts;
  popts.predictive_noise = predictive_noise;
  const double query[1] = {target_x};
  for (int s : step_counts) {
    if (s < 0 || static_cast<std::size_t>(s) > schedule.size()) {
      throw InvalidArgument("step count " + std::to_string(s) + " outside the schedule length " +
                            std::to_string(schedule.size()));
    }
    double variance = 0.0;
    if (s == 0) {
      variance = model.cov(target_x, target_x);
      if (predictive_noise) {
        double sd = model.noise_sd(target_x);
        variance += sd * sd;
      }
    } else {
      std::span<const double> xs(schedule.data(), static_cast<std::size_t>(s));
      std::vector<double> dummy(static_cast<std::size_t>(s), 0.0);
      variance = posterior(model, xs, dummy, query, popts).var[0];
    }
    forecast.steps.push_back(s);
    forecast.half_width.push_back(z * std::sqrt(variance));
  }
  return forecast;
}

CovarianceDiagnostics covariance_diagnostics(const GpModel& model,
                                             std::span<const double> grid) {
  if (grid.empty()) throw InvalidArgument("diagnostics grid is empty");
  CovarianceDiagnostics diag;
  diag.grid.assign(grid.begin(), grid.end());
  Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  diag.model_cov.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v = model.cov(grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]);
      diag.model_cov(i, j) = v;
      diag.model_cov(j, i) = v;
    }
  }
  return diag;
}

Eigen::MatrixXd sample_covariance_of_fits(std::span<const Trajectory> trajectories,
                                          const BasisSet& basis, const Standardization& s,
                                          std::span<const double> grid) {
  if (trajectories.size() < 2) {
    throw InsufficientTrajectories("sample covariance needs at least 2 trajectories, got " +
                                   std::to_string(trajectories.size()));
  }
  if (grid.empty()) throw InvalidArgument("diagnostics grid is empty");
  Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  Eigen::Index m = static_cast<Eigen::Index>(trajectories.size());
  // basis coordinates: raw-domain bases see raw locations, others standardized
  std::vector<double> coords(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    coords[i] = basis.raw_domain() ? grid[i] : s.to_u(grid[i]);
  }
  Eigen::MatrixXd design = basis.design(coords);
  Eigen::MatrixXd curves(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::VectorXd beta = fit_coefficients(trajectories[static_cast<std::size_t>(j)], basis, s);
    Eigen::VectorXd std_values = design * beta;
    for (Eigen::Index i = 0; i < n; ++i) curves(i, j) = s.to_y(std_values(i));
  }
  Eigen::VectorXd mean = curves.rowwise().mean();
  Eigen::MatrixXd centered = curves.colwise() - mean;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double v = centered.row(i).dot(centered.row(j)) / static_cast<double>(m - 1);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  return cov;
}

std::string metrics_csv(std::span<const MetricsRow> rows) {
  std::string out = "model,rmse,mape,rmse_half,mape_half,pred_time_s,select_time_s\n";
  for (const MetricsRow& r : rows) {
    out += r.model;
    for (double v : {r.rmse, r.mape, r.rmse_half, r.mape_half, r.pred_time_s, r.select_time_s}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string calibration_csv(const CalibrationResult& result) {
  std::string out = "level,empirical_frequency\n";
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    out += format_double(result.levels[i]);
    out += ',';
    out += format_double(result.empirical[i]);
    out += '\n';
  }
  return out;
}

std::string variance_forecast_csv(const VarianceForecast& forecast) {
  std::string out = "step,ci_halfwidth\n";
  for (std::size_t i = 0; i < forecast.steps.size(); ++i) {
    out += std::to_string(forecast.steps[i]);
    out += ',';
    out += format_double(forecast.half_width[i]);
    out += '\n';
  }
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string prediction_series_csv(const PredictionSeries& series) {
  std::string out = "prefix,mean,variance,time_s\n";
  for (const PredictionStep& step : series.steps) {
    out += std::to_string(step.prefix);
    out += ',';
    out += format_double(step.mean);
    out += ',';
    out += format_double(step.variance);
    out += ',';
    out += format_double(step.time_s);
    out += '\n';
  }
  return out;
}

}  // namespace phmgp
