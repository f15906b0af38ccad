#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phmgp/gp.hpp"
#include "phmgp/igpm.hpp"
#include "phmgp/train.hpp"

namespace phmgp {

/// The five investigated predictors.  The first trains on the observed prefix
/// alone (re-optimized every step, seeded from previous-data parameters); the
/// middle two train one GP on whole previous trajectories; the last two infer
/// the GP from per-trajectory basis coefficients.
enum class MethodKind { gpm_curr, gpm_prev_zm_se, gpm_prev_poly, igpm_poly, igpm_paris };

std::string method_label(MethodKind kind);
const std::vector<std::string>& method_labels();
MethodKind parse_method_label(std::string_view label);  // case-insensitive

struct MethodSpec {
  MethodKind kind = MethodKind::igpm_poly;
  int order = 1;  // polynomial degree for mean, covariance, and basis
  std::optional<ParisLawConfig> crack_growth;  // igpm_paris basis physics
  ErrorEstimator estimator = ErrorEstimator::rms;
  NoiseModelKind noise = NoiseModelKind::constant;
  int extra_starts = 7;    // trained methods: restarts beyond the seed point
  std::uint64_t seed = 0;  // trained methods: restart draw seed
  bool cold_start = false;          // gpm_curr: skip previous-data seeding
  bool direct_quadrature = false;   // igpm_paris: bypass the cached curves
  bool predictive_noise = false;    // include observation noise in variances

  void validate() const;  // InvalidArgument; physics config present iff igpm_paris
};

enum class TimingMode { off, single, median3 };

/// Previous-data stage output, fixed for an entire prediction series.
struct PreparedMethod {
  MethodSpec spec;
  std::optional<GpModel> model;              // fixed-parameter methods
  std::optional<IgpmModel> igpm;             // inferred methods
  std::optional<OptimizationReport> report;  // trained methods and the gpm_curr seed
  ModelFamily family;                        // gpm_curr per-step refit family
  Hyperparameters start;                     // gpm_curr per-step start point
  Standardization standardization;           // gpm_curr fit coordinates
  double select_time_s = 0.0;                // nan when timing is off
};

/// Runs the previous-data stage: training, inference, or seed preparation.
/// gpm_curr reports zero selection time (its per-step optimization is counted
/// as prediction work instead).
PreparedMethod prepare_method(const MethodSpec& spec, std::span<const Trajectory> previous,
                              TimingMode timing = TimingMode::off);

struct PredictionStep {
  int prefix = 0;        // observed points conditioned on
  double mean = 0.0;     // posterior mean at the final location
  double variance = 0.0; // posterior variance at the final location
  double time_s = 0.0;   // wall clock of the numeric work; nan when timing is off
};

struct PredictionSeries {
  std::string trajectory_id;
  double target_x = 0.0;
  double target_truth = 0.0;
  std::vector<PredictionStep> steps;  // prefixes 1 .. n-1 in order

  double total_time_s() const;
};

struct SequentialOptions {
  TimingMode timing = TimingMode::off;
};

/// Model answering queries after observing the given prefix: the fixed
/// prepared model, or the per-step re-optimized fit for gpm_curr.
GpModel posterior_model_at(const PreparedMethod& prep, std::span<const double> prefix_xs,
                           std::span<const double> prefix_ys);

/// Conditions on growing prefixes of the held-out trajectory and records the
/// posterior at its final location after each step.  Errors are rethrown with
/// the trajectory id and step index prefixed.
PredictionSeries sequential_predict(const PreparedMethod& prep, const Trajectory& held_out,
                                    const SequentialOptions& opts = {});

struct MetricsRow {
  std::string model;
  double rmse = 0.0;
  double mape = 0.0;
  double rmse_half = 0.0;
  double mape_half = 0.0;
  double pred_time_s = 0.0;    // mean whole-series prediction time
  double select_time_s = 0.0;  // mean previous-data stage time
  long mape_skipped = 0;       // steps dropped by the |truth| < 1e-12 guard
};

/// Error aggregation: per trajectory, the root mean squared last-point error
/// over all steps (and from step ceil(n/2) for the half variant), averaged
/// across trajectories; MAPE analogous on |error / truth|.
MetricsRow metrics_from_series(const std::string& label, std::span<const PredictionSeries> series,
                               std::span<const double> select_times);

struct BenchOptions {
  TimingMode timing = TimingMode::off;
  int threads = 1;  // timing runs force sequential execution
  std::optional<std::vector<std::size_t>> infer_indices;  // fixed inference split
};

struct LeaveOneOutResult {
  MetricsRow row;
  std::vector<PredictionSeries> series;  // one per evaluated trajectory
};

/// Without a split: every trajectory is held out once against all others.
/// With infer_indices: one shared model from the inference set, evaluated on
/// the complement.
LeaveOneOutResult leave_one_out(const MethodSpec& spec, std::span<const Trajectory> trajectories,
                                const BenchOptions& opts = {});

struct CalibrationResult {
  std::vector<double> levels;     // nominal central-interval levels, percent
  std::vector<double> empirical;  // observed coverage per level
  long pairs = 0;                 // evaluated (trajectory, step) count
};

/// Fraction of steps whose true final value falls inside the symmetric
/// central interval mean +- z * std at each level.
CalibrationResult calibration(std::span<const PredictionSeries> series,
                              std::span<const double> levels_percent);

struct VarianceForecast {
  std::vector<int> steps;
  std::vector<double> half_width;  // symmetric 95% half-widths
};

/// Posterior variance at the target after conditioning on the first s
/// schedule locations with dummy values; well defined before any measurement
/// exists because the variance never depends on observed values.
VarianceForecast variance_forecast(const GpModel& model, std::span<const double> schedule,
                                   double target_x, std::span<const int> step_counts,
                                   bool predictive_noise = false);

struct CovarianceDiagnostics {
  std::vector<double> grid;
  Eigen::MatrixXd model_cov;  // noise-free prior covariance on grid x grid
};

CovarianceDiagnostics covariance_diagnostics(const GpModel& model, std::span<const double> grid);

/// Unbiased sample covariance across trajectories of their basis-fit curve
/// reconstructions evaluated on the grid (raw units).
Eigen::MatrixXd sample_covariance_of_fits(std::span<const Trajectory> trajectories,
                                          const BasisSet& basis, const Standardization& s,
                                          std::span<const double> grid);

// CSV renderings (shortest round-trip floats; nan spelled "nan").
std::string metrics_csv(std::span<const MetricsRow> rows);
std::string calibration_csv(const CalibrationResult& result);
std::string variance_forecast_csv(const VarianceForecast& forecast);
std::string matrix_csv(const Eigen::MatrixXd& m);
std::string prediction_series_csv(const PredictionSeries& series);

}  // namespace phmgp
