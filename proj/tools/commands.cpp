#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <span>

#include "experiment_config.hpp"
#include "phmgp/bench.hpp"
#include "phmgp/dataset.hpp"
#include "phmgp/errors.hpp"
#include "phmgp/igpm_io.hpp"
#include "phmgp/svg.hpp"

namespace phmgp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kZ95 = 1.959963984540054;

struct Context {
  std::string command;
  ExperimentConfig cfg;
  fs::path out;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.flush();
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

/// The echo pins every resolved choice; re-running it reproduces the run.
void write_echo(const Context& ctx) {
  ExperimentConfig echo = ctx.cfg;
  echo.command = ctx.command;
  write_text(ctx.out / "config_echo.json", config_to_json(echo));
}

fs::path resolve_output_dir(const std::optional<std::string>& dir, const std::string& command) {
  const char* root = std::getenv("PHMGP_OUTPUT_ROOT");
  if (!dir) {
    if (!root) {
      throw UsageError("no output_dir in the config and PHMGP_OUTPUT_ROOT is unset");
    }
    return fs::absolute(fs::path(root) / command).lexically_normal();
  }
  fs::path p(*dir);
  if (p.is_absolute()) return p.lexically_normal();
  fs::path base = root ? fs::path(root) : fs::current_path();
  return fs::absolute(base / p).lexically_normal();
}

Context make_context(const std::string& command, const fs::path& config_path,
                     const CliOverrides& ov) {
  Context ctx;
  ctx.command = command;
  ctx.cfg = load_config_file(config_path);
  if (ov.output_dir) ctx.cfg.output_dir = *ov.output_dir;
  if (ov.threads) {
    if (*ov.threads < 1) throw UsageError("--threads must be at least 1");
    ctx.cfg.threads = *ov.threads;
  }
  if (ov.seed) ctx.cfg.seed = *ov.seed;
  if (ov.timing) ctx.cfg.timing = parse_timing_label(*ov.timing);
  if (ov.extra_starts) {
    if (*ov.extra_starts < 0) throw UsageError("--extra-starts must be non-negative");
    ctx.cfg.extra_starts = *ov.extra_starts;
  }
  if (ov.predictive_noise) ctx.cfg.predictive_noise = *ov.predictive_noise;

  if (ctx.cfg.timing != TimingMode::off) ctx.cfg.threads = 1;  // timed runs measure sequentially
  if (!ctx.cfg.predictive_noise) {
    // Coverage checks compare truths against the observable distribution, so
    // calibrate includes observation noise unless told otherwise.
    ctx.cfg.predictive_noise = (command == "calibrate");
  }

  fs::path out = resolve_output_dir(ctx.cfg.output_dir, command);
  ctx.cfg.output_dir = out.string();
  ctx.out = out;
  fs::create_directories(out);
  return ctx;
}

Dataset load_required_dataset(const Context& ctx) {
  if (!ctx.cfg.dataset) {
    throw UsageError(ctx.command + " requires a dataset manifest path in the config");
  }
  return load_dataset(*ctx.cfg.dataset);
}

std::vector<Trajectory> inference_set(const Dataset& ds) {
  auto idx = ds.inference_indices();
  if (!idx) return ds.trajectories;
  std::vector<Trajectory> out;
  out.reserve(idx->size());
  for (std::size_t i : *idx) out.push_back(ds.trajectories[i]);
  return out;
}

MethodSpec resolved_method(const Context& ctx, MethodKind kind, const Dataset* ds) {
  MethodSpec spec = ctx.cfg.method;
  spec.kind = kind;
  spec.extra_starts = ctx.cfg.extra_starts;
  spec.seed = ctx.cfg.seed;
  spec.predictive_noise = *ctx.cfg.predictive_noise;
  if (kind == MethodKind::igpm_paris) {
    if (!spec.crack_growth && ds && ds->manifest.crack_growth) {
      spec.crack_growth = ds->manifest.crack_growth;
    }
    if (!spec.crack_growth) {
      throw UsageError(
          "igpm-paris needs basis physics in the config or the dataset manifest");
    }
  } else {
    spec.crack_growth.reset();
  }
  spec.validate();
  return spec;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = (count == 1) ? lo : lo + (hi - lo) * i / (count - 1);
  }
  if (count > 1) out.back() = hi;
  return out;
}

std::string axis_label(const AxisSpec& axis) {
  return axis.unit == "1" ? axis.role : axis.role + " [" + axis.unit + "]";
}

json hyper_json(const Hyperparameters& h) {
  json j;
  j["sigma_f"] = h.sigma_f;
  j["length_scale"] = h.length_scale;
  j["offset"] = h.offset;
  j["sigma_y"] = h.sigma_y;
  std::vector<double> coeffs(h.mean_coeffs.data(), h.mean_coeffs.data() + h.mean_coeffs.size());
  j["mean_coeffs"] = coeffs;
  return j;
}

/// Wall-clock fields are left out so repeated runs write identical bytes.
json report_json(const OptimizationReport& r) {
  json j;
  j["family"] = {
      {"mean", r.family.mean == MeanKind::zero ? "zero" : "polynomial"},
      {"cov", r.family.cov == CovKind::squared_exponential ? "squared-exponential" : "polynomial"},
      {"order", r.family.order}};
  j["standardization"] = {{"x_mean", r.standardization.x_mean},
                          {"x_scale", r.standardization.x_scale},
                          {"y_mean", r.standardization.y_mean},
                          {"y_scale", r.standardization.y_scale}};
  j["best"] = hyper_json(r.best);
  j["best_value"] = r.best_value;
  j["seed"] = r.seed;
  j["starts"] = json::array();
  for (const StartReport& s : r.starts) {
    json e;
    e["value"] = s.value;
    e["iterations"] = s.iterations;
    e["failed"] = s.failed;
    if (!s.diagnostic.empty()) e["diagnostic"] = s.diagnostic;
    j["starts"].push_back(std::move(e));
  }
  return j;
}

FanChart make_fan(const PreparedMethod& prep, const Trajectory& t, std::size_t prefix,
                  bool predictive_noise, const DatasetManifest& manifest) {
  std::span<const double> px(t.xs.data(), prefix);
  std::span<const double> py(t.ys.data(), prefix);
  GpModel model = posterior_model_at(prep, px, py);
  std::vector<double> grid = linspace(t.xs.front(), t.xs.back(), 65);
  PosteriorOptions popts;
  popts.predictive_noise = predictive_noise;
  PosteriorPrediction post = posterior(model, px, py, grid, popts);

  FanChart chart;
  chart.title = method_label(prep.spec.kind) + ": '" + t.id + "' after " +
                std::to_string(prefix) + " of " + std::to_string(t.xs.size()) + " observations";
  chart.x_label = axis_label(manifest.x_axis);
  chart.y_label = axis_label(manifest.y_axis);
  chart.xs = grid;
  for (Eigen::Index i = 0; i < post.mean.size(); ++i) {
    double half = kZ95 * std::sqrt(std::max(post.var(i), 0.0));
    chart.mean.push_back(post.mean(i));
    chart.lower.push_back(post.mean(i) - half);
    chart.upper.push_back(post.mean(i) + half);
  }
  chart.truth_xs = t.xs;
  chart.truth_ys = t.ys;
  chart.observed_xs.assign(px.begin(), px.end());
  chart.observed_ys.assign(py.begin(), py.end());
  return chart;
}

/// Fixed previous-data model for forecast and diagnostics queries.
GpModel fixed_model(const PreparedMethod& prep, const std::string& command) {
  if (prep.model) return *prep.model;
  if (prep.igpm) return prep.igpm->gp();
  if (prep.report) return prep.report->model();
  throw UsageError(command + " needs a previous-data model; gpm-curr with cold_start has none");
}

int cmd_validate(const fs::path& config_path) {
  ValidationReport report = validate_config_file(config_path);
  std::cout << report_to_json(report);
  return report.ok() ? 0 : 1;
}

int cmd_ingest(Context& ctx) {
  Dataset ds = load_required_dataset(ctx);
  write_dataset(ds, ctx.out);
  write_echo(ctx);
  return 0;
}

int cmd_synthesize(Context& ctx) {
  if (!ctx.cfg.generator) {
    throw UsageError("synthesize requires a generator section in the config");
  }
  const GeneratorConfig& g = *ctx.cfg.generator;
  GeneratorSpec spec;
  spec.name = g.name;
  if (const auto* poly = std::get_if<PolyBasisDescriptor>(&g.basis)) {
    spec.basis = BasisSet::polynomial(poly->order);
  } else {
    const auto& paris = std::get<ParisBasisDescriptor>(g.basis);
    spec.basis = BasisSet::paris(paris.config, paris.direct_quadrature);
  }
  std::size_t p = g.mu.size();
  spec.mu = Eigen::Map<const Eigen::VectorXd>(g.mu.data(), static_cast<Eigen::Index>(p));
  spec.sigma.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < p; ++k) {
      spec.sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = g.sigma[i][k];
    }
  }
  spec.sigma_y = g.sigma_y;
  spec.grid = g.grid;
  spec.count = g.count;
  spec.seed = ctx.cfg.seed;
  spec.id_prefix = g.id_prefix;
  Dataset ds = synthesize_dataset(spec);
  write_dataset(ds, ctx.out);
  write_echo(ctx);
  return 0;
}

int cmd_select_order(Context& ctx) {
  Dataset ds = load_required_dataset(ctx);
  if (!ctx.cfg.q_candidates) {
    throw UsageError("select-order requires q_candidates in the config");
  }
  std::vector<Trajectory> previous = inference_set(ds);
  OrderSelection sel = select_order(previous, *ctx.cfg.q_candidates, ctx.cfg.seed);
  json j;
  j["order"] = sel.order;
  j["candidates"] = json::array();
  for (const OrderCandidate& cand : sel.candidates) {
    j["candidates"].push_back({{"order", cand.order},
                               {"mean_test_mse", cand.mean_test_mse},
                               {"skipped", cand.skipped},
                               {"feasible", cand.feasible}});
  }
  write_text(ctx.out / "order_selection.json", j.dump(2) + "\n");
  write_echo(ctx);
  return 0;
}

int cmd_fit(Context& ctx) {
  Dataset ds = load_required_dataset(ctx);
  MethodSpec spec = resolved_method(ctx, ctx.cfg.method.kind, &ds);
  if (spec.kind == MethodKind::gpm_curr && spec.cold_start) {
    throw UsageError("gpm-curr with cold_start trains only at prediction time; nothing to fit");
  }
  std::vector<Trajectory> previous = inference_set(ds);
  PreparedMethod prep = prepare_method(spec, previous, ctx.cfg.timing);
  if (prep.igpm) save_model(*prep.igpm, ctx.out / "model.json");
  if (prep.report) {
    write_text(ctx.out / "training_report.json", report_json(*prep.report).dump(2) + "\n");
  }
  write_echo(ctx);
  return 0;
}

int cmd_predict(Context& ctx) {
  Dataset ds = load_required_dataset(ctx);
  if (!ctx.cfg.held_out) {
    throw UsageError("predict requires held_out (a trajectory id) in the config");
  }
  const std::string& id = *ctx.cfg.held_out;
  auto it = std::find_if(ds.trajectories.begin(), ds.trajectories.end(),
                         [&](const Trajectory& t) { return t.id == id; });
  if (it == ds.trajectories.end()) {
    throw InvalidArgument("held_out trajectory '" + id + "' is not in dataset '" +
                          ds.manifest.name + "'");
  }
  Trajectory held = *it;
  std::vector<Trajectory> previous;
  for (const Trajectory& t : inference_set(ds)) {
    if (t.id != id) previous.push_back(t);
  }
  MethodSpec spec = resolved_method(ctx, ctx.cfg.method.kind, &ds);
  PreparedMethod prep = prepare_method(spec, previous, ctx.cfg.timing);
  PredictionSeries series = sequential_predict(prep, held, {ctx.cfg.timing});
  write_text(ctx.out / "prediction_series.csv", prediction_series_csv(series));

  bool pn = *ctx.cfg.predictive_noise;
  std::size_t n = held.xs.size();
  std::size_t prefix_full = n - 1;
  std::size_t prefix_half = std::min((n + 1) / 2, prefix_full);
  write_text(ctx.out / "fan_half.svg",
             svg_prediction_fan(make_fan(prep, held, prefix_half, pn, ds.manifest)));
  write_text(ctx.out / "fan_full.svg",
             svg_prediction_fan(make_fan(prep, held, prefix_full, pn, ds.manifest)));
  write_echo(ctx);
  return 0;
}

int cmd_benchmark(Context& ctx) {
  Dataset ds = load_required_dataset(ctx);
  if (ctx.cfg.methods.empty()) {
    ctx.cfg.methods = {method_label(ctx.cfg.method.kind)};
  }
  BenchOptions bopts;
  bopts.timing = ctx.cfg.timing;
  bopts.threads = ctx.cfg.threads;
  bopts.infer_indices = ds.inference_indices();
  std::vector<MetricsRow> rows;
  for (const std::string& label : ctx.cfg.methods) {
    MethodSpec spec = resolved_method(ctx, parse_method_label(label), &ds);
    LeaveOneOutResult result = leave_one_out(spec, ds.trajectories, bopts);
    rows.push_back(result.row);
  }
  write_text(ctx.out / "metrics.csv", metrics_csv(rows));
  write_echo(ctx);
  return 0;
}

int cmd_calibrate(Context& ctx) {
  Dataset ds = load_required_dataset(ctx);
  MethodSpec spec = resolved_method(ctx, ctx.cfg.method.kind, &ds);
  BenchOptions bopts;
  bopts.timing = ctx.cfg.timing;
  bopts.threads = ctx.cfg.threads;
  bopts.infer_indices = ds.inference_indices();
  LeaveOneOutResult result = leave_one_out(spec, ds.trajectories, bopts);
  CalibrationResult cal = calibration(result.series, ctx.cfg.levels);
  write_text(ctx.out / "calibration.csv", calibration_csv(cal));
  write_text(ctx.out / "calibration.svg",
             svg_calibration_bars(cal.levels, cal.empirical,
                                  "interval coverage: " + method_label(spec.kind) + " on '" +
                                      ds.manifest.name + "'"));
  write_echo(ctx);
  return 0;
}

int cmd_variance_forecast(Context& ctx) {
  Dataset ds = load_required_dataset(ctx);
  if (!ctx.cfg.schedule) {
    throw UsageError(
        "variance-forecast requires a schedule (an array or a {start, stop, count} object)");
  }
  MethodSpec spec = resolved_method(ctx, ctx.cfg.method.kind, &ds);
  std::vector<Trajectory> previous = inference_set(ds);
  PreparedMethod prep = prepare_method(spec, previous, TimingMode::off);
  GpModel model = fixed_model(prep, ctx.command);

  const std::vector<double>& schedule = *ctx.cfg.schedule;
  double target = ctx.cfg.target_x.value_or(schedule.back());
  std::vector<int> steps;
  if (ctx.cfg.steps) {
    steps = *ctx.cfg.steps;
  } else {
    steps.resize(schedule.size() + 1);
    for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = static_cast<int>(i);
  }
  VarianceForecast forecast =
      variance_forecast(model, schedule, target, steps, *ctx.cfg.predictive_noise);
  write_text(ctx.out / "variance_forecast.csv", variance_forecast_csv(forecast));

  FanChart chart;
  chart.title = "95% interval half-width at the prediction target";
  chart.x_label = "conditioned observations";
  chart.y_label = "half-width";
  for (std::size_t i = 0; i < forecast.steps.size(); ++i) {
    chart.xs.push_back(static_cast<double>(forecast.steps[i]));
    chart.mean.push_back(forecast.half_width[i]);
    chart.lower.push_back(forecast.half_width[i]);
    chart.upper.push_back(forecast.half_width[i]);
  }
  write_text(ctx.out / "variance_forecast.svg", svg_prediction_fan(chart));

  ctx.cfg.target_x = target;
  ctx.cfg.steps = steps;
  write_echo(ctx);
  return 0;
}

int cmd_diagnose(Context& ctx) {
  Dataset ds = load_required_dataset(ctx);
  MethodSpec spec = resolved_method(ctx, ctx.cfg.method.kind, &ds);
  std::vector<Trajectory> previous = inference_set(ds);
  PreparedMethod prep = prepare_method(spec, previous, TimingMode::off);
  GpModel model = fixed_model(prep, ctx.command);

  std::vector<double> grid;
  if (ctx.cfg.grid) {
    grid = *ctx.cfg.grid;
  } else {
    if (previous.empty()) throw UsageError("diagnose needs a grid or a non-empty inference set");
    double lo = previous.front().xs.front();
    double hi = previous.front().xs.back();
    for (const Trajectory& t : previous) {
      lo = std::min(lo, t.xs.front());
      hi = std::max(hi, t.xs.back());
    }
    grid = linspace(lo, hi, 33);
  }

  CovarianceDiagnostics diag = covariance_diagnostics(model, grid);
  write_text(ctx.out / "model_cov.csv", matrix_csv(diag.model_cov));
  write_text(ctx.out / "model_cov.svg",
             svg_heatmap(diag.model_cov, "model covariance: " + method_label(spec.kind)));
  if (prep.igpm) {
    Eigen::MatrixXd sample = sample_covariance_of_fits(previous, *prep.igpm->basis,
                                                       prep.igpm->standardization, grid);
    write_text(ctx.out / "sample_cov.csv", matrix_csv(sample));
    write_text(ctx.out / "sample_cov.svg",
               svg_heatmap(sample, "sample covariance of per-trajectory fits"));
  }
  ctx.cfg.grid = grid;
  write_echo(ctx);
  return 0;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "validate",  "ingest",    "synthesize",        "select-order", "fit",
      "predict",   "benchmark", "calibrate",         "variance-forecast", "diagnose"};
  return names;
}

int run_command(const std::string& command, const fs::path& config_path,
                const CliOverrides& overrides) {
  if (command == "validate") return cmd_validate(config_path);
  Context ctx = make_context(command, config_path, overrides);
  if (command == "ingest") return cmd_ingest(ctx);
  if (command == "synthesize") return cmd_synthesize(ctx);
  if (command == "select-order") return cmd_select_order(ctx);
  if (command == "fit") return cmd_fit(ctx);
  if (command == "predict") return cmd_predict(ctx);
  if (command == "benchmark") return cmd_benchmark(ctx);
  if (command == "calibrate") return cmd_calibrate(ctx);
  if (command == "variance-forecast") return cmd_variance_forecast(ctx);
  if (command == "diagnose") return cmd_diagnose(ctx);
  throw UsageError("unknown command '" + command + "'");
}

}  // namespace phmgp::cli
