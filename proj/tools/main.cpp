#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <string>

#include "commands.hpp"
#include "experiment_config.hpp"
#include "phmgp/errors.hpp"

namespace {

void print_error_json(const std::string& type, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Gaussian process prognostics: dataset tooling, model training and "
      "inference, and prediction benchmarks.  Every command reads one JSON "
      "config and writes its artifacts plus a resolved config echo into the "
      "output directory."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string timing;
  int extra_starts = 0;
  bool pn_on = false;
  bool pn_off = false;

  const struct {
    const char* name;
    const char* help;
  } kCommands[] = {
      {"validate", "Check a config file and print a violation report as JSON"},
      {"ingest", "Load a dataset manifest and write the normalized copy"},
      {"synthesize", "Draw a synthetic trajectory ensemble from a generator spec"},
      {"select-order", "Choose a polynomial order by held-out split error"},
      {"fit", "Run the previous-data stage and save the model or training report"},
      {"predict", "Sequential prediction series and fan charts for one held-out trajectory"},
      {"benchmark", "Leave-one-out error and timing table over the configured methods"},
      {"calibrate", "Empirical central-interval coverage against nominal levels"},
      {"variance-forecast", "Posterior-variance schedule, defined before any measurement exists"},
      {"diagnose", "Model covariance heatmap and the sample covariance of fitted curves"},
  };

  for (const auto& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("-c,--config", config_path, "Experiment config JSON file")->required();
    if (std::string(cmd.name) == "validate") continue;
    sub->add_option("-o,--out", out_dir,
                    "Output directory; overrides the config's output_dir.  Relative paths "
                    "resolve against PHMGP_OUTPUT_ROOT when that is set");
    sub->add_option("--threads", threads,
                    "Worker threads for leave-one-out folds (timing runs force 1)");
    sub->add_option("--seed", seed, "Seed override for restarts, splits, and generators");
    sub->add_option("--timing", timing, "Timing mode: off, single, or median3");
    sub->add_option("--extra-starts", extra_starts,
                    "Optimizer restarts beyond the first start point");
    sub->add_flag("--predictive-noise", pn_on,
                  "Include observation noise in predictive variances");
    sub->add_flag("--no-predictive-noise", pn_off,
                  "Report latent-function variances without observation noise");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error_json("usage", e.what());
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  phmgp::cli::CliOverrides ov;
  if (given("--out")) ov.output_dir = out_dir;
  if (given("--threads")) ov.threads = threads;
  if (given("--seed")) ov.seed = seed;
  if (given("--timing")) ov.timing = timing;
  if (given("--extra-starts")) ov.extra_starts = extra_starts;
  if (pn_on && pn_off) {
    print_error_json("usage", "--predictive-noise conflicts with --no-predictive-noise");
    return 2;
  }
  if (pn_on) ov.predictive_noise = true;
  if (pn_off) ov.predictive_noise = false;

  try {
    return phmgp::cli::run_command(sub->get_name(), config_path, ov);
  } catch (const phmgp::cli::UsageError& e) {
    print_error_json("usage", e.what());
    return 2;
  } catch (const phmgp::InvalidArgument& e) {
    print_error_json("invalid-argument", e.what());
    return 1;
  } catch (const phmgp::ParseError& e) {
    print_error_json("parse", e.what());
    return 1;
  } catch (const phmgp::SchemaError& e) {
    print_error_json("schema", e.what());
    return 1;
  } catch (const phmgp::TrainingFailed& e) {
    print_error_json("training-failed", e.what());
    return 1;
  } catch (const phmgp::NumericalError& e) {
    print_error_json("numerical", e.what());
    return 1;
  } catch (const phmgp::QuadratureError& e) {
    print_error_json("quadrature", e.what());
    return 1;
  } catch (const phmgp::DomainError& e) {
    print_error_json("domain", e.what());
    return 1;
  } catch (const phmgp::IllConditionedBasis& e) {
    print_error_json("ill-conditioned-basis", e.what());
    return 1;
  } catch (const phmgp::InsufficientTrajectories& e) {
    print_error_json("insufficient-trajectories", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error_json("error", e.what());
    return 1;
  }
}
