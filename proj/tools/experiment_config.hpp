#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phmgp/basis.hpp"
#include "phmgp/bench.hpp"

namespace phmgp::cli {

/// Command-line misuse or an invalid config file; exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One config problem, located by a JSON pointer into the experiment file.
struct Violation {
  std::string pointer;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Trajectory-ensemble generator settings for the synthesize command.
struct GeneratorConfig {
  std::string name = "synthetic";
  BasisDescriptor basis = PolyBasisDescriptor{1};
  std::vector<double> mu;
  std::vector<std::vector<double>> sigma;  // square, same size as mu
  double sigma_y = 0.0;
  std::vector<double> grid;  // strictly increasing sampling locations
  int count = 0;
  std::string id_prefix = "synth";
};

/// One experiment, fully described: dataset, method, estimator choices,
/// seeds, and output destination.  Location lists given as
/// {start, stop, count} objects are expanded to explicit points at load
/// time, and the dataset path is resolved against the config file's
/// directory, so an echoed config reproduces the run from anywhere.
struct ExperimentConfig {
  std::optional<std::string> command;  // provenance note written into echoes
  std::optional<std::string> dataset;  // manifest path, absolute once loaded
  MethodSpec method;
  std::vector<std::string> methods;  // benchmark comparison set (labels)
  std::uint64_t seed = 0;
  std::optional<std::string> output_dir;
  std::optional<bool> predictive_noise;  // command-specific default when unset
  int extra_starts = 7;
  int threads = 1;
  TimingMode timing = TimingMode::off;
  std::vector<double> levels{50.0, 90.0, 95.0, 99.0};
  std::optional<std::vector<int>> q_candidates;
  std::optional<std::vector<double>> schedule;  // forecast conditioning locations
  std::optional<std::vector<double>> grid;      // diagnostics evaluation grid
  std::optional<double> target_x;
  std::optional<std::vector<int>> steps;
  std::optional<std::string> held_out;
  std::optional<GeneratorConfig> generator;
};

/// Schema and cross-field checks plus dataset reachability; never runs any
/// numeric work.  Unreadable or unparsable files yield a report with a
/// single root-pointer violation rather than an exception.
ValidationReport validate_config_file(const std::filesystem::path& path);

std::string report_to_json(const ValidationReport& report);

/// Parses and validates; throws UsageError carrying every violation when the
/// report is non-empty.
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Serializes the resolved config; load_config_file on the result yields the
/// same config.  Written into every output directory as config_echo.json.
std::string config_to_json(const ExperimentConfig& config);

std::string timing_label(TimingMode mode);
TimingMode parse_timing_label(const std::string& label);  // UsageError on unknown

}  // namespace phmgp::cli
