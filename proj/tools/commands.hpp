#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace phmgp::cli {

/// Command-line flags that override the corresponding config fields.
struct CliOverrides {
  std::optional<std::string> output_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> timing;
  std::optional<int> extra_starts;
  std::optional<bool> predictive_noise;
};

const std::vector<std::string>& command_names();

/// Loads and validates the config, applies overrides, runs the command, and
/// writes its artifacts plus config_echo.json into the resolved output
/// directory.  Returns the process exit status (0 success; validate returns
/// 1 when violations exist).  Throws UsageError for misuse; domain errors
/// propagate for main() to render as error JSON.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const CliOverrides& overrides);

}  // namespace phmgp::cli
