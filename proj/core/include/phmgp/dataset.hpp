#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phmgp/basis.hpp"
#include "phmgp/paris.hpp"
#include "phmgp/trajectory.hpp"

namespace phmgp {

struct AxisSpec {
  std::string role = "location";
  std::string unit = "1";
};

struct NormalizationSpec {
  double divide_x_by = 1.0;
  double divide_y_by = 1.0;

  bool is_identity() const { return divide_x_by == 1.0 && divide_y_by == 1.0; }
};

/// Declares which trajectories feed model inference; the rest are held out
/// for evaluation.  Exactly one of the two members may be set.
struct SplitSpec {
  std::vector<std::string> infer_ids;  // explicit trajectory ids
  int infer_first_n = 0;               // or: first n trajectories in file order
};

struct DatasetManifest {
  std::string name;
  AxisSpec x_axis;
  AxisSpec y_axis;
  bool axis_flip = false;           // swap the CSV x and y columns at load
  NormalizationSpec normalization;  // divisors applied at load, after any flip
  std::optional<ParisLawConfig> crack_growth;
  std::vector<std::string> files;  // CSV paths relative to the manifest
  std::optional<SplitSpec> split;
  std::vector<std::string> provenance;  // free-form processing notes
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<Trajectory> trajectories;

  /// Indices of the inference trajectories per the manifest split; empty
  /// optional when the manifest declares no split.
  std::optional<std::vector<std::size_t>> inference_indices() const;
};

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Parses a `trajectory_id,x,y` CSV (UTF-8, LF, header required).  Rows of one
/// trajectory need not be contiguous; point order within a trajectory follows
/// row order.  Structural problems (missing or wrong header, no data rows)
/// raise SchemaError; malformed or non-finite fields and non-increasing xs
/// raise ParseError carrying the 1-based row number.
std::vector<Trajectory> read_trajectory_csv(const std::filesystem::path& path);

std::string trajectory_csv(std::span<const Trajectory> trajectories);
void write_trajectory_csv(std::span<const Trajectory> trajectories,
                          const std::filesystem::path& path);

DatasetManifest manifest_from_json_text(const std::string& text);
std::string manifest_to_json_text(const DatasetManifest& manifest);

/// Loads the manifest plus every referenced CSV, applies the axis flip and
/// then the normalization divisors, and validates all trajectory invariants.
/// The returned manifest echoes an identity normalization and no flip (both
/// already applied, noted under provenance), so re-loading a written copy
/// changes no value.
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// Writes `manifest.json` plus a single merged `trajectories.csv` into dir.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Trajectory ensemble factory: coefficient draws beta_j ~ N(mu, sigma) in
/// the given basis plus i.i.d. Gaussian observation noise on a shared grid.
struct GeneratorSpec {
  std::string name = "synthetic";
  std::shared_ptr<const BasisSet> basis;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;   // p x p, positive semidefinite
  double sigma_y = 0.0;    // observation noise standard deviation
  std::vector<double> grid;  // strictly increasing sampling locations
  int count = 0;             // number of trajectories
  std::uint64_t seed = 0;
  std::string id_prefix = "synth";

  void validate() const;  // InvalidArgument on shape mismatch or indefinite sigma
};

/// Draws the ensemble deterministically: per trajectory j, first p standard
/// normals for the coefficient draw, then n for the noise, in that order.
std::vector<Trajectory> synthesize(const GeneratorSpec& spec);

/// Wraps synthesize() with a manifest describing the generated files.
Dataset synthesize_dataset(const GeneratorSpec& spec);

}  // namespace phmgp
