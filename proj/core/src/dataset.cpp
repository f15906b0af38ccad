#include "phmgp/dataset.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>
#include <unordered_map>
#include <unordered_set>

#include "phmgp/errors.hpp"

namespace phmgp {

namespace {

using nlohmann::json;

constexpr int kManifestFormatVersion = 1;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SchemaError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw SchemaError("write to '" + path.string() + "' failed");
}

struct CsvRecord {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  long row = 0;  // 1-based file row, header included
};

double parse_field_double(std::string_view field, long row, const std::string& file,
                          const char* column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(file + " row " + std::to_string(row) + ": column '" + column +
                         "' is not a number: '" + std::string(field) + "'",
                     row);
  }
  if (!std::isfinite(value)) {
    throw ParseError(file + " row " + std::to_string(row) + ": column '" + column +
                         "' is not finite",
                     row);
  }
  return value;
}

std::vector<CsvRecord> parse_csv_records(const std::string& text, const std::string& file) {
  std::vector<CsvRecord> records;
  std::size_t pos = 0;
  long row = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    if (pos == text.size()) break;
    std::size_t eol = text.find('\n', pos);
    std::string_view line(text.data() + pos, (eol == std::string::npos ? text.size() : eol) - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++row;
    if (!saw_header) {
      if (line != "trajectory_id,x,y") {
        throw SchemaError(file + ": first row must be the header 'trajectory_id,x,y', got '" +
                          std::string(line) + "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;  // tolerate a trailing blank line
    std::size_t c1 = line.find(',');
    std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        line.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError(file + " row " + std::to_string(row) + ": expected 3 comma-separated fields",
                       row);
    }
    CsvRecord rec;
    rec.id = std::string(line.substr(0, c1));
    if (rec.id.empty()) {
      throw ParseError(file + " row " + std::to_string(row) + ": empty trajectory_id", row);
    }
    rec.x = parse_field_double(line.substr(c1 + 1, c2 - c1 - 1), row, file, "x");
    rec.y = parse_field_double(line.substr(c2 + 1), row, file, "y");
    rec.row = row;
    records.push_back(std::move(rec));
  }
  if (!saw_header) throw SchemaError(file + ": empty file, expected header 'trajectory_id,x,y'");
  if (records.empty()) throw SchemaError(file + ": no data rows");
  return records;
}

std::vector<Trajectory> assemble_trajectories(std::vector<CsvRecord> records, bool axis_flip,
                                              const NormalizationSpec& norm,
                                              const std::string& file) {
  std::vector<Trajectory> out;
  std::unordered_map<std::string, std::size_t> index;
  for (CsvRecord& rec : records) {
    double x = axis_flip ? rec.y : rec.x;
    double y = axis_flip ? rec.x : rec.y;
    x /= norm.divide_x_by;
    y /= norm.divide_y_by;
    auto [it, inserted] = index.emplace(rec.id, out.size());
    if (inserted) out.push_back(Trajectory{rec.id, {}, {}});
    Trajectory& t = out[it->second];
    if (!t.xs.empty() && x <= t.xs.back()) {
      throw ParseError(file + " row " + std::to_string(rec.row) + ": x not strictly increasing " +
                           "within trajectory '" + rec.id + "'",
                       rec.row);
    }
    t.xs.push_back(x);
    t.ys.push_back(y);
  }
  for (const Trajectory& t : out) validate_trajectory(t);
  return out;
}

const json& require(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

std::string require_string(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw SchemaError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw SchemaError(where + ": field '" + key + "' must be a number");
  return it->get<double>();
}

AxisSpec axis_from_json(const json& j, const char* key, const std::string& where) {
  AxisSpec axis;
  auto it = j.find(key);
  if (it == j.end()) return axis;
  if (!it->is_object()) throw SchemaError(where + ": field '" + key + "' must be an object");
  if (it->contains("role")) axis.role = require_string(*it, "role", where);
  if (it->contains("unit")) axis.unit = require_string(*it, "unit", where);
  return axis;
}

ParisLawConfig paris_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": 'crack_growth' must be an object");
  ParisLawConfig cfg;
  cfg.width = number_or(j, "width", cfg.width, where);
  cfg.stress_range = number_or(j, "stress_range", cfg.stress_range, where);
  cfg.initial_crack = number_or(j, "initial_crack", cfg.initial_crack, where);
  cfg.growth_scale = number_or(j, "growth_scale", cfg.growth_scale, where);
  if (j.contains("exponents")) {
    const json& exps = j.at("exponents");
    if (!exps.is_array() || exps.empty()) {
      throw SchemaError(where + ": 'crack_growth.exponents' must be a non-empty array");
    }
    cfg.exponents.clear();
    for (const json& e : exps) {
      if (!e.is_number()) throw SchemaError(where + ": 'crack_growth.exponents' must be numeric");
      cfg.exponents.push_back(e.get<double>());
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw SchemaError(where + ": invalid crack_growth config: " + e.what());
  }
  return cfg;
}

json paris_to_json(const ParisLawConfig& cfg) {
  json j;
  j["width"] = cfg.width;
  j["stress_range"] = cfg.stress_range;
  j["initial_crack"] = cfg.initial_crack;
  j["growth_scale"] = cfg.growth_scale;
  j["exponents"] = cfg.exponents;
  return j;
}

}  // namespace

std::optional<std::vector<std::size_t>> Dataset::inference_indices() const {
  if (!manifest.split) return std::nullopt;
  const SplitSpec& split = *manifest.split;
  std::vector<std::size_t> indices;
  if (!split.infer_ids.empty()) {
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < trajectories.size(); ++i) by_id.emplace(trajectories[i].id, i);
    for (const std::string& id : split.infer_ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw SchemaError("split names unknown trajectory '" + id + "'");
      }
      indices.push_back(it->second);
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  } else {
    if (split.infer_first_n > static_cast<int>(trajectories.size())) {
      throw SchemaError("split asks for the first " + std::to_string(split.infer_first_n) +
                        " trajectories but the dataset has " +
                        std::to_string(trajectories.size()));
    }
    for (int i = 0; i < split.infer_first_n; ++i) indices.push_back(static_cast<std::size_t>(i));
  }
  return indices;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<Trajectory> read_trajectory_csv(const std::filesystem::path& path) {
  std::string file = path.filename().string();
  return assemble_trajectories(parse_csv_records(read_file(path), file), false,
                               NormalizationSpec{}, file);
}

std::string trajectory_csv(std::span<const Trajectory> trajectories) {
  std::string out = "trajectory_id,x,y\n";
  for (const Trajectory& t : trajectories) {
    if (t.id.find_first_of(",\r\n\"") != std::string::npos) {
      throw InvalidArgument("trajectory id '" + t.id + "' contains CSV delimiters");
    }
    validate_trajectory(t);
    for (std::size_t i = 0; i < t.xs.size(); ++i) {
      out += t.id;
      out += ',';
      out += format_double(t.xs[i]);
      out += ',';
      out += format_double(t.ys[i]);
      out += '\n';
    }
  }
  return out;
}

void write_trajectory_csv(std::span<const Trajectory> trajectories,
                          const std::filesystem::path& path) {
  write_file(path, trajectory_csv(trajectories));
}

DatasetManifest manifest_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("manifest is unparsable: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("manifest must be a JSON object");
  const std::string where = "manifest";
  const json& version = require(j, "format_version", where);
  if (!version.is_number_integer() || version.get<int>() != kManifestFormatVersion) {
    throw SchemaError("manifest: unsupported format_version");
  }
  DatasetManifest m;
  m.name = require_string(j, "name", where);
  m.x_axis = axis_from_json(j, "x_axis", where);
  m.y_axis = axis_from_json(j, "y_axis", where);
  if (j.contains("axis_flip")) {
    if (!j.at("axis_flip").is_boolean()) throw SchemaError("manifest: 'axis_flip' must be a bool");
    m.axis_flip = j.at("axis_flip").get<bool>();
  }
  if (j.contains("normalization")) {
    const json& n = j.at("normalization");
    if (!n.is_object()) throw SchemaError("manifest: 'normalization' must be an object");
    m.normalization.divide_x_by = number_or(n, "divide_x_by", 1.0, where);
    m.normalization.divide_y_by = number_or(n, "divide_y_by", 1.0, where);
    if (!std::isfinite(m.normalization.divide_x_by) || m.normalization.divide_x_by == 0.0 ||
        !std::isfinite(m.normalization.divide_y_by) || m.normalization.divide_y_by == 0.0) {
      throw SchemaError("manifest: normalization divisors must be finite and nonzero");
    }
  }
  if (j.contains("crack_growth")) m.crack_growth = paris_from_json(j.at("crack_growth"), where);
  const json& files = require(j, "files", where);
  if (!files.is_array() || files.empty()) {
    throw SchemaError("manifest: 'files' must be a non-empty array");
  }
  for (const json& f : files) {
    if (!f.is_string()) throw SchemaError("manifest: 'files' entries must be strings");
    m.files.push_back(f.get<std::string>());
  }
  if (j.contains("split")) {
    const json& s = j.at("split");
    if (!s.is_object()) throw SchemaError("manifest: 'split' must be an object");
    SplitSpec split;
    if (s.contains("infer_ids")) {
      const json& ids = s.at("infer_ids");
      if (!ids.is_array() || ids.empty()) {
        throw SchemaError("manifest: 'split.infer_ids' must be a non-empty array");
      }
      for (const json& id : ids) {
        if (!id.is_string()) throw SchemaError("manifest: 'split.infer_ids' must hold strings");
        split.infer_ids.push_back(id.get<std::string>());
      }
    }
    if (s.contains("infer_first_n")) {
      const json& n = s.at("infer_first_n");
      if (!n.is_number_integer() || n.get<int>() <= 0) {
        throw SchemaError("manifest: 'split.infer_first_n' must be a positive integer");
      }
      split.infer_first_n = n.get<int>();
    }
    if (split.infer_ids.empty() == (split.infer_first_n == 0)) {
      throw SchemaError("manifest: 'split' needs exactly one of infer_ids or infer_first_n");
    }
    m.split = std::move(split);
  }
  if (j.contains("provenance")) {
    const json& p = j.at("provenance");
    if (!p.is_array()) throw SchemaError("manifest: 'provenance' must be an array");
    for (const json& line : p) {
      if (!line.is_string()) throw SchemaError("manifest: 'provenance' must hold strings");
      m.provenance.push_back(line.get<std::string>());
    }
  }
  return m;
}

std::string manifest_to_json_text(const DatasetManifest& m) {
  json j;
  j["format_version"] = kManifestFormatVersion;
  j["name"] = m.name;
  j["x_axis"] = {{"role", m.x_axis.role}, {"unit", m.x_axis.unit}};
  j["y_axis"] = {{"role", m.y_axis.role}, {"unit", m.y_axis.unit}};
  j["axis_flip"] = m.axis_flip;
  j["normalization"] = {{"divide_x_by", m.normalization.divide_x_by},
                        {"divide_y_by", m.normalization.divide_y_by}};
  if (m.crack_growth) j["crack_growth"] = paris_to_json(*m.crack_growth);
  j["files"] = m.files;
  if (m.split) {
    json s = json::object();
    if (!m.split->infer_ids.empty()) {
      s["infer_ids"] = m.split->infer_ids;
    } else {
      s["infer_first_n"] = m.split->infer_first_n;
    }
    j["split"] = s;
  }
  if (!m.provenance.empty()) j["provenance"] = m.provenance;
  return j.dump(2) + "\n";
}

Dataset load_dataset(const std::filesystem::path& manifest_path) {
  Dataset ds;
  ds.manifest = manifest_from_json_text(read_file(manifest_path));
  std::filesystem::path dir = manifest_path.parent_path();
  std::unordered_set<std::string> seen_ids;
  for (const std::string& rel : ds.manifest.files) {
    std::filesystem::path file_path = dir / rel;
    if (!std::filesystem::exists(file_path)) {
      throw SchemaError("manifest references missing file '" + rel + "'");
    }
    std::vector<Trajectory> loaded =
        assemble_trajectories(parse_csv_records(read_file(file_path), rel), ds.manifest.axis_flip,
                              ds.manifest.normalization, rel);
    for (Trajectory& t : loaded) {
      if (!seen_ids.insert(t.id).second) {
        throw SchemaError("duplicate trajectory id '" + t.id + "' across files");
      }
      ds.trajectories.push_back(std::move(t));
    }
  }
  if (ds.manifest.axis_flip) ds.manifest.provenance.push_back("swapped x and y columns");
  if (!ds.manifest.normalization.is_identity()) {
    ds.manifest.provenance.push_back("divided x by " +
                                     format_double(ds.manifest.normalization.divide_x_by) +
                                     ", y by " +
                                     format_double(ds.manifest.normalization.divide_y_by));
  }
  ds.manifest.axis_flip = false;
  ds.manifest.normalization = NormalizationSpec{};
  ds.inference_indices();  // validates the split against the loaded ids
  return ds;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  DatasetManifest echo = dataset.manifest;
  echo.axis_flip = false;
  echo.normalization = NormalizationSpec{};
  echo.files = {"trajectories.csv"};
  write_trajectory_csv(dataset.trajectories, dir / "trajectories.csv");
  write_file(dir / "manifest.json", manifest_to_json_text(echo));
}

void GeneratorSpec::validate() const {
  if (!basis) throw InvalidArgument("generator needs a basis");
  Eigen::Index p = static_cast<Eigen::Index>(basis->size());
  if (mu.size() != p) {
    throw InvalidArgument("generator mu has " + std::to_string(mu.size()) + " entries, basis has " +
                          std::to_string(p));
  }
  if (sigma.rows() != p || sigma.cols() != p) {
    throw InvalidArgument("generator sigma must be " + std::to_string(p) + "x" +
                          std::to_string(p));
  }
  if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
    throw InvalidArgument("generator sigma must be symmetric");
  }
  if (!(sigma_y >= 0.0) || !std::isfinite(sigma_y)) {
    throw InvalidArgument("generator sigma_y must be finite and non-negative");
  }
  if (count < 1) throw InvalidArgument("generator count must be at least 1");
  if (grid.empty()) throw InvalidArgument("generator grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw InvalidArgument("generator grid must be finite");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw InvalidArgument("generator grid must be strictly increasing");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  double max_eig = p == 0 ? 0.0 : eig.eigenvalues().cwiseAbs().maxCoeff();
  if (eig.eigenvalues().minCoeff() < -1e-10 * std::max(max_eig, 1.0)) {
    throw InvalidArgument("generator sigma is not positive semidefinite");
  }
}

std::vector<Trajectory> synthesize(const GeneratorSpec& spec) {
  spec.validate();
  Eigen::Index p = static_cast<Eigen::Index>(spec.basis->size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(spec.sigma);
  Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd transform =
      eig.eigenvectors() * clamped.cwiseSqrt().asDiagonal();  // maps N(0,I) to N(0,sigma)
  Eigen::MatrixXd design = spec.basis->design(spec.grid);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int j = 0; j < spec.count; ++j) {
    Eigen::VectorXd z(p);
    for (Eigen::Index k = 0; k < p; ++k) z(k) = gauss(rng);
    Eigen::VectorXd beta = spec.mu + transform * z;
    Eigen::VectorXd values = design * beta;
    Trajectory t;
    t.id = spec.id_prefix + "-" + std::to_string(j);
    t.xs = spec.grid;
    t.ys.resize(spec.grid.size());
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
      t.ys[i] = values(static_cast<Eigen::Index>(i)) + spec.sigma_y * gauss(rng);
    }
    validate_trajectory(t);
    out.push_back(std::move(t));
  }
  return out;
}

Dataset synthesize_dataset(const GeneratorSpec& spec) {
  Dataset ds;
  ds.trajectories = synthesize(spec);
  ds.manifest.name = spec.name;
  ds.manifest.y_axis.role = "response";
  ds.manifest.files = {"trajectories.csv"};
  ds.manifest.provenance = {"synthesized from seed " + std::to_string(spec.seed)};
  if (const auto* paris = std::get_if<ParisBasisDescriptor>(&spec.basis->descriptor())) {
    ds.manifest.crack_growth = paris->config;
  }
  return ds;
}

}  // namespace phmgp
