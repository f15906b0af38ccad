#include "phmgp/igpm_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "phmgp/errors.hpp"

namespace phmgp {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("expected a numeric array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const json& e = j[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw SchemaError("expected a numeric array");
    v(i) = e.get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("expected a non-empty matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw SchemaError("expected a numeric matrix");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw SchemaError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::string model_to_json(const IgpmModel& model) {
  if (!model.basis) throw InvalidArgument("model has no basis");
  json basis;
  if (const auto* poly = std::get_if<PolyBasisDescriptor>(&model.basis->descriptor())) {
    basis["kind"] = "polynomial";
    basis["order"] = poly->order;
  } else {
    const auto& paris = std::get<ParisBasisDescriptor>(model.basis->descriptor());
    basis["kind"] = "crack-growth";
    basis["width"] = paris.config.width;
    basis["stress_range"] = paris.config.stress_range;
    basis["initial_crack"] = paris.config.initial_crack;
    basis["growth_scale"] = paris.config.growth_scale;
    basis["exponents"] = paris.config.exponents;
  }

  json noise;
  if (const auto* cn = std::get_if<ConstantNoise>(&model.noise)) {
    noise["kind"] = "constant";
    noise["sigma_y"] = cn->sigma_y;
  } else {
    noise["kind"] = "scaled";
    noise["sigma_x"] = std::get<ScaledNoise>(model.noise).sigma_x;
  }
  noise["at_lower_bound"] = model.noise_at_bound;

  json out;
  out["format_version"] = kFormatVersion;
  out["basis"] = basis;
  out["coefficients"] = {
      {"mu", vector_to_json(model.stats.mu)},
      {"sigma", matrix_to_json(model.stats.sigma)},
      {"trajectory_count", model.stats.trajectory_count},
      {"perturbation", model.stats.perturbation},
  };
  out["noise"] = noise;
  out["standardization"] = {
      {"x_mean", model.standardization.x_mean},
      {"x_scale", model.standardization.x_scale},
      {"y_mean", model.standardization.y_mean},
      {"y_scale", model.standardization.y_scale},
  };
  return out.dump(2) + "\n";
}

IgpmModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model JSON is unparsable: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("model JSON must be an object");
  const json& version = require(j, "format_version");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
    throw SchemaError("unsupported model format version");
  }

  IgpmModel model;
  const json& basis = require(j, "basis");
  std::string kind = require(basis, "kind").get<std::string>();
  if (kind == "polynomial") {
    const json& order = require(basis, "order");
    if (!order.is_number_integer()) throw SchemaError("basis order must be an integer");
    model.basis = BasisSet::polynomial(order.get<int>());
  } else if (kind == "crack-growth") {
    ParisLawConfig cfg;
    cfg.width = require_number(basis, "width");
    cfg.stress_range = require_number(basis, "stress_range");
    cfg.initial_crack = require_number(basis, "initial_crack");
    cfg.growth_scale = require_number(basis, "growth_scale");
    const json& exps = require(basis, "exponents");
    if (!exps.is_array() || exps.empty()) throw SchemaError("exponents must be a non-empty array");
    for (const auto& e : exps) {
      if (!e.is_number()) throw SchemaError("exponents must be numeric");
      cfg.exponents.push_back(e.get<double>());
    }
    model.basis = BasisSet::paris(cfg);
  } else {
    throw SchemaError("unknown basis kind '" + kind + "'");
  }

  const json& coeff = require(j, "coefficients");
  model.stats.mu = vector_from_json(require(coeff, "mu"));
  model.stats.sigma = matrix_from_json(require(coeff, "sigma"));
  const json& count = require(coeff, "trajectory_count");
  if (!count.is_number_integer()) throw SchemaError("trajectory_count must be an integer");
  model.stats.trajectory_count = count.get<int>();
  model.stats.perturbation = require_number(coeff, "perturbation");
  if (model.stats.mu.size() != model.basis->size() ||
      model.stats.sigma.rows() != model.basis->size() ||
      model.stats.sigma.cols() != model.basis->size()) {
    throw SchemaError("coefficient statistics do not match the basis size");
  }

  const json& noise = require(j, "noise");
  std::string noise_kind = require(noise, "kind").get<std::string>();
  if (noise_kind == "constant") {
    model.noise = ConstantNoise{require_number(noise, "sigma_y")};
  } else if (noise_kind == "scaled") {
    model.noise = ScaledNoise{require_number(noise, "sigma_x")};
  } else {
    throw SchemaError("unknown noise kind '" + noise_kind + "'");
  }
  const json& at_bound = require(noise, "at_lower_bound");
  if (!at_bound.is_boolean()) throw SchemaError("at_lower_bound must be a boolean");
  model.noise_at_bound = at_bound.get<bool>();

  const json& s = require(j, "standardization");
  model.standardization.x_mean = require_number(s, "x_mean");
  model.standardization.x_scale = require_number(s, "x_scale");
  model.standardization.y_mean = require_number(s, "y_mean");
  model.standardization.y_scale = require_number(s, "y_scale");
  return model;
}

void save_model(const IgpmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  out << model_to_json(model);
  if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
}

IgpmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace phmgp
