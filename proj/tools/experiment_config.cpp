#include "experiment_config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "phmgp/dataset.hpp"
#include "phmgp/errors.hpp"

namespace phmgp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Checker {
  std::vector<Violation>* out;

  void add(std::string pointer, std::string message) {
    out->push_back({std::move(pointer), std::move(message)});
  }
};

std::string squote(const std::string& s) { return "'" + s + "'"; }

void check_known_keys(const json& obj, const std::string& ptr,
                      const std::set<std::string>& known, Checker& c) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.count(key)) c.add(ptr + "/" + key, "unknown field");
  }
}

std::optional<std::string> get_string(const json& obj, const char* key, const std::string& ptr,
                                      Checker& c) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_string()) {
    c.add(ptr + "/" + key, "must be a string");
    return std::nullopt;
  }
  return v.get<std::string>();
}

std::optional<bool> get_bool(const json& obj, const char* key, const std::string& ptr,
                             Checker& c) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_boolean()) {
    c.add(ptr + "/" + key, "must be a boolean");
    return std::nullopt;
  }
  return v.get<bool>();
}

std::optional<double> get_number(const json& obj, const char* key, const std::string& ptr,
                                 Checker& c) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    c.add(ptr + "/" + key, "must be a number");
    return std::nullopt;
  }
  double d = v.get<double>();
  if (!std::isfinite(d)) {
    c.add(ptr + "/" + key, "must be finite");
    return std::nullopt;
  }
  return d;
}

std::optional<int> get_int(const json& obj, const char* key, const std::string& ptr, Checker& c) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    c.add(ptr + "/" + key, "must be an integer");
    return std::nullopt;
  }
  return static_cast<int>(v.get<std::int64_t>());
}

std::optional<std::uint64_t> get_uint64(const json& obj, const char* key, const std::string& ptr,
                                        Checker& c) {
  if (!obj.contains(key)) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    c.add(ptr + "/" + key, "must be a non-negative integer");
    return std::nullopt;
  }
  return v.get<std::uint64_t>();
}

/// Either an explicit strictly increasing array of numbers or a
/// {start, stop, count} range expanded to count evenly spaced points.
std::optional<std::vector<double>> parse_locations(const json& v, const std::string& ptr,
                                                   Checker& c) {
  if (v.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const json& e = v[i];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        c.add(ptr + "/" + std::to_string(i), "must be a finite number");
        return std::nullopt;
      }
      out.push_back(e.get<double>());
    }
    if (out.empty()) {
      c.add(ptr, "must not be empty");
      return std::nullopt;
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
      if (!(out[i] > out[i - 1])) {
        c.add(ptr + "/" + std::to_string(i), "locations must be strictly increasing");
        return std::nullopt;
      }
    }
    return out;
  }
  if (v.is_object()) {
    check_known_keys(v, ptr, {"start", "stop", "count"}, c);
    std::size_t before = c.out->size();
    auto start = get_number(v, "start", ptr, c);
    auto stop = get_number(v, "stop", ptr, c);
    auto count = get_int(v, "count", ptr, c);
    if (!start) c.add(ptr + "/start", "required");
    if (!stop) c.add(ptr + "/stop", "required");
    if (!count) c.add(ptr + "/count", "required");
    if (c.out->size() != before) return std::nullopt;
    if (*count < 1) {
      c.add(ptr + "/count", "must be at least 1");
      return std::nullopt;
    }
    if (*count >= 2 && !(*stop > *start)) {
      c.add(ptr + "/stop", "must exceed start");
      return std::nullopt;
    }
    std::vector<double> out(static_cast<std::size_t>(*count));
    for (int i = 0; i < *count; ++i) {
      out[static_cast<std::size_t>(i)] =
          (*count == 1) ? *start : *start + (*stop - *start) * i / (*count - 1);
    }
    out.back() = (*count == 1) ? *start : *stop;
    return out;
  }
  c.add(ptr, "must be an array of numbers or a {start, stop, count} object");
  return std::nullopt;
}

std::optional<ParisLawConfig> parse_paris_fields(const json& obj, const std::string& ptr,
                                                 Checker& c) {
  std::size_t before = c.out->size();
  ParisLawConfig cfg;
  auto width = get_number(obj, "width", ptr, c);
  auto stress = get_number(obj, "stress_range", ptr, c);
  auto a0 = get_number(obj, "initial_crack", ptr, c);
  auto scale = get_number(obj, "growth_scale", ptr, c);
  if (!width) c.add(ptr + "/width", "required");
  if (!stress) c.add(ptr + "/stress_range", "required");
  if (!a0) c.add(ptr + "/initial_crack", "required");
  if (!scale) c.add(ptr + "/growth_scale", "required");
  if (!obj.contains("exponents")) {
    c.add(ptr + "/exponents", "required");
  } else if (!obj.at("exponents").is_array() || obj.at("exponents").empty()) {
    c.add(ptr + "/exponents", "must be a non-empty array of numbers");
  } else {
    for (std::size_t i = 0; i < obj.at("exponents").size(); ++i) {
      const json& e = obj.at("exponents")[i];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        c.add(ptr + "/exponents/" + std::to_string(i), "must be a finite number");
      } else {
        cfg.exponents.push_back(e.get<double>());
      }
    }
  }
  if (c.out->size() != before) return std::nullopt;
  cfg.width = *width;
  cfg.stress_range = *stress;
  cfg.initial_crack = *a0;
  cfg.growth_scale = *scale;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    c.add(ptr, e.what());
    return std::nullopt;
  }
  return cfg;
}

const std::set<std::string> kMethodKeys = {"label",     "order",      "basis", "estimator",
                                           "noise",     "cold_start", "direct_quadrature"};

void parse_method(const json& v, MethodSpec* spec, bool* basis_given, Checker& c) {
  const std::string ptr = "/method";
  if (!v.is_object()) {
    c.add(ptr, "must be an object");
    return;
  }
  check_known_keys(v, ptr, kMethodKeys, c);
  if (auto label = get_string(v, "label", ptr, c)) {
    try {
      spec->kind = parse_method_label(*label);
    } catch (const InvalidArgument& e) {
      c.add(ptr + "/label", e.what());
    }
  }
  if (auto order = get_int(v, "order", ptr, c)) {
    if (*order < 0) {
      c.add(ptr + "/order", "must be non-negative");
    } else {
      spec->order = *order;
    }
  }
  if (v.contains("basis")) {
    *basis_given = true;
    if (!v.at("basis").is_object()) {
      c.add(ptr + "/basis", "must be an object");
    } else {
      check_known_keys(v.at("basis"), ptr + "/basis",
                       {"width", "stress_range", "initial_crack", "growth_scale", "exponents"}, c);
      spec->crack_growth = parse_paris_fields(v.at("basis"), ptr + "/basis", c);
    }
  }
  if (auto est = get_string(v, "estimator", ptr, c)) {
    if (*est == "rms") {
      spec->estimator = ErrorEstimator::rms;
    } else if (*est == "marginal-likelihood") {
      spec->estimator = ErrorEstimator::marginal_likelihood;
    } else {
      c.add(ptr + "/estimator", "must be 'rms' or 'marginal-likelihood', got " + squote(*est));
    }
  }
  if (auto noise = get_string(v, "noise", ptr, c)) {
    if (*noise == "constant") {
      spec->noise = NoiseModelKind::constant;
    } else if (*noise == "scaled") {
      spec->noise = NoiseModelKind::scaled;
    } else {
      c.add(ptr + "/noise", "must be 'constant' or 'scaled', got " + squote(*noise));
    }
  }
  if (auto cold = get_bool(v, "cold_start", ptr, c)) spec->cold_start = *cold;
  if (auto direct = get_bool(v, "direct_quadrature", ptr, c)) spec->direct_quadrature = *direct;
}

void parse_generator(const json& v, std::optional<GeneratorConfig>* out, Checker& c) {
  const std::string ptr = "/generator";
  if (!v.is_object()) {
    c.add(ptr, "must be an object");
    return;
  }
  check_known_keys(
      v, ptr, {"name", "basis", "mu", "sigma", "sigma_y", "grid", "count", "id_prefix"}, c);
  GeneratorConfig g;
  if (auto name = get_string(v, "name", ptr, c)) g.name = *name;
  if (auto prefix = get_string(v, "id_prefix", ptr, c)) g.id_prefix = *prefix;

  int basis_size = -1;
  if (!v.contains("basis")) {
    c.add(ptr + "/basis", "required");
  } else if (!v.at("basis").is_object()) {
    c.add(ptr + "/basis", "must be an object");
  } else {
    const json& b = v.at("basis");
    const std::string bptr = ptr + "/basis";
    auto kind = get_string(b, "kind", bptr, c);
    if (!kind) {
      c.add(bptr + "/kind", "required");
    } else if (*kind == "polynomial") {
      check_known_keys(b, bptr, {"kind", "order"}, c);
      int order = 1;
      if (auto o = get_int(b, "order", bptr, c)) {
        if (*o < 0) {
          c.add(bptr + "/order", "must be non-negative");
        } else {
          order = *o;
        }
      }
      g.basis = PolyBasisDescriptor{order};
      basis_size = order + 1;
    } else if (*kind == "crack-growth") {
      check_known_keys(b, bptr,
                       {"kind", "width", "stress_range", "initial_crack", "growth_scale",
                        "exponents", "direct_quadrature"},
                       c);
      bool direct = false;
      if (auto d = get_bool(b, "direct_quadrature", bptr, c)) direct = *d;
      if (auto cfg = parse_paris_fields(b, bptr, c)) {
        basis_size = static_cast<int>(cfg->exponents.size());
        g.basis = ParisBasisDescriptor{*cfg, direct};
      }
    } else {
      c.add(bptr + "/kind", "must be 'polynomial' or 'crack-growth', got " + squote(*kind));
    }
  }

  if (!v.contains("mu")) {
    c.add(ptr + "/mu", "required");
  } else if (!v.at("mu").is_array() || v.at("mu").empty()) {
    c.add(ptr + "/mu", "must be a non-empty array of numbers");
  } else {
    for (std::size_t i = 0; i < v.at("mu").size(); ++i) {
      const json& e = v.at("mu")[i];
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        c.add(ptr + "/mu/" + std::to_string(i), "must be a finite number");
      } else {
        g.mu.push_back(e.get<double>());
      }
    }
    if (basis_size >= 0 && g.mu.size() != static_cast<std::size_t>(basis_size)) {
      c.add(ptr + "/mu", "size must equal the basis size (" + std::to_string(basis_size) + ")");
    }
  }

  if (!v.contains("sigma")) {
    c.add(ptr + "/sigma", "required");
  } else if (!v.at("sigma").is_array()) {
    c.add(ptr + "/sigma", "must be a square array of number rows");
  } else {
    const json& s = v.at("sigma");
    std::size_t p = g.mu.size();
    if (p > 0 && s.size() != p) {
      c.add(ptr + "/sigma", "must have one row per mu entry");
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string rptr = ptr + "/sigma/" + std::to_string(i);
        if (!s[i].is_array() || s[i].size() != s.size()) {
          c.add(rptr, "must be a row of length " + std::to_string(s.size()));
          continue;
        }
        std::vector<double> row;
        for (std::size_t k = 0; k < s[i].size(); ++k) {
          const json& e = s[i][k];
          if (!e.is_number() || !std::isfinite(e.get<double>())) {
            c.add(rptr + "/" + std::to_string(k), "must be a finite number");
          } else {
            row.push_back(e.get<double>());
          }
        }
        g.sigma.push_back(std::move(row));
      }
    }
  }

  if (auto sy = get_number(v, "sigma_y", ptr, c)) {
    if (*sy < 0) {
      c.add(ptr + "/sigma_y", "must be non-negative");
    } else {
      g.sigma_y = *sy;
    }
  }

  if (!v.contains("grid")) {
    c.add(ptr + "/grid", "required");
  } else if (auto grid = parse_locations(v.at("grid"), ptr + "/grid", c)) {
    g.grid = *grid;
  }

  if (!v.contains("count")) {
    c.add(ptr + "/count", "required");
  } else if (auto count = get_int(v, "count", ptr, c)) {
    if (*count < 1) {
      c.add(ptr + "/count", "must be at least 1");
    } else {
      g.count = *count;
    }
  }

  *out = std::move(g);
}

/// Existence plus manifest parse plus referenced-file existence; no CSV is
/// actually loaded.
std::optional<DatasetManifest> check_dataset(const std::string& given, const fs::path& config_dir,
                                             std::string* resolved, Checker& c) {
  fs::path p(given);
  if (p.is_relative()) p = config_dir / p;
  std::error_code ec;
  fs::path canon = fs::weakly_canonical(p, ec);
  if (ec) canon = fs::absolute(p).lexically_normal();
  *resolved = canon.string();
  if (!fs::exists(canon)) {
    c.add("/dataset", "file not found: " + canon.string());
    return std::nullopt;
  }
  std::ifstream in(canon);
  std::stringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) {
    c.add("/dataset", "cannot read " + canon.string());
    return std::nullopt;
  }
  DatasetManifest manifest;
  try {
    manifest = manifest_from_json_text(buf.str());
  } catch (const std::exception& e) {
    c.add("/dataset", std::string("manifest rejected: ") + e.what());
    return std::nullopt;
  }
  for (const std::string& f : manifest.files) {
    if (!fs::exists(canon.parent_path() / f)) {
      c.add("/dataset", "referenced file not found: " + f);
    }
  }
  return manifest;
}

const std::set<std::string> kTopKeys = {
    "command",   "dataset",      "method",  "methods",          "seed",
    "output_dir", "predictive_noise", "extra_starts", "threads", "timing",
    "levels",    "q_candidates", "schedule", "grid",            "target_x",
    "steps",     "held_out",     "generator"};

struct ParseResult {
  ExperimentConfig config;
  ValidationReport report;
};

ParseResult parse_config_json(const json& root, const fs::path& config_dir) {
  ParseResult result;
  Checker c{&result.report.violations};
  ExperimentConfig& cfg = result.config;
  if (!root.is_object()) {
    c.add("", "config must be a JSON object");
    return result;
  }
  check_known_keys(root, "", kTopKeys, c);

  cfg.command = get_string(root, "command", "", c);
  cfg.output_dir = get_string(root, "output_dir", "", c);
  if (cfg.output_dir && cfg.output_dir->empty()) c.add("/output_dir", "must not be empty");

  std::optional<DatasetManifest> manifest;
  if (auto dataset = get_string(root, "dataset", "", c)) {
    std::string resolved;
    manifest = check_dataset(*dataset, config_dir, &resolved, c);
    cfg.dataset = resolved;
  }

  bool basis_given = false;
  if (root.contains("method")) parse_method(root.at("method"), &cfg.method, &basis_given, c);

  if (root.contains("methods")) {
    const json& ms = root.at("methods");
    if (!ms.is_array()) {
      c.add("/methods", "must be an array of method labels");
    } else {
      for (std::size_t i = 0; i < ms.size(); ++i) {
        if (!ms[i].is_string()) {
          c.add("/methods/" + std::to_string(i), "must be a string");
          continue;
        }
        std::string label = ms[i].get<std::string>();
        try {
          parse_method_label(label);
          cfg.methods.push_back(label);
        } catch (const InvalidArgument& e) {
          c.add("/methods/" + std::to_string(i), e.what());
        }
      }
    }
  }

  bool paris_used = cfg.method.kind == MethodKind::igpm_paris;
  for (const std::string& label : cfg.methods) {
    if (parse_method_label(label) == MethodKind::igpm_paris) paris_used = true;
  }
  bool paris_available =
      cfg.method.crack_growth.has_value() || (manifest && manifest->crack_growth.has_value());
  if (paris_used && !paris_available) {
    c.add("/method/basis",
          "crack-growth method needs basis physics here or a dataset manifest with crack_growth");
  }
  if (!paris_used && basis_given) {
    c.add("/method/basis", "basis physics is only used by the igpm-paris method");
  }

  if (auto seed = get_uint64(root, "seed", "", c)) cfg.seed = *seed;
  if (auto pn = get_bool(root, "predictive_noise", "", c)) cfg.predictive_noise = *pn;
  if (auto extra = get_int(root, "extra_starts", "", c)) {
    if (*extra < 0) {
      c.add("/extra_starts", "must be non-negative");
    } else {
      cfg.extra_starts = *extra;
    }
  }
  if (auto threads = get_int(root, "threads", "", c)) {
    if (*threads < 1) {
      c.add("/threads", "must be at least 1");
    } else {
      cfg.threads = *threads;
    }
  }
  if (auto timing = get_string(root, "timing", "", c)) {
    try {
      cfg.timing = parse_timing_label(*timing);
    } catch (const UsageError& e) {
      c.add("/timing", e.what());
    }
  }

  if (root.contains("levels")) {
    const json& ls = root.at("levels");
    if (!ls.is_array() || ls.empty()) {
      c.add("/levels", "must be a non-empty array of percent levels");
    } else {
      cfg.levels.clear();
      for (std::size_t i = 0; i < ls.size(); ++i) {
        const json& e = ls[i];
        double d = e.is_number() ? e.get<double>() : std::nan("");
        if (!std::isfinite(d) || d <= 0.0 || d >= 100.0) {
          c.add("/levels/" + std::to_string(i), "must be a percent level in (0, 100)");
        } else {
          cfg.levels.push_back(d);
        }
      }
    }
  }

  if (root.contains("q_candidates")) {
    const json& qs = root.at("q_candidates");
    if (!qs.is_array()) {
      c.add("/q_candidates", "must be an array of polynomial orders");
    } else if (qs.empty()) {
      c.add("/q_candidates", "must not be empty");
    } else {
      std::vector<int> cands;
      for (std::size_t i = 0; i < qs.size(); ++i) {
        const json& e = qs[i];
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0) {
          c.add("/q_candidates/" + std::to_string(i), "must be a non-negative integer");
        } else {
          cands.push_back(static_cast<int>(e.get<std::int64_t>()));
        }
      }
      cfg.q_candidates = std::move(cands);
    }
  }

  if (root.contains("schedule")) {
    cfg.schedule = parse_locations(root.at("schedule"), "/schedule", c);
  }
  if (root.contains("grid")) {
    cfg.grid = parse_locations(root.at("grid"), "/grid", c);
  }
  if (auto target = get_number(root, "target_x", "", c)) cfg.target_x = *target;

  if (root.contains("steps")) {
    const json& ss = root.at("steps");
    if (!ss.is_array()) {
      c.add("/steps", "must be an array of step counts");
    } else {
      std::vector<int> steps;
      for (std::size_t i = 0; i < ss.size(); ++i) {
        const json& e = ss[i];
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0) {
          c.add("/steps/" + std::to_string(i), "must be a non-negative integer");
        } else {
          steps.push_back(static_cast<int>(e.get<std::int64_t>()));
        }
      }
      cfg.steps = std::move(steps);
    }
  }

  if (auto held = get_string(root, "held_out", "", c)) {
    if (held->empty()) {
      c.add("/held_out", "must not be empty");
    } else {
      cfg.held_out = *held;
    }
  }

  if (root.contains("generator")) parse_generator(root.at("generator"), &cfg.generator, c);

  return result;
}

ParseResult parse_config_file(const fs::path& path) {
  ParseResult result;
  std::ifstream in(path);
  if (!in) {
    result.report.violations.push_back({"", "cannot read config file: " + path.string()});
    return result;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  json root = json::parse(buf.str(), nullptr, false);
  if (root.is_discarded()) {
    result.report.violations.push_back({"", "config file is not valid JSON"});
    return result;
  }
  fs::path dir = path.has_parent_path() ? path.parent_path() : fs::current_path();
  return parse_config_json(root, fs::absolute(dir));
}

}  // namespace

ValidationReport validate_config_file(const fs::path& path) {
  return parse_config_file(path).report;
}

std::string report_to_json(const ValidationReport& report) {
  json out;
  out["violations"] = json::array();
  for (const Violation& v : report.violations) {
    out["violations"].push_back({{"pointer", v.pointer}, {"message", v.message}});
  }
  return out.dump(2) + "\n";
}

ExperimentConfig load_config_file(const fs::path& path) {
  ParseResult result = parse_config_file(path);
  if (!result.report.ok()) {
    std::string msg = "invalid config " + path.string() + ":";
    for (const Violation& v : result.report.violations) {
      msg += "\n  " + (v.pointer.empty() ? std::string("<root>") : v.pointer) + ": " + v.message;
    }
    throw UsageError(msg);
  }
  return result.config;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.command) j["command"] = *cfg.command;
  if (cfg.dataset) j["dataset"] = *cfg.dataset;

  json m;
  m["label"] = method_label(cfg.method.kind);
  m["order"] = cfg.method.order;
  if (cfg.method.crack_growth) {
    const ParisLawConfig& p = *cfg.method.crack_growth;
    m["basis"] = {{"width", p.width},
                  {"stress_range", p.stress_range},
                  {"initial_crack", p.initial_crack},
                  {"growth_scale", p.growth_scale},
                  {"exponents", p.exponents}};
  }
  m["estimator"] = cfg.method.estimator == ErrorEstimator::rms ? "rms" : "marginal-likelihood";
  m["noise"] = cfg.method.noise == NoiseModelKind::constant ? "constant" : "scaled";
  m["cold_start"] = cfg.method.cold_start;
  m["direct_quadrature"] = cfg.method.direct_quadrature;
  j["method"] = std::move(m);

  if (!cfg.methods.empty()) j["methods"] = cfg.methods;
  j["seed"] = cfg.seed;
  if (cfg.output_dir) j["output_dir"] = *cfg.output_dir;
  if (cfg.predictive_noise) j["predictive_noise"] = *cfg.predictive_noise;
  j["extra_starts"] = cfg.extra_starts;
  j["threads"] = cfg.threads;
  j["timing"] = timing_label(cfg.timing);
  j["levels"] = cfg.levels;
  if (cfg.q_candidates) j["q_candidates"] = *cfg.q_candidates;
  if (cfg.schedule) j["schedule"] = *cfg.schedule;
  if (cfg.grid) j["grid"] = *cfg.grid;
  if (cfg.target_x) j["target_x"] = *cfg.target_x;
  if (cfg.steps) j["steps"] = *cfg.steps;
  if (cfg.held_out) j["held_out"] = *cfg.held_out;

  if (cfg.generator) {
    const GeneratorConfig& g = *cfg.generator;
    json b;
    if (const auto* poly = std::get_if<PolyBasisDescriptor>(&g.basis)) {
      b["kind"] = "polynomial";
      b["order"] = poly->order;
    } else {
      const auto& paris = std::get<ParisBasisDescriptor>(g.basis);
      b["kind"] = "crack-growth";
      b["width"] = paris.config.width;
      b["stress_range"] = paris.config.stress_range;
      b["initial_crack"] = paris.config.initial_crack;
      b["growth_scale"] = paris.config.growth_scale;
      b["exponents"] = paris.config.exponents;
      b["direct_quadrature"] = paris.direct_quadrature;
    }
    j["generator"] = {{"name", g.name},         {"basis", std::move(b)},
                      {"mu", g.mu},             {"sigma", g.sigma},
                      {"sigma_y", g.sigma_y},   {"grid", g.grid},
                      {"count", g.count},       {"id_prefix", g.id_prefix}};
  }

  return j.dump(2) + "\n";
}

std::string timing_label(TimingMode mode) {
  switch (mode) {
    case TimingMode::off: return "off";
    case TimingMode::single: return "single";
    case TimingMode::median3: return "median3";
  }
  return "off";
}

TimingMode parse_timing_label(const std::string& label) {
  if (label == "off") return TimingMode::off;
  if (label == "single") return TimingMode::single;
  if (label == "median3") return TimingMode::median3;
  throw UsageError("unknown timing mode '" + label + "'; expected off, single, or median3");
}

}  // namespace phmgp::cli
