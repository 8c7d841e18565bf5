#include "gsmooth/cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gsmooth/cli/spec.hpp"

namespace gsmooth::cli {

using nlohmann::json;

json to_json(const RunConfig& cfg) {
  json doc;
  doc["problem"] = cfg.problem_spec;
  doc["method"] = cfg.method_spec;
  if (const double* r = std::get_if<double>(&cfg.x0)) {
    doc["radius"] = *r;
  } else {
    doc["x0"] = std::get<Vector>(cfg.x0);
  }
  doc["budget"] = cfg.budget;
  doc["grad_tol"] = cfg.grad_tol;
  doc["seed"] = cfg.seed;
  doc["out"] = cfg.output_path;
  return doc;
}

RunConfig run_config_from_json(const json& doc, RunConfig base) {
  if (!doc.is_object()) throw std::invalid_argument("run config must be a JSON object");
  if (doc.contains("radius") && doc.contains("x0")) throw std::invalid_argument("run config gives both radius and x0");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "problem") {
        base.problem_spec = value.get<std::string>();
      } else if (key == "method") {
        base.method_spec = value.get<std::string>();
      } else if (key == "radius") {
        base.x0 = value.get<double>();
      } else if (key == "x0") {
        base.x0 = value.get<Vector>();
      } else if (key == "budget") {
        base.budget = value.get<std::int64_t>();
      } else if (key == "grad_tol") {
        base.grad_tol = value.get<double>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        base.output_path = value.get<std::string>();
      } else {
        throw std::invalid_argument("unknown run config key '" + key + "'");
      }
    } catch (const json::type_error& e) {
      throw std::invalid_argument("run config key '" + key + "' has the wrong type: " + e.what());
    }
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config file '" + path + "': " + e.what());
  }
  return run_config_from_json(doc, std::move(base));
}

void validate(const RunConfig& cfg) {
  const Objective f = parse_problem(cfg.problem_spec);
  parse_method(cfg.method_spec);
  if (cfg.budget < 0) throw std::invalid_argument("budget must be nonnegative");
  if (!(cfg.grad_tol >= 0.0)) throw std::invalid_argument("grad_tol must be nonnegative");
  if (const double* r = std::get_if<double>(&cfg.x0)) {
    if (!std::isfinite(*r)) throw std::invalid_argument("radius must be finite");
  } else if (std::get<Vector>(cfg.x0).size() != f.dim()) {
    throw std::invalid_argument("x0 has dimension " + std::to_string(std::get<Vector>(cfg.x0).size()) +
                                " but the problem has " + std::to_string(f.dim()));
  }
}

Vector initial_point(const RunConfig& cfg, std::size_t dim) {
  if (const double* r = std::get_if<double>(&cfg.x0)) {
    Vector x(dim, 0.0);
    if (dim > 0) x[0] = *r;
    return x;
  }
  return std::get<Vector>(cfg.x0);
}

}  // namespace gsmooth::cli
