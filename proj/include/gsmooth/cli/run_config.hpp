#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "json.hpp"

#include "gsmooth/simd/vector_ops.hpp"

namespace gsmooth::cli {

struct RunConfig {
  std::string problem_spec;
  std::string method_spec;
  // A radius R places x0 at R e_1; a vector is used as is.
  std::variant<double, Vector> x0 = 1.0;
  std::int64_t budget = 1000;
  double grad_tol = 0.0;
  std::uint64_t seed = 1;
  // Empty means no CSV is written.
  std::string output_path;

  bool operator==(const RunConfig&) const = default;
};

// Keys: problem, method, radius or x0, budget, grad_tol, seed, out.
nlohmann::json to_json(const RunConfig& cfg);
// Fields missing from the document keep their values from `base`; unknown
// keys and mistyped values raise std::invalid_argument.
RunConfig run_config_from_json(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

// Parses both specs and checks the remaining fields, before any work starts.
void validate(const RunConfig& cfg);
Vector initial_point(const RunConfig& cfg, std::size_t dim);

}  // namespace gsmooth::cli
