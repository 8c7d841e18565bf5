#pragma once

// Text specifications of problems and methods: `name:key=value,...`, with
// vector values written as `1;2;3`.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gsmooth/agmsdr.hpp"
#include "gsmooth/first_order.hpp"
#include "gsmooth/objective.hpp"

namespace gsmooth::cli {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::string token, std::size_t position);

  const std::string& token() const { return token_; }
  std::size_t position() const { return position_; }

 private:
  std::string token_;
  std::size_t position_;
};

struct Spec {
  std::string name;
  std::map<std::string, std::string> args;
  // Offsets of each key and value in the source text, for error messages.
  std::map<std::string, std::pair<std::size_t, std::size_t>> positions;
  std::string source;

  bool operator==(const Spec& other) const { return name == other.name && args == other.args; }
};

Spec parse_spec(std::string_view text);
// Keys in sorted order, so equal specs serialize identically.
std::string serialize_spec(const Spec& spec);

// power_norm(d, p, l1), logistic(l1), affine_logistic(a, b, l1),
// exp_phi(d, l0, l1), separable_pnorm(d, p, l1), quadratic(d).
Objective parse_problem(std::string_view text);

enum class MethodKind { Gd, Ngd, Polyak, Agmsdr, TwoStage };

struct MethodSpec {
  MethodKind kind = MethodKind::Gd;
  // Gradient rule for gd, the stage-1 rule for two_stage, and the operator T
  // for agmsdr ("plain" there means the step 1/L).
  std::string rule;
  std::optional<double> l0;
  std::optional<double> l1;
  std::optional<double> f_star;
  std::optional<double> r_hat;
  NgdSchedule schedule = NgdSchedule::FixedHorizon;
  std::optional<double> l_const;
  double l_factor = 3.0;
  std::optional<Stage1Target> target;
  LineSearchSettings line_search;
  Spec spec;
};

// gd(rule, l0, l1), ngd(r_hat, schedule), polyak(f_star),
// agmsdr(L, rule, ls_tol, ls_max, l0, l1),
// two_stage(L, L_factor, rule, target, ls_tol, ls_max, l0, l1).
MethodSpec parse_method(std::string_view text);

// The method's (L0, L1): overrides from the spec on top of the objective's.
// Throws Unsupported when neither supplies them.
SmoothnessParams method_params(const MethodSpec& m, const Objective& f);

// Runs the method; raises Unsupported for incompatible problems, such as
// Polyak steps without f*.
Trace run_method(const MethodSpec& m, const Objective& f, std::span<const double> x0, std::int64_t budget,
                 double grad_tol);

}  // namespace gsmooth::cli
