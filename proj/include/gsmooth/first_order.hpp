#pragma once

// Gradient descent with the (L0, L1) stepsize rules, the normalized gradient
// method, and the per-iteration trace they record.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gsmooth/objective.hpp"

namespace gsmooth {

// eta = ln(1 + L1 g / (L0 + L1 g)) / (L1 g), with the limit 1/L0 when L1 g is
// negligible against L0.
double stepsize_optimal(double grad_norm, const SmoothnessParams& p);
// eta = 1 / (L0 + 1.5 L1 g)
double stepsize_simplified(double grad_norm, const SmoothnessParams& p);
// eta = min{1 / (2 L0), 1 / (3 L1 g)}; a branch with zero denominator is +inf.
double stepsize_clipped(double grad_norm, const SmoothnessParams& p);
// eta = (f - f*) / g^2. Throws std::domain_error for g == 0 or f < f*.
double stepsize_polyak(double f_val, double f_star, double grad_norm);

namespace rules {

struct Optimal {
  SmoothnessParams params;
};
struct Simplified {
  SmoothnessParams params;
};
struct Clipped {
  SmoothnessParams params;
};
// f_star overrides the objective's known optimal value.
struct Polyak {
  std::optional<double> f_star;
};
// beta_k = r_hat / sqrt(horizon + 1) for k < horizon.
struct NormalizedFixedHorizon {
  double r_hat;
  std::int64_t horizon;
};
enum class Decay { Sqrt, Linear };
// beta_k = r_hat / sqrt(k + 1) (Sqrt) or r_hat / (k + 1) (Linear).
struct NormalizedDecaying {
  double r_hat;
  Decay decay = Decay::Sqrt;
};

}  // namespace rules

using StepRule = std::variant<rules::Optimal, rules::Simplified, rules::Clipped, rules::Polyak,
                              rules::NormalizedFixedHorizon, rules::NormalizedDecaying>;

std::string rule_name(const StepRule& rule);
bool is_normalized(const StepRule& rule);

// Stepsize of an Optimal, Simplified or Clipped rule at gradient norm g.
// Throws std::invalid_argument for the other rules.
double gradient_stepsize(const StepRule& rule, double grad_norm);

enum class Termination { GradToleranceMet, BudgetExhausted, StationaryExact, Diverged, TargetReached };
std::string termination_name(Termination t);

struct IterRecord {
  std::int64_t k = 0;
  double f_val = 0.0;
  std::optional<double> f_gap;
  // min of f_val over records 0..k
  double f_best = 0.0;
  double grad_norm = 0.0;
  // Length of the step prescribed at this iterate (eta_k g_k or beta_k).
  double step_len = 0.0;
  // Cumulative gradient evaluations, the unit of every budget.
  std::int64_t oracle_calls = 0;
  // Cumulative value evaluations (line searches, Polyak, recording).
  std::int64_t value_calls = 0;
  // [<grad f(x), x - x*>]_+ / ||grad f(x)|| when x* is known.
  std::optional<double> support_dist;
  std::optional<double> dist_to_opt;
  int stage = 1;
};

// One AGMsDR iteration k, moving from x_k to x_{k+1} via the line-search point y_k.
struct AgmsdrStep {
  std::int64_t k = 0;
  double f_x = 0.0;
  double f_v = 0.0;
  double f_y = 0.0;
  double grad_norm_y = 0.0;
  double beta = 0.0;
  int ls_evals = 0;
  double f_x_next = 0.0;
  double a_next = 0.0;
  double a_capital_next = 0.0;
  // zeta_{k+1}(v_{k+1}) from the explicit quadratic and from the recursion.
  double zeta_star_next = 0.0;
  double zeta_star_recursive = 0.0;
};

struct Trace {
  std::string method;
  std::vector<IterRecord> records;
  Vector final_x;
  Termination termination = Termination::BudgetExhausted;
  std::vector<AgmsdrStep> agmsdr;
  // Index into records of the first AGMsDR iterate, when a second stage ran.
  std::optional<std::size_t> stage2_begin;

  double mean_line_search_evals() const;
  int max_line_search_evals() const;
};

struct GdOptions {
  double grad_tol = 0.0;
  // Checked after each record; returning true ends the run with TargetReached.
  std::function<bool(const IterRecord&, std::span<const double> x)> stop;
  int stage = 1;
};

// Budget counts gradient evaluations. The gradient at x0 is always evaluated,
// so a budget of 0 or 1 yields the single record k = 0.
Trace gd_run(const Objective& f, const StepRule& rule, std::span<const double> x0, std::int64_t budget,
             const GdOptions& options = {});
Trace gd_run(const Objective& f, const StepRule& rule, std::span<const double> x0, std::int64_t budget,
             double grad_tol);

enum class NgdSchedule { FixedHorizon, DecayingSqrt, DecayingLinear };
// For FixedHorizon the horizon is budget - 1, so records x_0..x_K are produced.
Trace ngd_run(const Objective& f, double r_hat, NgdSchedule schedule, std::span<const double> x0,
              std::int64_t budget);

// First index attaining the minimum recorded f value.
std::pair<std::size_t, double> best_iterate(const Trace& trace);

}  // namespace gsmooth
