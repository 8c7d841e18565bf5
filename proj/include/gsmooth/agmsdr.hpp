#pragma once

// Accelerated gradient method with small-dimensional relaxation (AGMsDR) and
// the two-stage procedure that warm-starts it with gradient descent.
//
// AGMsDR traces record one entry per iterate x_k. Since x_k itself never has
// its gradient evaluated, the grad_norm and step_len of record k refer to the
// line-search point y_k on [v_k, x_k], whose gradient drives both the step
// x_{k+1} = T(y_k) and the estimate-function update.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

#include "gsmooth/first_order.hpp"

namespace gsmooth {

// zeta_k(x) = 1/2 ||x - x0||^2 + <s_k, x - x0> + c_k with
//   s_k = sum_i a_i grad f(y_{i-1}),
//   c_k = sum_i a_i [f(y_{i-1}) + <grad f(y_{i-1}), x0 - y_{i-1}>],
// so v_k = argmin zeta_k = x0 - s_k.
class EstimateState {
 public:
  explicit EstimateState(Vector x0);

  double a_capital() const { return a_capital_; }
  const Vector& lin_accum() const { return lin_accum_; }
  const Vector& x0() const { return x0_; }
  Vector v() const;

  double zeta(std::span<const double> x) const;
  Vector zeta_gradient(std::span<const double> x) const;
  // zeta_k(v_k) evaluated from the explicit quadratic.
  double zeta_star() const;
  // zeta_k(v_k) accumulated by the one-step recursion.
  double zeta_star_recursive() const { return zeta_star_rec_; }

  // Positive root of L a^2 = A + a.
  static double next_coefficient(double l_const, double a_capital);

  // zeta_{k+1} = zeta_k + a [f(y) + <grad f(y), . - y>], A_{k+1} = A_k + a.
  void absorb(double a, double f_y, std::span<const double> y, std::span<const double> grad_y);

 private:
  Vector x0_;
  Vector lin_accum_;
  double constant_ = 0.0;
  double a_capital_ = 0.0;
  double zeta_star_rec_ = 0.0;
};

struct LineSearchSettings {
  double tol = 1e-10;
  int max_evals = 60;
};

struct LineSearchResult {
  Vector y;
  double beta = 1.0;
  double f_y = 0.0;
  double f_v = 0.0;
  // objective-value calls made by the search
  int evals = 0;
};

// Golden-section search for min_{beta in [0, 1]} f(v + beta (x - v)). Both
// endpoints take part, so f(y) <= min{f(v), f(x)}. Known endpoint values may
// be passed to save evaluations. Throws EvaluationError naming beta when f is
// not finite.
LineSearchResult segment_line_search(const Objective& f, std::span<const double> v, std::span<const double> x,
                                     const LineSearchSettings& settings, std::optional<double> f_v = {},
                                     std::optional<double> f_x = {});

struct AgmsdrConfig {
  double l_const = 1.0;
  // Operator T applied at y_k. Unset means the plain step x - grad f(x) / L.
  std::optional<StepRule> t_rule;
  LineSearchSettings line_search;
  double grad_tol = 0.0;
};

// Thrown when f(x_{k+1}) > f(y_k) beyond rounding, i.e. T does not make the
// progress AGMsDR relies on (wrong L, wrong constants, or nonconvex f).
class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Budget counts gradient evaluations, one per iteration; value calls of the
// line search are reported in value_calls.
Trace agmsdr_run(const Objective& f, std::span<const double> x0, const AgmsdrConfig& cfg, std::int64_t budget);

enum class Stage1Target { FunctionGap, GradNorm };

struct TwoStageConfig {
  TwoStageConfig(double l, StepRule rule) : l_const(l), stage1_rule(std::move(rule)) {}

  double l_const;
  StepRule stage1_rule;
  Stage1Target stage1_target = Stage1Target::FunctionGap;
  LineSearchSettings line_search;
  // Operator T for stage 2; unset means stage1_rule when it is a gradient rule.
  std::optional<StepRule> t_rule;
  double grad_tol = 0.0;

  // L = l_factor * L0, simplified stepsizes in both stages, and the
  // function-gap target when f* is known (gradient-norm target otherwise).
  static TwoStageConfig defaults(const Objective& f, const SmoothnessParams& p, double l_factor = 3.0);
};

// Stage 1 runs gradient descent until f - f* <= L0 / (5 L1^2) (or
// ||grad f|| <= L0 / L1), stage 2 runs AGMsDR from there. With L1 == 0 the
// first stage is skipped. Records carry stage 1 or 2 and cumulative k and
// oracle counts; AgmsdrStep::k stays the AGMsDR iteration index.
Trace two_stage_run(const Objective& f, std::span<const double> x_s, const SmoothnessParams& p,
                    const TwoStageConfig& cfg, std::int64_t budget);

}  // namespace gsmooth
