#include "gsmooth/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsmooth/errors.hpp"

namespace gsmooth {
namespace {

constexpr double kDivergenceThreshold = 1e150;

void check_grad_norm(double g) {
  if (!(g >= 0.0) || !std::isfinite(g)) throw std::domain_error("gradient norm must be finite and nonnegative");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double stepsize_optimal(double grad_norm, const SmoothnessParams& p) {
  check_grad_norm(grad_norm);
  const double lg = p.l1() * grad_norm;
  if (grad_norm == 0.0 && p.l0() == 0.0) throw std::domain_error("stepsize undefined for g = 0 and L0 = 0");
  if (lg <= 1e-12 * p.l0()) return 1.0 / p.l0();
  return std::log1p(lg / (p.l0() + lg)) / lg;
}

double stepsize_simplified(double grad_norm, const SmoothnessParams& p) {
  check_grad_norm(grad_norm);
  const double denom = p.l0() + 1.5 * p.l1() * grad_norm;
  if (!(denom > 0.0)) throw std::domain_error("stepsize undefined for g = 0 and L0 = 0");
  return 1.0 / denom;
}

double stepsize_clipped(double grad_norm, const SmoothnessParams& p) {
  check_grad_norm(grad_norm);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double first = p.l0() > 0.0 ? 1.0 / (2.0 * p.l0()) : inf;
  const double lg = p.l1() * grad_norm;
  const double second = lg > 0.0 ? 1.0 / (3.0 * lg) : inf;
  if (first == inf && second == inf) throw std::domain_error("clipped stepsize undefined for g = 0 and L0 = 0");
  return std::min(first, second);
}

double stepsize_polyak(double f_val, double f_star, double grad_norm) {
  check_grad_norm(grad_norm);
  if (grad_norm == 0.0) throw std::domain_error("Polyak stepsize undefined at a stationary point");
  if (f_val < f_star) throw std::domain_error("f(x) is below the supplied f*; the optimal value is inconsistent");
  return (f_val - f_star) / (grad_norm * grad_norm);
}

std::string rule_name(const StepRule& rule) {
  return std::visit(Overloaded{
                        [](const rules::Optimal&) { return std::string("gd-optimal"); },
                        [](const rules::Simplified&) { return std::string("gd-simplified"); },
                        [](const rules::Clipped&) { return std::string("gd-clipped"); },
                        [](const rules::Polyak&) { return std::string("gd-polyak"); },
                        [](const rules::NormalizedFixedHorizon&) { return std::string("ngd-fixed"); },
                        [](const rules::NormalizedDecaying& r) {
                          return std::string(r.decay == rules::Decay::Sqrt ? "ngd-sqrt" : "ngd-linear");
                        },
                    },
                    rule);
}

bool is_normalized(const StepRule& rule) {
  return std::holds_alternative<rules::NormalizedFixedHorizon>(rule) ||
         std::holds_alternative<rules::NormalizedDecaying>(rule);
}

double gradient_stepsize(const StepRule& rule, double grad_norm) {
  if (const auto* r = std::get_if<rules::Optimal>(&rule)) return stepsize_optimal(grad_norm, r->params);
  if (const auto* r = std::get_if<rules::Simplified>(&rule)) return stepsize_simplified(grad_norm, r->params);
  if (const auto* r = std::get_if<rules::Clipped>(&rule)) return stepsize_clipped(grad_norm, r->params);
  throw std::invalid_argument("rule '" + rule_name(rule) + "' has no (L0, L1) gradient stepsize");
}

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::GradToleranceMet: return "grad_tolerance_met";
    case Termination::BudgetExhausted: return "budget_exhausted";
    case Termination::StationaryExact: return "stationary_exact";
    case Termination::Diverged: return "diverged";
    case Termination::TargetReached: return "target_reached";
  }
  return "unknown";
}

double Trace::mean_line_search_evals() const {
  if (agmsdr.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : agmsdr) total += s.ls_evals;
  return total / static_cast<double>(agmsdr.size());
}

int Trace::max_line_search_evals() const {
  int worst = 0;
  for (const auto& s : agmsdr) worst = std::max(worst, s.ls_evals);
  return worst;
}

Trace gd_run(const Objective& f, const StepRule& rule, std::span<const double> x0, std::int64_t budget,
             double grad_tol) {
  GdOptions options;
  options.grad_tol = grad_tol;
  return gd_run(f, rule, x0, budget, options);
}

Trace gd_run(const Objective& f, const StepRule& rule, std::span<const double> x0, std::int64_t budget,
             const GdOptions& options) {
  if (x0.size() != f.dim()) throw std::invalid_argument("x0 dimension does not match the objective");
  if (const auto* r = std::get_if<rules::NormalizedFixedHorizon>(&rule)) {
    if (r->horizon < 1 || !(r->r_hat > 0.0)) throw std::invalid_argument("fixed-horizon NGD needs K >= 1, r_hat > 0");
  }
  if (const auto* r = std::get_if<rules::NormalizedDecaying>(&rule)) {
    if (!(r->r_hat > 0.0)) throw std::invalid_argument("NGD needs r_hat > 0");
  }

  std::optional<double> polyak_target;
  if (const auto* r = std::get_if<rules::Polyak>(&rule)) {
    polyak_target = r->f_star ? r->f_star : f.f_star();
    if (!polyak_target) throw Unsupported("Polyak stepsizes need f* for '" + f.name() + "'");
  }
  const std::optional<double> gap_ref = f.f_star() ? f.f_star() : polyak_target;

  Trace trace;
  trace.method = rule_name(rule);
  Vector x(x0.begin(), x0.end());
  std::int64_t calls = 0;
  std::int64_t values = 0;

  double fx = f.value(x);
  ++values;
  if (!std::isfinite(fx)) throw EvaluationError("non-finite objective value at x0 for '" + f.name() + "'");
  Vector g = f.gradient(x);
  ++calls;
  double f_best = fx;

  for (std::int64_t k = 0;; ++k) {
    const double gn = norm(g);
    IterRecord rec;
    rec.k = k;
    rec.f_val = fx;
    if (gap_ref) rec.f_gap = fx - *gap_ref;
    if (fx < f_best) f_best = fx;
    rec.f_best = f_best;
    rec.grad_norm = gn;
    rec.oracle_calls = calls;
    rec.value_calls = values;
    rec.stage = options.stage;
    if (f.x_star()) {
      const Vector& xs = *f.x_star();
      rec.dist_to_opt = distance(x, xs);
      if (gn > 0.0) rec.support_dist = std::max(0.0, dot(g, difference(x, xs))) / gn;
    }

    const bool diverged = !std::isfinite(fx) || std::abs(fx) > kDivergenceThreshold || !std::isfinite(gn);
    double beta = 0.0;  // multiplier on the gradient for this step
    if (!diverged && gn > 0.0) {
      if (const auto* r = std::get_if<rules::NormalizedFixedHorizon>(&rule)) {
        rec.step_len = r->r_hat / std::sqrt(static_cast<double>(r->horizon) + 1.0);
        beta = rec.step_len / gn;
      } else if (const auto* r = std::get_if<rules::NormalizedDecaying>(&rule)) {
        const double kk = static_cast<double>(k) + 1.0;
        rec.step_len = r->r_hat / (r->decay == rules::Decay::Sqrt ? std::sqrt(kk) : kk);
        beta = rec.step_len / gn;
      } else if (polyak_target) {
        beta = stepsize_polyak(fx, *polyak_target, gn);
        rec.step_len = beta * gn;
      } else {
        beta = gradient_stepsize(rule, gn);
        rec.step_len = beta * gn;
      }
    }
    trace.records.push_back(rec);

    std::optional<Termination> end;
    if (diverged) {
      end = Termination::Diverged;
    } else if (gn == 0.0) {
      end = Termination::StationaryExact;
    } else if (gn <= options.grad_tol) {
      end = Termination::GradToleranceMet;
    } else if (options.stop && options.stop(rec, x)) {
      end = Termination::TargetReached;
    } else if (calls >= budget) {
      end = Termination::BudgetExhausted;
    } else if (const auto* r = std::get_if<rules::NormalizedFixedHorizon>(&rule); r && k >= r->horizon) {
      end = Termination::BudgetExhausted;
    }
    if (end) {
      trace.termination = *end;
      break;
    }

    axpy(-beta, g, x);
    fx = f.value(x);
    ++values;
    g = f.gradient(x);
    ++calls;
  }
  trace.final_x = std::move(x);
  return trace;
}

Trace ngd_run(const Objective& f, double r_hat, NgdSchedule schedule, std::span<const double> x0,
              std::int64_t budget) {
  const auto make_rule = [&]() -> StepRule {
    switch (schedule) {
      case NgdSchedule::FixedHorizon:
        return rules::NormalizedFixedHorizon{r_hat, std::max<std::int64_t>(budget - 1, 1)};
      case NgdSchedule::DecayingSqrt:
        return rules::NormalizedDecaying{r_hat, rules::Decay::Sqrt};
      case NgdSchedule::DecayingLinear:
        break;
    }
    return rules::NormalizedDecaying{r_hat, rules::Decay::Linear};
  };
  const StepRule rule = make_rule();
  return gd_run(f, rule, x0, budget);
}

std::pair<std::size_t, double> best_iterate(const Trace& trace) {
  if (trace.records.empty()) throw std::invalid_argument("best_iterate on an empty trace");
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.records.size(); ++i) {
    if (trace.records[i].f_val < trace.records[best].f_val) best = i;
  }
  return {best, trace.records[best].f_val};
}

}  // namespace gsmooth
