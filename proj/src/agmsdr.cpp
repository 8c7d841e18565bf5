#include "gsmooth/agmsdr.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gsmooth/errors.hpp"

namespace gsmooth {
namespace {

constexpr double kInvGolden = 0.6180339887498949;

}  // namespace

EstimateState::EstimateState(Vector x0) : x0_(std::move(x0)), lin_accum_(x0_.size(), 0.0) {}

Vector EstimateState::v() const { return difference(x0_, lin_accum_); }

double EstimateState::zeta(std::span<const double> x) const {
  const Vector d = difference(x, x0_);
  return 0.5 * squared_norm(d) + dot(lin_accum_, d) + constant_;
}

Vector EstimateState::zeta_gradient(std::span<const double> x) const {
  Vector g = difference(x, x0_);
  axpy(1.0, lin_accum_, g);
  return g;
}

double EstimateState::zeta_star() const { return constant_ - 0.5 * squared_norm(lin_accum_); }

double EstimateState::next_coefficient(double l_const, double a_capital) {
  if (!(l_const > 0.0)) throw std::invalid_argument("AGMsDR needs L > 0");
  return (1.0 + std::sqrt(1.0 + 4.0 * l_const * a_capital)) / (2.0 * l_const);
}

void EstimateState::absorb(double a, double f_y, std::span<const double> y, std::span<const double> grad_y) {
  const Vector v_prev = v();
  zeta_star_rec_ += a * f_y + a * dot(grad_y, difference(v_prev, y)) - 0.5 * a * a * squared_norm(grad_y);
  constant_ += a * (f_y + dot(grad_y, difference(x0_, y)));
  axpy(a, grad_y, lin_accum_);
  a_capital_ += a;
}

LineSearchResult segment_line_search(const Objective& f, std::span<const double> v, std::span<const double> x,
                                     const LineSearchSettings& settings, std::optional<double> f_v,
                                     std::optional<double> f_x) {
  if (v.size() != x.size()) throw std::invalid_argument("line search endpoints differ in dimension");
  if (!(settings.tol > 0.0)) throw std::invalid_argument("line search tolerance must be positive");

  LineSearchResult result;
  const Vector dir = difference(x, v);
  const auto eval = [&](double beta, std::span<const double> point) {
    const double value = f.value(point);
    ++result.evals;
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os << "non-finite objective value in line search at beta = " << beta;
      throw EvaluationError(os.str());
    }
    return value;
  };

  const double fx = f_x ? *f_x : eval(1.0, x);
  result.y.assign(x.begin(), x.end());
  result.beta = 1.0;
  result.f_y = fx;
  result.f_v = fx;
  if (squared_norm(dir) == 0.0) return result;

  const double fv = f_v ? *f_v : eval(0.0, v);
  result.f_v = fv;
  if (fv < result.f_y) {
    result.y.assign(v.begin(), v.end());
    result.beta = 0.0;
    result.f_y = fv;
  }

  Vector point(v.size());
  const auto sample = [&](double beta) {
    add_scaled(v, beta, dir, point);
    const double value = eval(beta, point);
    if (value < result.f_y) {
      result.y = point;
      result.beta = beta;
      result.f_y = value;
    }
    return value;
  };

  double lo = 0.0;
  double hi = 1.0;
  if (result.evals >= settings.max_evals) return result;
  double c = hi - kInvGolden * (hi - lo);
  double fc = sample(c);
  if (result.evals >= settings.max_evals) return result;
  double d = lo + kInvGolden * (hi - lo);
  double fd = sample(d);
  while (hi - lo > settings.tol && result.evals < settings.max_evals) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvGolden * (hi - lo);
      fc = sample(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvGolden * (hi - lo);
      fd = sample(d);
    }
  }
  return result;
}

namespace {

double apply_operator(const AgmsdrConfig& cfg, double grad_norm) {
  if (!cfg.t_rule) return 1.0 / cfg.l_const;
  return gradient_stepsize(*cfg.t_rule, grad_norm);
}

}  // namespace

Trace agmsdr_run(const Objective& f, std::span<const double> x0, const AgmsdrConfig& cfg, std::int64_t budget) {
  if (x0.size() != f.dim()) throw std::invalid_argument("x0 dimension does not match the objective");
  if (!(cfg.l_const > 0.0) || !std::isfinite(cfg.l_const)) throw std::invalid_argument("AGMsDR needs finite L > 0");
  if (cfg.t_rule && (is_normalized(*cfg.t_rule) || std::holds_alternative<rules::Polyak>(*cfg.t_rule))) {
    throw std::invalid_argument("AGMsDR operator T must be an (L0, L1) gradient rule");
  }

  Trace trace;
  trace.method = "agmsdr";
  EstimateState est(Vector(x0.begin(), x0.end()));
  Vector x(x0.begin(), x0.end());
  std::int64_t calls = 0;
  std::int64_t values = 0;
  double fx = f.value(x);
  ++values;
  if (!std::isfinite(fx)) throw EvaluationError("non-finite objective value at x0 for '" + f.name() + "'");
  double f_best = fx;

  for (std::int64_t k = 0;; ++k) {
    const Vector v = est.v();
    LineSearchResult ls = segment_line_search(f, v, x, cfg.line_search, std::nullopt, fx);
    values += ls.evals;
    const Vector g = f.gradient(ls.y);
    ++calls;
    const double gn = norm(g);

    IterRecord rec;
    rec.k = k;
    rec.f_val = fx;
    if (f.f_star()) rec.f_gap = fx - *f.f_star();
    if (fx < f_best) f_best = fx;
    rec.f_best = f_best;
    rec.grad_norm = gn;
    rec.oracle_calls = calls;
    rec.value_calls = values;
    if (f.x_star()) rec.dist_to_opt = distance(x, *f.x_star());

    std::optional<Termination> end;
    double eta = 0.0;
    if (!std::isfinite(gn)) {
      end = Termination::Diverged;
    } else if (gn == 0.0) {
      end = Termination::StationaryExact;
    } else {
      eta = apply_operator(cfg, gn);
      rec.step_len = eta * gn;
      if (gn <= cfg.grad_tol) {
        end = Termination::GradToleranceMet;
      } else if (calls >= budget) {
        end = Termination::BudgetExhausted;
      }
    }
    trace.records.push_back(rec);
    if (end) {
      trace.termination = *end;
      trace.final_x = *end == Termination::StationaryExact ? ls.y : x;
      break;
    }

    Vector x_next = combine(ls.y, -eta, g);
    const double f_next = f.value(x_next);
    ++values;
    if (!std::isfinite(f_next)) throw EvaluationError("non-finite objective value after the AGMsDR step");
    const double slack = 1e-9 + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(ls.f_y);
    if (f_next > ls.f_y + slack) {
      std::ostringstream os;
      os.precision(17);
      os << "AGMsDR monotonicity violated at k = " << k << ": f(T(y)) = " << f_next << " > f(y) = " << ls.f_y
         << " (L = " << cfg.l_const << ")";
      throw MonotonicityError(os.str());
    }

    AgmsdrStep step;
    step.k = k;
    step.f_x = fx;
    step.f_y = ls.f_y;
    step.f_v = ls.f_v;
    step.grad_norm_y = gn;
    step.beta = ls.beta;
    step.ls_evals = ls.evals;
    step.f_x_next = f_next;
    step.a_next = EstimateState::next_coefficient(cfg.l_const, est.a_capital());
    est.absorb(step.a_next, ls.f_y, ls.y, g);
    step.a_capital_next = est.a_capital();
    step.zeta_star_next = est.zeta_star();
    step.zeta_star_recursive = est.zeta_star_recursive();
    trace.agmsdr.push_back(step);

    x = std::move(x_next);
    fx = f_next;
  }
  return trace;
}

TwoStageConfig TwoStageConfig::defaults(const Objective& f, const SmoothnessParams& p, double l_factor) {
  if (!(l_factor > 0.0)) throw std::invalid_argument("L factor must be positive");
  if (!(p.l0() > 0.0)) throw std::invalid_argument("two-stage procedure needs L0 > 0");
  TwoStageConfig cfg(l_factor * p.l0(), rules::Simplified{p});
  cfg.stage1_target = f.f_star() ? Stage1Target::FunctionGap : Stage1Target::GradNorm;
  return cfg;
}

Trace two_stage_run(const Objective& f, std::span<const double> x_s, const SmoothnessParams& p,
                    const TwoStageConfig& cfg, std::int64_t budget) {
  if (!(cfg.l_const > 0.0)) throw std::invalid_argument("two-stage procedure needs L > 0");
  std::optional<StepRule> t_rule = cfg.t_rule;
  if (!t_rule && !is_normalized(cfg.stage1_rule) && !std::holds_alternative<rules::Polyak>(cfg.stage1_rule)) {
    t_rule = cfg.stage1_rule;
  }

  Trace out;
  out.method = "two-stage";
  Vector start(x_s.begin(), x_s.end());
  std::int64_t calls_used = 0;
  std::int64_t values_used = 0;
  std::int64_t k_offset = 0;

  if (p.l1() > 0.0) {
    GdOptions options;
    options.grad_tol = cfg.grad_tol;
    options.stage = 1;
    if (cfg.stage1_target == Stage1Target::FunctionGap) {
      if (!f.f_star()) throw Unsupported("function-gap stage-1 target needs f* for '" + f.name() + "'");
      const double threshold = p.l0() / (5.0 * p.l1() * p.l1());
      options.stop = [threshold](const IterRecord& r, std::span<const double>) { return *r.f_gap <= threshold; };
    } else {
      const double threshold = p.l0() / p.l1();
      options.stop = [threshold](const IterRecord& r, std::span<const double>) { return r.grad_norm <= threshold; };
    }
    Trace stage1 = gd_run(f, cfg.stage1_rule, x_s, budget, options);
    out.records = std::move(stage1.records);
    out.final_x = stage1.final_x;
    out.termination = stage1.termination;
    calls_used = out.records.back().oracle_calls;
    values_used = out.records.back().value_calls;
    k_offset = static_cast<std::int64_t>(out.records.size());
    if (stage1.termination != Termination::TargetReached || calls_used >= budget) {
      if (stage1.termination == Termination::TargetReached) out.termination = Termination::BudgetExhausted;
      return out;
    }
    start = std::move(stage1.final_x);
  }

  AgmsdrConfig acfg{.l_const = cfg.l_const, .t_rule = t_rule, .line_search = cfg.line_search, .grad_tol = cfg.grad_tol};
  Trace stage2 = agmsdr_run(f, start, acfg, budget - calls_used);
  out.stage2_begin = out.records.size();
  const double best_before = out.records.empty() ? std::numeric_limits<double>::infinity() : out.records.back().f_best;
  for (IterRecord rec : stage2.records) {
    rec.k += k_offset;
    rec.oracle_calls += calls_used;
    rec.value_calls += values_used;
    rec.f_best = std::min(rec.f_best, best_before);
    rec.stage = 2;
    out.records.push_back(rec);
  }
  out.agmsdr = std::move(stage2.agmsdr);
  out.final_x = std::move(stage2.final_x);
  out.termination = stage2.termination;
  return out;
}

}  // namespace gsmooth
