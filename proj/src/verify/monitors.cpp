#include <algorithm>
#include <cmath>
#include <limits>

#include "gsmooth/errors.hpp"
#include "gsmooth/format.hpp"
#include "gsmooth/kernels.hpp"
#include "gsmooth/verify.hpp"

namespace gsmooth::verify {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string at_k(std::int64_t k) { return "k=" + std::to_string(k); }

const SmoothnessParams& need_params(const MonitorContext& ctx, const char* who) {
  if (!ctx.params) throw Unsupported(std::string(who) + " needs (L0, L1)");
  return *ctx.params;
}

double need_r0(const Trace& trace, const MonitorContext& ctx, std::size_t index, const char* who) {
  if (ctx.r0) return *ctx.r0;
  if (index < trace.records.size() && trace.records[index].dist_to_opt) return *trace.records[index].dist_to_opt;
  throw Unsupported(std::string(who) + " needs the initial distance R");
}

double need_gap(const IterRecord& r, const char* who) {
  if (!r.f_gap) throw Unsupported(std::string(who) + " needs f*");
  return *r.f_gap;
}

void need_epsilons(const MonitorContext& ctx, const char* who) {
  if (ctx.epsilons.empty()) throw Unsupported(std::string(who) + " needs at least one target accuracy");
}

// Gap of the best iterate among records 0..i.
double best_gap(const IterRecord& r, double f_star) { return r.f_best - f_star; }

double trace_f_star(const Trace& trace, const char* who) {
  const IterRecord& r0 = trace.records.front();
  return r0.f_val - need_gap(r0, who);
}

// Record index holding iteration K, or the final record when the run stopped
// at an exact stationary point earlier (every later iterate would equal it).
std::optional<std::size_t> index_for(const Trace& trace, std::int64_t k) {
  const std::int64_t first = trace.records.front().k;
  const std::int64_t offset = k - first;
  if (offset < static_cast<std::int64_t>(trace.records.size())) return static_cast<std::size_t>(offset);
  if (trace.termination == Termination::StationaryExact) return trace.records.size() - 1;
  return std::nullopt;
}

std::int64_t ceil_iter(double k) { return static_cast<std::int64_t>(std::ceil(k)); }

std::vector<CheckReport> check_t1(const Trace& trace, const MonitorContext& ctx) {
  const SmoothnessParams& p = need_params(ctx, "T1");
  const double f0 = need_gap(trace.records.front(), "T1");
  CheckReport rep("T1:min_grad_bound", 0, 1e-9);
  rep.informational = trace.method != "gd-optimal" && trace.method != "gd-simplified";
  double min_g = kInf;
  for (const IterRecord& r : trace.records) {
    min_g = std::min(min_g, r.grad_norm);
    const double kk = static_cast<double>(r.k) + 1.0;
    const double bound = std::sqrt(2.0 * p.l0() * f0 / kk) + 3.0 * p.l1() * f0 / kk;
    rep.record(bound - min_g, [&] { return at_k(r.k); });
  }
  return {rep};
}

std::vector<CheckReport> check_t2(const Trace& trace, const MonitorContext& ctx) {
  const SmoothnessParams& p = need_params(ctx, "T2");
  need_epsilons(ctx, "T2");
  const double r = need_r0(trace, ctx, 0, "T2");
  need_gap(trace.records.front(), "T2");
  CheckReport rep("T2:gap_after_threshold", 0, 0.0);
  rep.informational = trace.method != "gd-optimal" && trace.method != "gd-simplified";
  for (double eps : ctx.epsilons) {
    const std::int64_t k_min = ceil_iter(std::max(4.0 * p.l0() * r * r / eps, 36.0 * p.l1() * p.l1() * r * r));
    const auto first = index_for(trace, k_min);
    if (!first) continue;
    for (std::size_t i = *first; i < trace.records.size(); ++i) {
      rep.record(eps - *trace.records[i].f_gap,
                 [&] { return "eps=" + format_double(eps) + " " + at_k(trace.records[i].k); });
    }
  }
  return {rep};
}

std::vector<CheckReport> check_t3(const Trace& trace, const MonitorContext& ctx) {
  if (!ctx.r_hat) throw Unsupported("T3 needs r_hat");
  const double r_hat = *ctx.r_hat;
  const double r = need_r0(trace, ctx, 0, "T3");
  const auto support = [](const IterRecord& rec) -> double {
    if (rec.support_dist) return *rec.support_dist;
    if (rec.grad_norm == 0.0) return 0.0;
    throw Unsupported("T3 needs x* to compute support distances");
  };

  if (trace.method == "ngd-fixed") {
    const SmoothnessParams& p = need_params(ctx, "T3");
    const std::int64_t k_end = trace.records.back().k;
    double v_star = kInf;
    for (const IterRecord& rec : trace.records) v_star = std::min(v_star, support(rec));
    CheckReport dist("T3:support_distance", 0, 1e-9);
    const double bound = (r * r + r_hat * r_hat) / (2.0 * r_hat * std::sqrt(static_cast<double>(k_end) + 1.0));
    dist.record(bound - v_star, [&] { return at_k(k_end); });

    CheckReport gap("T3:best_gap", 0, 0.0);
    const double f_star = trace_f_star(trace, "T3");
    const double r_bar = r * r / r_hat + r_hat;
    for (double eps : ctx.epsilons) {
      const double k_min = std::max(p.l0() * r_bar * r_bar / eps, 4.0 / 9.0 * p.l1() * p.l1() * r_bar * r_bar);
      if (static_cast<double>(k_end) < k_min && trace.termination != Termination::StationaryExact) continue;
      gap.record(eps - best_gap(trace.records.back(), f_star), [&] { return "eps=" + format_double(eps); });
    }
    return {dist, gap};
  }

  if (trace.method == "ngd-sqrt" || trace.method == "ngd-linear") {
    // C ln(K + 2) / sqrt(K + 1) envelope with C fitted at K = 16.
    CheckReport env("T3:decaying_envelope", 0, 1e-9);
    env.informational = true;
    constexpr std::size_t kFit = 16;
    if (trace.records.size() <= kFit) return {env};
    double v_star = kInf;
    double c = 0.0;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
      v_star = std::min(v_star, support(trace.records[i]));
      const double kk = static_cast<double>(i);
      if (i == kFit) c = v_star * std::sqrt(kk + 1.0) / std::log(kk + 2.0);
      if (i >= kFit) {
        env.record(c * std::log(kk + 2.0) / std::sqrt(kk + 1.0) - v_star, [&] { return at_k(trace.records[i].k); });
      }
    }
    return {env};
  }
  throw Unsupported("T3 applies to normalized gradient traces, not '" + trace.method + "'");
}

std::vector<CheckReport> check_t4(const Trace& trace, const MonitorContext& ctx) {
  if (trace.method != "gd-polyak") throw Unsupported("T4 applies to Polyak traces, not '" + trace.method + "'");
  const SmoothnessParams& p = need_params(ctx, "T4");
  const double f_star = trace_f_star(trace, "T4");
  const double r = need_r0(trace, ctx, 0, "T4");

  CheckReport contraction("T4:distance_contraction", 0, 1e-9);
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const IterRecord& a = trace.records[i];
    const IterRecord& b = trace.records[i + 1];
    if (!a.dist_to_opt || !b.dist_to_opt) throw Unsupported("T4 needs x* to track distances");
    const double ratio = *a.f_gap / a.grad_norm;
    const double rhs = *a.dist_to_opt * *a.dist_to_opt - ratio * ratio;
    contraction.record(rhs - *b.dist_to_opt * *b.dist_to_opt, [&] { return at_k(a.k); });
  }

  CheckReport gap("T4:best_gap", 0, 0.0);
  for (double eps : ctx.epsilons) {
    const std::int64_t k = ceil_iter(std::max(4.0 * p.l0() * r * r / eps, 36.0 * p.l1() * p.l1() * r * r));
    const auto idx = index_for(trace, k);
    if (!idx) continue;
    gap.record(eps - best_gap(trace.records[*idx], f_star),
               [&] { return "eps=" + format_double(eps) + " " + at_k(k); });
  }
  return {contraction, gap};
}

std::size_t stage2_begin(const Trace& trace, const char* who) {
  if (trace.method == "agmsdr") return 0;
  if (!trace.stage2_begin) throw Unsupported(std::string(who) + " needs a trace whose second stage ran");
  return *trace.stage2_begin;
}

std::vector<CheckReport> check_t5(const Trace& trace, const MonitorContext& ctx) {
  if (!ctx.l_const) throw Unsupported("T5 needs L");
  const double l = *ctx.l_const;
  const std::size_t begin = stage2_begin(trace, "T5");
  const double r0 = ctx.r0 ? *ctx.r0 : need_r0(trace, MonitorContext{}, begin, "T5");

  CheckReport mono("T5:monotonicity", 0, 1e-9);
  CheckReport cert("T5:certificate", 0, 1e-7);
  CheckReport growth("T5:coefficient_growth", 0, 1e-12);
  CheckReport rate("T5:rate", 0, 1e-9);
  for (const AgmsdrStep& s : trace.agmsdr) {
    const auto where = [&] { return at_k(s.k); };
    mono.record(std::min(s.f_x - s.f_y, s.f_y - s.f_x_next), where);
    cert.record(s.zeta_star_next - s.a_capital_next * s.f_x_next, where);
    const double kk = static_cast<double>(s.k) + 1.0;
    growth.record(s.a_capital_next * 4.0 * l / (kk * kk) - 1.0, where);
  }
  for (std::size_t i = begin + 1; i < trace.records.size(); ++i) {
    const double k = static_cast<double>(i - begin);
    rate.record(2.0 * l * r0 * r0 / (k * k) - need_gap(trace.records[i], "T5"),
                [&] { return at_k(static_cast<std::int64_t>(i - begin)); });
  }
  return {mono, cert, growth, rate};
}

std::vector<CheckReport> check_t6(const Trace& trace, const MonitorContext& ctx) {
  const SmoothnessParams& p = need_params(ctx, "T6");
  if (!ctx.l_const) throw Unsupported("T6 needs L");
  need_epsilons(ctx, "T6");
  const double l = *ctx.l_const;
  const std::size_t begin = stage2_begin(trace, "T6");
  const double grad_cap = p.l1() > 0.0 ? p.l0() / p.l1() : kInf;

  CheckReport exit("T6:stage1_exit_grad", 0, 1e-9);
  if (begin > 0) {
    const IterRecord& last = trace.records[begin - 1];
    exit.record(grad_cap - last.grad_norm, [&] { return at_k(last.k); });
  }

  CheckReport sublevel("T6:sublevel_containment", 0, 1e-9);
  const double f_start = trace.records[begin].f_val;
  for (const AgmsdrStep& s : trace.agmsdr) {
    sublevel.record(f_start - std::max(s.f_y, s.f_x_next), [&] { return at_k(s.k); });
  }

  CheckReport grad("T6:stage2_grad_bound", 0, 1e-6);
  grad.informational = !ctx.function_gap_target;
  for (std::size_t i = begin; i < trace.records.size(); ++i) {
    grad.record(grad_cap - trace.records[i].grad_norm, [&] { return at_k(trace.records[i].k); });
  }

  CheckReport progress("T6:operator_progress", 0, 1e-9);
  for (const AgmsdrStep& s : trace.agmsdr) {
    progress.record(s.f_y - s.f_x_next - s.grad_norm_y * s.grad_norm_y / (2.0 * l), [&] { return at_k(s.k); });
  }

  CheckReport calls("T6:oracle_calls", 0, 0.0);
  const double r = need_r0(trace, ctx, 0, "T6");
  const double m_bar = trace.mean_line_search_evals();
  for (double eps : ctx.epsilons) {
    const double bound = m_bar * std::sqrt(12.0 * p.l0() * r * r / eps) + 36.0 * p.l1() * p.l1() * r * r;
    const auto hit = std::find_if(trace.records.begin(), trace.records.end(),
                                  [&](const IterRecord& rec) { return need_gap(rec, "T6") <= eps; });
    const auto where = [&] { return "eps=" + format_double(eps); };
    if (hit != trace.records.end()) {
      calls.record(bound - static_cast<double>(hit->oracle_calls), where);
    } else if (static_cast<double>(trace.records.back().oracle_calls) >= bound) {
      calls.record(bound - static_cast<double>(trace.records.back().oracle_calls), where);
    }
  }
  return {exit, sublevel, grad, progress, calls};
}

}  // namespace

CheckReport descent_check(const Trace& trace, const SmoothnessParams& p) {
  const double a = trace.method == "gd-clipped" ? 0.5 : 1.0;
  CheckReport rep("descent:" + trace.method, 0, 1e-9);
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const IterRecord& cur = trace.records[i];
    const double g = cur.grad_norm;
    const double progress = cur.f_val - trace.records[i + 1].f_val;
    rep.record(progress - a * g * g / (2.0 * p.l0() + 3.0 * p.l1() * g), [&] { return at_k(cur.k); });
  }
  return rep;
}

CheckReport optimal_progress_check(const Trace& trace, const SmoothnessParams& p) {
  CheckReport rep("optimal_progress:" + trace.method, 0, 1e-9);
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const IterRecord& cur = trace.records[i];
    const double g = cur.grad_norm;
    const double progress = cur.f_val - trace.records[i + 1].f_val;
    rep.record(progress - phi_star_scaled(p.local_curvature(g), p.l1(), g), [&] { return at_k(cur.k); });
  }
  return rep;
}

std::string theorem_name(Theorem t) {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
    case Theorem::T4: return "T4";
    case Theorem::T5: return "T5";
    case Theorem::T6: return "T6";
  }
  return "?";
}

std::vector<CheckReport> theorem_checks(const Trace& trace, Theorem theorem, const MonitorContext& ctx) {
  if (trace.records.empty()) throw std::invalid_argument("theorem monitor on an empty trace");
  switch (theorem) {
    case Theorem::T1: return check_t1(trace, ctx);
    case Theorem::T2: return check_t2(trace, ctx);
    case Theorem::T3: return check_t3(trace, ctx);
    case Theorem::T4: return check_t4(trace, ctx);
    case Theorem::T5: return check_t5(trace, ctx);
    case Theorem::T6: return check_t6(trace, ctx);
  }
  throw std::invalid_argument("unknown theorem");
}

CheckReport theorem_monitor(const Trace& trace, Theorem theorem, const MonitorContext& ctx) {
  const std::vector<CheckReport> parts = theorem_checks(trace, theorem, ctx);
  CheckReport merged(theorem_name(theorem) + ":" + trace.method, 0, 0.0);
  merged.informational = true;
  for (const CheckReport& part : parts) {
    if (part.informational) continue;
    merged.informational = false;
    merged.n_cases += part.n_cases;
    merged.n_failures += part.n_failures;
    const double excess = part.worst_margin + part.tolerance;
    if (excess < merged.worst_margin || std::isnan(excess)) {
      merged.worst_margin = excess;
      merged.worst_case_input = part.check_name + " " + part.worst_case_input;
    }
  }
  if (merged.informational) {
    for (const CheckReport& part : parts) {
      merged.n_cases += part.n_cases;
      merged.n_failures += part.n_failures;
      merged.worst_margin = std::min(merged.worst_margin, part.worst_margin + part.tolerance);
    }
  }
  return merged;
}

}  // namespace gsmooth::verify
