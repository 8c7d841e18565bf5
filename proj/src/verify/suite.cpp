#include <algorithm>
#include <cmath>

#include "gsmooth/verify.hpp"

namespace gsmooth::verify {

std::vector<ShippedObjective> shipped_objectives() {
  std::vector<ShippedObjective> out;
  const auto add = [&](const Objective& f) { out.push_back({f, *f.params()}); };
  for (double p : {4.0, 6.0, 8.0}) add(problems::power_norm(2, p, 1.0));
  add(problems::logistic_1d(0.5));
  add(problems::affine_logistic({2.0, 1.0, -2.0}, 0.5, 1.0));
  add(problems::exp_phi(2, SmoothnessParams(1.0, 1.0)));
  add(problems::separable_pnorm(3, 4.0, 1.0));
  return out;
}

std::optional<Scope> parse_scope(const std::string& s) {
  if (s == "kernels") return Scope::Kernels;
  if (s == "lemmas") return Scope::Lemmas;
  if (s == "theorems") return Scope::Theorems;
  if (s == "all") return Scope::All;
  return std::nullopt;
}

namespace {

void kernel_checks(std::vector<CheckReport>& out, std::uint64_t seed) {
  out.push_back(kernel_phi_upper_bound(10000));
  out.push_back(kernel_phi_star_bounds(10000, 100.0));
  out.push_back(kernel_log_bounds(10000, 100.0));
  out.push_back(kernel_conjugacy(200, 10.0));
  out.push_back(kernel_psi_round_trip(10000));
  out.push_back(kernel_limit_continuity());
  out.push_back(stepsize_ordering_check(10000, seed));
}

CheckReport certificate_check(const Objective& f, const SmoothnessParams& p, std::uint64_t seed) {
  const CertificateReport cert = certify_smoothness(f, p, 5.0, 10000, seed);
  CheckReport rep("certificate:" + f.name(), seed, 1e-8);
  rep.n_cases = cert.n_samples - 1;
  rep.record(-cert.max_violation, [&] {
    return cert.violating_point ? format_point(*cert.violating_point) : std::string("none");
  });
  return rep;
}

// Controls that a working verification layer must reject.
std::vector<CheckReport> negative_controls(std::uint64_t seed) {
  const Objective f = problems::power_norm(2, 4.0, 1.0);
  const SmoothnessParams halved(f.params()->l0() / 2.0, f.params()->l1());
  CheckReport halved_rep = lemma2_sampler(f, halved, 1000, 2.0, seed);
  halved_rep.check_name = "control:halved_l0:" + f.name();

  const Objective corrupted = Objective("corrupted_gradient", f.dim(), [f](std::span<const double> x) { return f.value(x); },
                                        [f](std::span<const double> x) {
                                          Vector g = f.gradient(x);
                                          g[0] += 0.01;
                                          return g;
                                        });
  CheckReport corrupted_rep = fd_gradient_check(corrupted, 100, seed, 1e-5);
  corrupted_rep.check_name = "control:corrupted_gradient:" + f.name();
  return {halved_rep, corrupted_rep};
}

void lemma_checks(std::vector<CheckReport>& out, std::uint64_t seed, bool negative_control) {
  std::uint64_t s = seed;
  for (const ShippedObjective& obj : shipped_objectives()) {
    out.push_back(fd_gradient_check(obj.f, 200, ++s, 1e-5));
    out.push_back(fd_hessian_check(obj.f, 200, ++s, 1e-4));
    if (obj.f.f_star()) out.push_back(f_star_check(obj.f, 200, ++s));
    out.push_back(lemma2_sampler(obj.f, obj.params, 1000, 2.0, ++s));
    out.push_back(lemma4_sampler(obj.f, obj.params, 1000, ++s));
    out.push_back(certificate_check(obj.f, obj.params, ++s));
  }

  std::vector<CheckReport> controls = negative_controls(++s);
  CheckReport meta("negative_controls_fail", s, 0.0);
  for (CheckReport& c : controls) {
    meta.record(c.n_failures > 0 ? 0.0 : -1.0, [&] { return c.check_name; });
    c.informational = !negative_control;
    out.push_back(c);
  }
  out.push_back(meta);
}

void theorem_checks_suite(std::vector<CheckReport>& out) {
  const Objective p4 = problems::power_norm(2, 4.0, 1.0);
  const SmoothnessParams pp4 = *p4.params();
  const double r = 10.0;
  const Vector x0{r, 0.0};

  {
    const Trace t = gd_run(p4, rules::Simplified{pp4}, x0, 10001);
    out.push_back(descent_check(t, pp4));
    MonitorContext ctx{.params = pp4};
    out.push_back(theorem_monitor(t, Theorem::T1, ctx));
  }
  for (const StepRule& rule : {StepRule{rules::Optimal{pp4}}, StepRule{rules::Simplified{pp4}},
                               StepRule{rules::Clipped{pp4}}}) {
    const Trace t = gd_run(p4, rule, x0, 160001);
    out.push_back(descent_check(t, pp4));
    if (std::holds_alternative<rules::Optimal>(rule)) out.push_back(optimal_progress_check(t, pp4));
    MonitorContext ctx{.params = pp4, .epsilons = {1e-1, 1e-2}};
    out.push_back(theorem_monitor(t, Theorem::T2, ctx));
  }
  for (std::int64_t k : {100, 1000, 10000}) {
    const Trace t = ngd_run(p4, r, NgdSchedule::FixedHorizon, x0, k + 1);
    MonitorContext ctx{.params = pp4, .r_hat = r, .epsilons = {1.0, 0.5, 0.2}};
    CheckReport rep = theorem_monitor(t, Theorem::T3, ctx);
    rep.check_name += ":K=" + std::to_string(k);
    out.push_back(rep);
  }
  {
    const Trace t = ngd_run(p4, r, NgdSchedule::DecayingSqrt, x0, 10001);
    MonitorContext ctx{.params = pp4, .r_hat = r};
    out.push_back(theorem_monitor(t, Theorem::T3, ctx));
  }
  {
    const Trace t = gd_run(p4, rules::Polyak{}, x0, 20001);
    MonitorContext ctx{.params = pp4, .epsilons = {1.0, 0.1, 0.01}};
    out.push_back(theorem_monitor(t, Theorem::T4, ctx));
  }
  {
    const Objective q = problems::diagonal_quadratic({1.0, 0.1, 0.01});
    const Trace t = agmsdr_run(q, Vector{3.0, 4.0, 5.0}, AgmsdrConfig{.l_const = 1.0}, 2000);
    MonitorContext ctx{.l_const = 1.0};
    CheckReport rep = theorem_monitor(t, Theorem::T5, ctx);
    rep.check_name += ":" + q.name();
    out.push_back(rep);
  }
  {
    const Objective p6 = problems::power_norm(2, 6.0, 1.0);
    const SmoothnessParams pp6 = *p6.params();
    const TwoStageConfig cfg = TwoStageConfig::defaults(p6, pp6);
    const Trace t = two_stage_run(p6, x0, pp6, cfg, 20000);
    MonitorContext ctx{.params = pp6, .l_const = cfg.l_const, .epsilons = {1e-3}};
    CheckReport t5 = theorem_monitor(t, Theorem::T5, ctx);
    t5.check_name += ":" + p6.name();
    out.push_back(t5);
    out.push_back(theorem_monitor(t, Theorem::T6, ctx));
  }
}

}  // namespace

std::vector<CheckReport> run_suite(const SuiteOptions& options) {
  std::vector<CheckReport> out;
  const bool all = options.scope == Scope::All;
  if (all || options.scope == Scope::Kernels) kernel_checks(out, options.seed);
  if (all || options.scope == Scope::Lemmas) lemma_checks(out, options.seed, options.negative_control);
  if (all || options.scope == Scope::Theorems) theorem_checks_suite(out);
  return out;
}

bool suite_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed(); });
}

std::string format_reports(const std::vector<CheckReport>& reports) {
  std::string out;
  for (const CheckReport& r : reports) {
    out += r.to_line();
    if (r.informational) out += "\tinformational";
    out += '\n';
  }
  return out;
}

}  // namespace gsmooth::verify
