#pragma once

// Independent checks: finite differences, sampled lemma inequalities, kernel
// grids, and post-hoc theorem monitors over recorded traces.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsmooth/agmsdr.hpp"
#include "gsmooth/first_order.hpp"
#include "gsmooth/problems.hpp"

namespace gsmooth::verify {

struct CheckReport {
  std::string check_name;
  std::int64_t n_cases = 0;
  std::int64_t n_failures = 0;
  // Most negative slack seen; +inf until the first case.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string worst_case_input;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  // Reported but never counted as a failure of the suite.
  bool informational = false;

  CheckReport() = default;
  CheckReport(std::string name, std::uint64_t seed, double tolerance);

  // Adds one case with the given slack; it fails when margin < -tolerance.
  void record(double margin, const std::function<std::string()>& describe_input = {});
  // Sums counts and keeps the smaller margin.
  void merge(const CheckReport& other);
  bool passed() const { return informational || n_failures == 0; }
  // check_name, n_cases, n_failures, worst_margin, seed separated by tabs.
  std::string to_line() const;
};

std::string format_point(std::span<const double> x);

CheckReport fd_gradient_check(const Objective& f, std::int64_t n_points, std::uint64_t seed, double rel_tol,
                              double radius = 5.0);
// Symmetry to 1e-10 (relative) and central differences of the gradient.
CheckReport fd_hessian_check(const Objective& f, std::int64_t n_points, std::uint64_t seed, double rel_tol,
                             double radius = 5.0);
// value(x) >= f_star on sampled points; Unsupported when f_star is unknown.
CheckReport f_star_check(const Objective& f, std::int64_t n_points, std::uint64_t seed, double radius = 5.0);

struct Lemma2Margins {
  double gradient;  // (L0 + L1 ||g(x)||) (e^{L1 r} - 1) / L1 - ||g(y) - g(x)||
  double value;     // (L0 + L1 ||g(x)||) phi(L1 r) / L1^2 - |f(y) - f(x) - <g(x), y - x>|
};
Lemma2Margins lemma2_margins(const Objective& f, const SmoothnessParams& p, std::span<const double> x,
                             std::span<const double> y);

struct Lemma4Margins {
  double bregman;     // f(y) - f(x) - <g(x), y - x> - (a_y / L1^2) phi*(L1 s / a_y)
  double monotone;    // <g(x) - g(y), x - y> minus the two phi* terms
  double simplified;  // f(y) - f(x) - <g(x), y - x> - s^2 / (2 a_y + L1 s)
};
// a_z = L0 + L1 ||g(z)||, s = ||g(y) - g(x)||.
Lemma4Margins lemma4_margins(const Objective& f, const SmoothnessParams& p, std::span<const double> x,
                             std::span<const double> y);

// x uniform in the ball of radius `radius`, y = x + rho u with u uniform on
// the sphere and rho uniform in (0, max_sep]. Absolute tolerance 1e-9.
CheckReport lemma2_sampler(const Objective& f, const SmoothnessParams& p, std::int64_t n_pairs, double max_sep,
                           std::uint64_t seed, double radius = 5.0);
CheckReport lemma4_sampler(const Objective& f, const SmoothnessParams& p, std::int64_t n_pairs, std::uint64_t seed,
                           double max_sep = 2.0, double radius = 5.0);

// [<grad f(x), x - x_star>]_+ / ||grad f(x)||; rejects a zero gradient.
double support_distance(const Objective& f, std::span<const double> x, std::span<const double> x_star);

// Dense-grid kernel checks, tolerance 1e-12 unless noted.
CheckReport kernel_phi_upper_bound(std::int64_t n_points);       // t in [0, 3)
CheckReport kernel_phi_star_bounds(std::int64_t n_points, double g_max);
CheckReport kernel_log_bounds(std::int64_t n_points, double g_max);
CheckReport kernel_conjugacy(std::int64_t n_points, double g_max);  // tolerance 1e-6
CheckReport kernel_psi_round_trip(std::int64_t n_points);           // relative 1e-10 on [0, 1e6]
CheckReport kernel_limit_continuity();                              // l1 = 1e-12 vs 0, relative 1e-6

// Sampled (L0, L1, g): 1/(2L0 + 3L1 g) <= clipped <= simplified <= optimal.
CheckReport stepsize_ordering_check(std::int64_t n_samples, std::uint64_t seed);

// Per-step progress f_k - f_{k+1} >= a g_k^2 / (2L0 + 3L1 g_k) - 1e-9 over a
// gradient-descent trace, with a = 1/2 for clipped stepsizes and 1 otherwise.
CheckReport descent_check(const Trace& trace, const SmoothnessParams& p);
// Progress of the optimal stepsize: f_k - f_{k+1} >= ((L0 + L1 g)/L1^2) phi*(L1 g/(L0 + L1 g)) - 1e-9.
CheckReport optimal_progress_check(const Trace& trace, const SmoothnessParams& p);

enum class Theorem { T1, T2, T3, T4, T5, T6 };
std::string theorem_name(Theorem t);

// Problem metadata a monitor may need. Missing required fields raise
// Unsupported. Distances and gaps default to the trace's recorded values.
struct MonitorContext {
  std::optional<SmoothnessParams> params;
  // ||x0 - x*|| of the run (T2, T3, T4, T6) or of the AGMsDR start (T5).
  std::optional<double> r0;
  std::optional<double> r_hat;    // T3
  std::optional<double> l_const;  // T5, T6
  std::vector<double> epsilons;   // T2, T3, T4, T6
  // T6: stage 1 used the function-gap target, so ||grad f(y_k)|| <= L0/L1 applies.
  bool function_gap_target = true;
};

// One report per inequality the theorem asserts, each with its own tolerance.
std::vector<CheckReport> theorem_checks(const Trace& trace, Theorem theorem, const MonitorContext& ctx);
// The parts merged into one report with tolerance 0: its worst_margin is the
// slack left beyond each part's own tolerance. Informational parts are left
// out unless every part is informational.
CheckReport theorem_monitor(const Trace& trace, Theorem theorem, const MonitorContext& ctx);

// A shipped objective with its analytic constants.
struct ShippedObjective {
  Objective f;
  SmoothnessParams params;
};
std::vector<ShippedObjective> shipped_objectives();

enum class Scope { Kernels, Lemmas, Theorems, All };
std::optional<Scope> parse_scope(const std::string& s);

struct SuiteOptions {
  Scope scope = Scope::All;
  std::uint64_t seed = 1;
  // Counts the raw negative controls as ordinary checks, so the suite fails.
  bool negative_control = false;
};

std::vector<CheckReport> run_suite(const SuiteOptions& options);
bool suite_passed(const std::vector<CheckReport>& reports);
std::string format_reports(const std::vector<CheckReport>& reports);

}  // namespace gsmooth::verify
