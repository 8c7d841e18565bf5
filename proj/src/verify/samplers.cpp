#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gsmooth/errors.hpp"
#include "gsmooth/format.hpp"
#include "gsmooth/kernels.hpp"
#include "gsmooth/random.hpp"
#include "gsmooth/verify.hpp"

namespace gsmooth::verify {

CheckReport::CheckReport(std::string name, std::uint64_t seed_, double tolerance_)
    : check_name(std::move(name)), seed(seed_), tolerance(tolerance_) {}

void CheckReport::record(double margin, const std::function<std::string()>& describe_input) {
  ++n_cases;
  const bool failed = !(margin >= -tolerance);
  if (failed) ++n_failures;
  if (std::isnan(margin) || margin < worst_margin) {
    worst_margin = margin;
    if (describe_input) worst_case_input = describe_input();
  }
}

void CheckReport::merge(const CheckReport& other) {
  n_cases += other.n_cases;
  n_failures += other.n_failures;
  if (other.worst_margin < worst_margin || std::isnan(other.worst_margin)) {
    worst_margin = other.worst_margin;
    worst_case_input = other.worst_case_input;
  }
}

std::string CheckReport::to_line() const {
  return check_name + '\t' + std::to_string(n_cases) + '\t' + std::to_string(n_failures) + '\t' +
         format_double(worst_margin) + '\t' + std::to_string(seed);
}

std::string format_point(std::span<const double> x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out += ';';
    out += format_double(x[i]);
  }
  return out + ")";
}

CheckReport fd_gradient_check(const Objective& f, std::int64_t n_points, std::uint64_t seed, double rel_tol,
                              double radius) {
  CheckReport report("fd_gradient:" + f.name(), seed, 0.0);
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_points; ++i) {
    Vector x = rng.uniform_in_ball(f.dim(), radius);
    const double h = 1e-6 * (1.0 + norm(x));
    const Vector g = f.gradient(x);
    Vector fd(f.dim());
    for (std::size_t j = 0; j < f.dim(); ++j) {
      const double xj = x[j];
      x[j] = xj + h;
      const double up = f.value(x);
      x[j] = xj - h;
      const double down = f.value(x);
      x[j] = xj;
      fd[j] = (up - down) / (2.0 * h);
    }
    const double err = distance(fd, g) / (1.0 + norm(g));
    report.record(rel_tol - err, [&] { return format_point(x); });
  }
  return report;
}

namespace {

double frobenius(const SymMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += squared_norm(m.row(i));
  return std::sqrt(s);
}

}  // namespace

CheckReport fd_hessian_check(const Objective& f, std::int64_t n_points, std::uint64_t seed, double rel_tol,
                             double radius) {
  CheckReport report("fd_hessian:" + f.name(), seed, 0.0);
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_points; ++i) {
    Vector x = rng.uniform_in_ball(f.dim(), radius);
    const double h = 1e-6 * (1.0 + norm(x));
    const SymMatrix hess = f.hessian(x);
    const double scale = 1.0 + frobenius(hess);
    SymMatrix fd(f.dim());
    for (std::size_t j = 0; j < f.dim(); ++j) {
      const double xj = x[j];
      x[j] = xj + h;
      const Vector up = f.gradient(x);
      x[j] = xj - h;
      const Vector down = f.gradient(x);
      x[j] = xj;
      for (std::size_t r = 0; r < f.dim(); ++r) fd(r, j) = (up[r] - down[r]) / (2.0 * h);
    }
    fd.add(hess, -1.0);
    const double err = frobenius(fd) / scale;
    const double asym = hess.asymmetry() / scale;
    report.record(std::min(rel_tol - err, 1e-10 - asym), [&] { return format_point(x); });
  }
  return report;
}

CheckReport f_star_check(const Objective& f, std::int64_t n_points, std::uint64_t seed, double radius) {
  if (!f.f_star()) throw Unsupported("f_star_check: '" + f.name() + "' has no known optimal value");
  CheckReport report("f_star_lower_bound:" + f.name(), seed, 0.0);
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_points; ++i) {
    const Vector x = rng.uniform_in_ball(f.dim(), radius);
    report.record(f.value(x) - *f.f_star(), [&] { return format_point(x); });
  }
  return report;
}

Lemma2Margins lemma2_margins(const Objective& f, const SmoothnessParams& p, std::span<const double> x,
                             std::span<const double> y) {
  const Vector gx = f.gradient(x);
  const Vector gy = f.gradient(y);
  const Vector d = difference(y, x);
  const double r = norm(d);
  const double curvature = p.local_curvature(norm(gx));
  Lemma2Margins m{};
  m.gradient = curvature * exp_growth(p.l1(), r) - distance(gy, gx);
  m.value = curvature * phi_scaled(p.l1(), r) - std::abs(f.value(y) - f.value(x) - dot(gx, d));
  return m;
}

Lemma4Margins lemma4_margins(const Objective& f, const SmoothnessParams& p, std::span<const double> x,
                             std::span<const double> y) {
  const Vector gx = f.gradient(x);
  const Vector gy = f.gradient(y);
  const double s = distance(gy, gx);
  const double a_x = p.local_curvature(norm(gx));
  const double a_y = p.local_curvature(norm(gy));
  const double bregman = f.value(y) - f.value(x) - dot(gx, difference(y, x));
  const double term_y = s == 0.0 ? 0.0 : phi_star_scaled(a_y, p.l1(), s);
  const double term_x = s == 0.0 ? 0.0 : phi_star_scaled(a_x, p.l1(), s);
  Lemma4Margins m{};
  m.bregman = bregman - term_y;
  m.monotone = dot(difference(gx, gy), difference(x, y)) - term_y - term_x;
  m.simplified = s == 0.0 ? bregman : bregman - s * s / (2.0 * a_y + p.l1() * s);
  return m;
}

namespace {

struct Pair {
  Vector x;
  Vector y;
};

Pair sample_pair(Rng& rng, std::size_t dim, double radius, double max_sep) {
  Pair pr;
  pr.x = rng.uniform_in_ball(dim, radius);
  const Vector u = rng.unit_direction(dim);
  const double rho = max_sep * rng.uniform_open_left();
  pr.y = combine(pr.x, rho, u);
  return pr;
}

std::string describe_pair(const Pair& pr) { return "x=" + format_point(pr.x) + " y=" + format_point(pr.y); }

}  // namespace

CheckReport lemma2_sampler(const Objective& f, const SmoothnessParams& p, std::int64_t n_pairs, double max_sep,
                           std::uint64_t seed, double radius) {
  CheckReport report("lemma2:" + f.name(), seed, 1e-9);
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_pairs; ++i) {
    const Pair pr = sample_pair(rng, f.dim(), radius, max_sep);
    const Lemma2Margins m = lemma2_margins(f, p, pr.x, pr.y);
    report.record(std::min(m.gradient, m.value), [&] { return describe_pair(pr); });
  }
  return report;
}

CheckReport lemma4_sampler(const Objective& f, const SmoothnessParams& p, std::int64_t n_pairs, std::uint64_t seed,
                           double max_sep, double radius) {
  CheckReport report("lemma4:" + f.name(), seed, 1e-9);
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_pairs; ++i) {
    const Pair pr = sample_pair(rng, f.dim(), radius, max_sep);
    const Lemma4Margins m = lemma4_margins(f, p, pr.x, pr.y);
    report.record(std::min({m.bregman, m.monotone, m.simplified}), [&] { return describe_pair(pr); });
  }
  return report;
}

double support_distance(const Objective& f, std::span<const double> x, std::span<const double> x_star) {
  const Vector g = f.gradient(x);
  const double gn = norm(g);
  if (gn == 0.0) throw std::invalid_argument("support distance undefined at a zero gradient");
  return std::max(0.0, dot(g, difference(x, x_star))) / gn;
}

CheckReport kernel_phi_upper_bound(std::int64_t n_points) {
  CheckReport report("kernel:phi_upper_bound", 0, 1e-12);
  for (std::int64_t i = 0; i < n_points; ++i) {
    const double t = 3.0 * static_cast<double>(i) / static_cast<double>(n_points);
    report.record(t * t / (2.0 - 2.0 * t / 3.0) - phi(t), [t] { return "t=" + format_double(t); });
  }
  return report;
}

CheckReport kernel_phi_star_bounds(std::int64_t n_points, double g_max) {
  CheckReport report("kernel:phi_star_bounds", 0, 1e-12);
  for (std::int64_t i = 0; i < n_points; ++i) {
    const double g = g_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
    const double v = phi_star(g);
    report.record(std::min(v - g * g / (2.0 + g), g * g / 2.0 - v), [g] { return "g=" + format_double(g); });
  }
  return report;
}

CheckReport kernel_log_bounds(std::int64_t n_points, double g_max) {
  CheckReport report("kernel:log_bounds", 0, 1e-12);
  for (std::int64_t i = 0; i < n_points; ++i) {
    const double g = g_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
    const double v = phi_star_prime(g);
    report.record(std::min(v - 2.0 * g / (2.0 + g), g - v), [g] { return "g=" + format_double(g); });
  }
  return report;
}

CheckReport kernel_conjugacy(std::int64_t n_points, double g_max) {
  CheckReport report("kernel:conjugacy", 0, 1e-6);
  constexpr int kGrid = 20000;
  const double t_max = std::log1p(g_max) + 1.0;
  std::vector<double> ts(kGrid + 1);
  std::vector<double> phis(kGrid + 1);
  for (int j = 0; j <= kGrid; ++j) {
    ts[j] = t_max * j / kGrid;
    phis[j] = phi(ts[j]);
  }
  for (std::int64_t i = 0; i < n_points; ++i) {
    const double g = g_max * static_cast<double>(i) / static_cast<double>(n_points - 1);
    double best = 0.0;
    for (int j = 0; j <= kGrid; ++j) best = std::max(best, g * ts[j] - phis[j]);
    report.record(-std::abs(phi_star(g) - best), [g] { return "g=" + format_double(g); });
  }
  return report;
}

CheckReport kernel_psi_round_trip(std::int64_t n_points) {
  CheckReport report("kernel:psi_round_trip", 0, 1e-10);
  const SmoothnessParams params[] = {{1.0, 1.0}, {2.0, 5.0}, {256.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
  for (const auto& p : params) {
    for (std::int64_t i = 0; i < n_points; ++i) {
      const double g = 1e6 * static_cast<double>(i) / static_cast<double>(n_points - 1);
      const double back = psi_inverse(psi(g, p), p);
      const double rel = g == 0.0 ? std::abs(back) : std::abs(back - g) / g;
      report.record(-rel, [&] { return "g=" + format_double(g) + " L0=" + format_double(p.l0()) +
                                       " L1=" + format_double(p.l1()); });
    }
  }
  return report;
}

CheckReport kernel_limit_continuity() {
  CheckReport report("kernel:l1_limit_continuity", 0, 1e-6);
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  for (double l0 : {0.5, 1.0, 4.0}) {
    const SmoothnessParams tiny(l0, 1e-12);
    const SmoothnessParams zero(l0, 0.0);
    for (double g : {0.0, 1e-3, 1.0, 10.0, 1e3}) {
      const auto where = [&] { return "L0=" + format_double(l0) + " g=" + format_double(g); };
      report.record(-rel(stepsize_optimal(g, tiny), stepsize_optimal(g, zero)), where);
      report.record(-rel(stepsize_simplified(g, tiny), stepsize_simplified(g, zero)), where);
      report.record(-rel(stepsize_clipped(g, tiny), stepsize_clipped(g, zero)), where);
      if (g > 0.0) {
        report.record(-rel(psi(g, tiny), psi(g, zero)), where);
        report.record(-rel(phi_star_scaled(l0, 1e-12, g), phi_star_scaled(l0, 0.0, g)), where);
      }
    }
    for (double r : {1e-3, 1.0, 5.0}) {
      const auto where = [&] { return "r=" + format_double(r); };
      report.record(-rel(exp_growth(1e-12, r), exp_growth(0.0, r)), where);
      report.record(-rel(phi_scaled(1e-12, r), phi_scaled(0.0, r)), where);
    }
  }
  return report;
}

CheckReport stepsize_ordering_check(std::int64_t n_samples, std::uint64_t seed) {
  CheckReport report("stepsize_ordering", seed, 1e-15);
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double l0 = std::exp(rng.uniform(-6.0, 6.0));
    const double l1 = i % 10 == 0 ? 0.0 : std::exp(rng.uniform(-6.0, 6.0));
    const double g = std::exp(rng.uniform(-10.0, 10.0));
    const SmoothnessParams p(l0, l1);
    const double opt = stepsize_optimal(g, p);
    const double simple = stepsize_simplified(g, p);
    const double clipped = stepsize_clipped(g, p);
    const double floor = 1.0 / (2.0 * l0 + 3.0 * l1 * g);
    // relative slack of each link in the chain
    const double margin = std::min({(clipped - floor) / floor, (simple - clipped) / simple, (opt - simple) / opt});
    report.record(margin, [&] {
      return "L0=" + format_double(l0) + " L1=" + format_double(l1) + " g=" + format_double(g);
    });
  }
  return report;
}

}  // namespace gsmooth::verify
