#include "gsmooth/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gsmooth {
namespace {

void require_nonnegative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::domain_error(std::string(what) + " must be finite and nonnegative, got " +
                            std::to_string(v));
  }
}

constexpr double kPhiSeriesThreshold = 1e-5;
constexpr double kPhiStarSeriesThreshold = 0.25;

}  // namespace

SmoothnessParams::SmoothnessParams(double l0, double l1) : l0_(l0), l1_(l1) {
  if (!std::isfinite(l0) || !std::isfinite(l1) || l0 < 0.0 || l1 < 0.0) {
    throw std::invalid_argument("smoothness constants must be finite and nonnegative");
  }
  if (l0 + l1 <= 0.0) {
    throw std::invalid_argument("smoothness constants L0 and L1 cannot both be zero");
  }
}

double phi(double t) {
  require_nonnegative(t, "phi argument");
  if (t < kPhiSeriesThreshold) {
    const double t2 = t * t;
    return t2 / 2.0 + t2 * t / 6.0 + t2 * t2 / 24.0;
  }
  if (t < 1.0) {
    // sum_{n>=2} t^n / n!
    double term = t * t / 2.0;
    double sum = term;
    for (int n = 3; n < 40; ++n) {
      term *= t / n;
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return sum;
  }
  return std::expm1(t) - t;
}

double phi_star(double g) {
  require_nonnegative(g, "phi_star argument");
  if (g < kPhiStarSeriesThreshold) {
    // sum_{n>=2} (-1)^n g^n / (n (n - 1))
    double power = g * g;
    double sum = 0.0;
    double sign = 1.0;
    for (int n = 2; n < 60; ++n) {
      const double term = power / (n * (n - 1.0));
      sum += sign * term;
      if (term < sum * 1e-18) break;
      power *= g;
      sign = -sign;
    }
    return sum;
  }
  return (1.0 + g) * std::log1p(g) - g;
}

double phi_star_prime(double g) {
  require_nonnegative(g, "phi_star_prime argument");
  return std::log1p(g);
}

double psi(double g, const SmoothnessParams& p) {
  require_nonnegative(g, "psi argument");
  if (g == 0.0) return 0.0;
  return g * g / (2.0 * p.l0() + 3.0 * p.l1() * g);
}

double psi_inverse(double t, const SmoothnessParams& p) {
  require_nonnegative(t, "psi_inverse argument");
  if (t == 0.0) return 0.0;
  // positive root of g^2 - 3 L1 t g - 2 L0 t = 0
  const double b = 3.0 * p.l1() * t;
  return (b + std::sqrt(b * b + 8.0 * p.l0() * t)) / 2.0;
}

bool phi_upper_bound_check(double t) {
  if (!(t >= 0.0 && t < 3.0)) {
    throw std::domain_error("phi upper bound is only stated on [0, 3), got " + std::to_string(t));
  }
  return phi(t) <= t * t / (2.0 - 2.0 * t / 3.0) + 1e-12;
}

double exp_growth(double l1, double r) {
  require_nonnegative(l1, "L1");
  require_nonnegative(r, "distance");
  if (l1 == 0.0) return r;
  return std::expm1(l1 * r) / l1;
}

double phi_scaled(double l1, double r) {
  require_nonnegative(l1, "L1");
  require_nonnegative(r, "distance");
  if (l1 == 0.0) return r * r / 2.0;
  return phi(l1 * r) / (l1 * l1);
}

double phi_star_scaled(double a, double l1, double s) {
  require_nonnegative(a, "curvature bound");
  require_nonnegative(l1, "L1");
  require_nonnegative(s, "gradient difference");
  if (s == 0.0) return 0.0;
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  if (l1 == 0.0) return s * s / (2.0 * a);
  return a / (l1 * l1) * phi_star(l1 * s / a);
}

}  // namespace gsmooth
