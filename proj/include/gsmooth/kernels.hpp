#pragma once

// Scalar kernel functions behind every stepsize formula and descent inequality
// for (L0, L1)-smooth functions:
//
//   phi(t)      = e^t - t - 1                     (t >= 0)
//   phi_star(g) = (1 + g) ln(1 + g) - g           (convex conjugate of phi)
//   psi(g)      = g^2 / (2 L0 + 3 L1 g)           (progress function)
//
// All functions are pure and evaluated in double precision with
// cancellation-safe branches near zero.

namespace gsmooth {

// The pair (L0, L1) bounding ||hess f(x)|| <= L0 + L1 ||grad f(x)||.
class SmoothnessParams {
 public:
  // Throws std::invalid_argument unless l0, l1 are finite, nonnegative and
  // not both zero.
  SmoothnessParams(double l0, double l1);

  double l0() const { return l0_; }
  double l1() const { return l1_; }

  // L0 + L1 * g
  double local_curvature(double grad_norm) const { return l0_ + l1_ * grad_norm; }

  friend bool operator==(const SmoothnessParams&, const SmoothnessParams&) = default;

 private:
  double l0_;
  double l1_;
};

double phi(double t);
double phi_star(double g);
double phi_star_prime(double g);

double psi(double g, const SmoothnessParams& p);
double psi_inverse(double t, const SmoothnessParams& p);

// phi(t) <= t^2 / (2 - 2t/3) + 1e-12 on [0, 3).
bool phi_upper_bound_check(double t);

// Scaled kernels with their L1 -> 0 limits taken exactly at l1 == 0.

// (e^{l1 r} - 1) / l1, and r at l1 == 0.
double exp_growth(double l1, double r);
// phi(l1 r) / l1^2, and r^2 / 2 at l1 == 0.
double phi_scaled(double l1, double r);
// (a / l1^2) phi_star(l1 s / a), and s^2 / (2a) at l1 == 0. Requires a >= 0;
// returns +inf when a == 0 and s > 0.
double phi_star_scaled(double a, double l1, double s);

}  // namespace gsmooth
