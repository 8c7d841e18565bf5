#pragma once

// Test functions with analytically known (L0, L1) constants, and the
// combinators that preserve (L0, L1)-smoothness.

#include <cstdint>
#include <optional>
#include <vector>

#include "gsmooth/objective.hpp"

namespace gsmooth::problems {

// f(x) = ||x||^p / p with p > 2; for any l1 > 0, L0 = ((p - 2) / l1)^(p - 2).
Objective power_norm(std::size_t dim, double p, double l1);

// f(x) = ln(1 + e^x) on R; for l1 in [0, 1], L0 = (1 - l1)^2 / 4.
// The infimum 0 is not attained, so f_star and x_star are left unset.
Objective logistic_1d(double l1);

// f(x) = ln(1 + e^{<a, x> + b}); for l1 in [0, ||a||], L0 = (||a|| - l1)^2 / 4.
Objective affine_logistic(const Vector& a, double b, double l1);

// f(x) = (L0 / L1^2) phi(L1 ||x||), which is (L0, L1)-smooth with equality in
// the Hessian bound along rays.
Objective exp_phi(std::size_t dim, const SmoothnessParams& p);

// f(x) = ||x||^2 / 2, (L0, L1) = (1, 0).
Objective quadratic(std::size_t dim);

// f(x) = sum_i w_i x_i^2 / 2 with w_i > 0, (L0, L1) = (max w, 0).
Objective diagonal_quadratic(const Vector& weights);

// Soft-max g(x) = mu ln(sum_i exp((<a_i, x> + b_i) / mu)). It is L-smooth with
// L = max ||a_i||^2 / mu and M-Lipschitz with M = max ||a_i||.
struct SoftMax {
  Objective objective;
  double lip_grad;  // L
  double lip_value; // M
};
SoftMax softmax(const std::vector<Vector>& rows, const Vector& offsets, double mu);

// f + g where f has params (L0, L1) and g is L-smooth and M-Lipschitz:
// params (L0 + M L1 + L, L1).
Objective sum_with_smooth(const Objective& f, const Objective& g, double g_lip_grad, double g_lip_value);

// h(x_1, ..., x_n) = sum_i f_i(x_i) with params (max L0i, max L1i).
Objective separable_sum(const std::vector<Objective>& parts);

// sum_i |x_i|^p / p as a separable sum of one-dimensional power_norm parts.
Objective separable_pnorm(std::size_t dim, double p, double l1);

}  // namespace gsmooth::problems

namespace gsmooth {

struct CertificateReport {
  std::int64_t n_samples = 0;
  // max over samples of ||hess f(x)|| - L0 - L1 ||grad f(x)||
  double max_violation = 0.0;
  std::optional<Vector> violating_point;
  double region_radius = 0.0;

  bool passes(double tolerance) const { return max_violation <= tolerance; }
};

// Samples the ball of radius region_radius around the origin (the origin
// itself is always the first sample) and reports the worst slack of the
// Hessian bound. Throws Unsupported when f has no Hessian.
CertificateReport certify_smoothness(const Objective& f, const SmoothnessParams& p, double region_radius,
                                     std::int64_t n_samples, std::uint64_t seed);

}  // namespace gsmooth
