#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsmooth/errors.hpp"
#include "gsmooth/problems.hpp"
#include "gsmooth/random.hpp"

namespace gsmooth {

CertificateReport certify_smoothness(const Objective& f, const SmoothnessParams& p, double region_radius,
                                     std::int64_t n_samples, std::uint64_t seed) {
  if (!f.has_hessian()) throw Unsupported("certify_smoothness: objective '" + f.name() + "' has no Hessian");
  if (n_samples < 1) throw std::invalid_argument("certify_smoothness needs at least one sample");
  if (!(region_radius >= 0.0) || !std::isfinite(region_radius)) {
    throw std::invalid_argument("certificate region radius must be finite and nonnegative");
  }

  CertificateReport report;
  report.region_radius = region_radius;
  report.max_violation = -std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Vector x = i == 0 ? Vector(f.dim(), 0.0) : rng.uniform_in_ball(f.dim(), region_radius);
    const double h = spectral_norm(f.hessian(x));
    const double violation = h - p.local_curvature(norm(f.gradient(x)));
    if (!std::isfinite(violation)) throw EvaluationError("non-finite Hessian bound while certifying " + f.name());
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.violating_point = x;
    }
    ++report.n_samples;
  }
  if (report.max_violation <= 0.0) report.violating_point.reset();
  return report;
}

}  // namespace gsmooth
