#include "gsmooth/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gsmooth/errors.hpp"

namespace gsmooth {

SymMatrix SymMatrix::identity(std::size_t n, double diag) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = diag;
  return m;
}

void SymMatrix::add_outer(double alpha, std::span<const double> u) {
  for (std::size_t i = 0; i < n_; ++i) {
    gsmooth::axpy(alpha * u[i], u, std::span<double>(data_.data() + i * n_, n_));
  }
}

void SymMatrix::add(const SymMatrix& other, double alpha) {
  if (other.n_ != n_) throw std::invalid_argument("matrix size mismatch");
  gsmooth::axpy(alpha, other.data_, data_);
}

void SymMatrix::scale(double alpha) { gsmooth::scale(alpha, data_); }

Vector SymMatrix::multiply(std::span<const double> v) const {
  Vector out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = gsmooth::dot(row(i), v);
  return out;
}

double SymMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  }
  return worst;
}

double spectral_norm(const SymMatrix& a, double tol, int max_iter) {
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(a(0, 0));
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + std::fmod(0.6180339887498949 * (i + 1), 1.0);
  scale(1.0 / norm(v), v);

  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = a.multiply(v);
    const double next = norm(w);
    if (next == 0.0) return 0.0;
    scale(1.0 / next, w);
    v = std::move(w);
    const bool converged = std::abs(next - estimate) <= tol * next;
    estimate = next;
    if (converged) break;
  }
  return estimate;
}

Objective::Objective(std::string name, std::size_t dim, ValueFn value, GradientFn gradient)
    : name_(std::move(name)), dim_(dim), value_(std::move(value)), gradient_(std::move(gradient)) {
  if (dim_ == 0) throw std::invalid_argument("objective dimension must be positive");
  if (!value_ || !gradient_) throw std::invalid_argument("objective needs value and gradient oracles");
}

void Objective::check_dim(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("point of dimension " + std::to_string(x.size()) + " passed to " +
                                name_ + " (dimension " + std::to_string(dim_) + ")");
  }
}

double Objective::value(std::span<const double> x) const {
  check_dim(x);
  return value_(x);
}

Vector Objective::gradient(std::span<const double> x) const {
  check_dim(x);
  return gradient_(x);
}

SymMatrix Objective::hessian(std::span<const double> x) const {
  check_dim(x);
  if (!hessian_) throw Unsupported("objective '" + name_ + "' provides no Hessian");
  return hessian_(x);
}

Objective Objective::with_hessian(HessianFn h) const {
  Objective o = *this;
  o.hessian_ = std::move(h);
  return o;
}

Objective Objective::with_f_star(double f_star) const {
  Objective o = *this;
  o.f_star_ = f_star;
  return o;
}

Objective Objective::with_x_star(Vector x_star) const {
  if (x_star.size() != dim_) throw std::invalid_argument("x_star dimension mismatch");
  Objective o = *this;
  o.x_star_ = std::move(x_star);
  return o;
}

Objective Objective::with_params(SmoothnessParams p) const {
  Objective o = *this;
  o.params_ = p;
  return o;
}

Objective Objective::with_name(std::string name) const {
  Objective o = *this;
  o.name_ = std::move(name);
  return o;
}

Objective Objective::without_params() const {
  Objective o = *this;
  o.params_.reset();
  return o;
}

}  // namespace gsmooth
