#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "gsmooth/kernels.hpp"
#include "gsmooth/simd/vector_ops.hpp"

namespace gsmooth {

// Dense symmetric matrix stored row-major.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static SymMatrix identity(std::size_t n, double diag = 1.0);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  // this += alpha * u u^T
  void add_outer(double alpha, std::span<const double> u);
  void add(const SymMatrix& other, double alpha = 1.0);
  void scale(double alpha);

  Vector multiply(std::span<const double> v) const;
  // max_{i,j} |A_ij - A_ji|
  double asymmetry() const;

 private:
  std::size_t n_ = 0;
  Vector data_;
};

// Largest-magnitude eigenvalue of a symmetric matrix by power iteration,
// stopping when successive estimates differ by less than tol (relative).
double spectral_norm(const SymMatrix& a, double tol = 1e-10, int max_iter = 500);

using ValueFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<Vector(std::span<const double>)>;
using HessianFn = std::function<SymMatrix(std::span<const double>)>;

// Immutable evaluation contract for a smooth objective on R^dim.
class Objective {
 public:
  Objective(std::string name, std::size_t dim, ValueFn value, GradientFn gradient);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }

  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;

  bool has_hessian() const { return static_cast<bool>(hessian_); }
  // Throws Unsupported when no Hessian was supplied.
  SymMatrix hessian(std::span<const double> x) const;

  const std::optional<double>& f_star() const { return f_star_; }
  const std::optional<Vector>& x_star() const { return x_star_; }
  const std::optional<SmoothnessParams>& params() const { return params_; }

  Objective with_hessian(HessianFn h) const;
  Objective with_f_star(double f_star) const;
  Objective with_x_star(Vector x_star) const;
  Objective with_params(SmoothnessParams p) const;
  Objective with_name(std::string name) const;
  Objective without_params() const;

 private:
  void check_dim(std::span<const double> x) const;

  std::string name_;
  std::size_t dim_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  std::optional<double> f_star_;
  std::optional<Vector> x_star_;
  std::optional<SmoothnessParams> params_;
};

}  // namespace gsmooth
