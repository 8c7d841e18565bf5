#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gsmooth/simd/vector_ops.hpp"

namespace {

using gsmooth::simd::Backend;
using gsmooth::simd::KernelTable;

std::vector<Backend> accelerated_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (gsmooth::simd::backend_available(b)) out.push_back(b);
  }
  return out;
}

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(gen);
  return v;
}

// Bound on the rounding difference between two summation orders.
double sum_tolerance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]);
  return 4.0 * (a.size() + 1) * 1.1102230246251565e-16 * s + 1e-300;
}

TEST(Simd, ScalarIsAlwaysAvailable) {
  EXPECT_TRUE(gsmooth::simd::backend_available(Backend::Scalar));
  EXPECT_EQ(gsmooth::simd::parse_backend("scalar"), Backend::Scalar);
  EXPECT_THROW(gsmooth::simd::parse_backend("sse9"), std::invalid_argument);
  EXPECT_EQ(gsmooth::simd::parse_backend("auto"), gsmooth::simd::detect_best_backend());
}

TEST(Simd, SetBackendSwitchesActiveTable) {
  const Backend before = gsmooth::simd::active_backend();
  gsmooth::simd::set_backend(Backend::Scalar);
  EXPECT_EQ(gsmooth::simd::active_backend(), Backend::Scalar);
  const std::vector<double> a{1.0, 2.0, 3.0};
  EXPECT_EQ(gsmooth::dot(a, a), 14.0);
  gsmooth::simd::set_backend(before);
  EXPECT_EQ(gsmooth::simd::active_backend(), before);
}

TEST(Simd, UnavailableBackendIsRejected) {
  for (Backend b : {Backend::Avx2, Backend::Neon}) {
    if (!gsmooth::simd::backend_available(b)) {
      EXPECT_THROW(gsmooth::simd::set_backend(b), std::invalid_argument);
    }
  }
}

TEST(Simd, ReductionsMatchScalarReference) {
  const KernelTable& ref = gsmooth::simd::kernel_table(Backend::Scalar);
  std::mt19937_64 gen(7);
  for (Backend b : accelerated_backends()) {
    const KernelTable& t = gsmooth::simd::kernel_table(b);
    for (std::size_t n = 0; n < 70; ++n) {
      const auto x = random_vector(gen, n);
      const auto y = random_vector(gen, n);
      EXPECT_NEAR(t.dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n), sum_tolerance(x, y)) << n;
      EXPECT_NEAR(t.squared_norm(x.data(), n), ref.squared_norm(x.data(), n), sum_tolerance(x, x)) << n;
    }
  }
}

TEST(Simd, ElementwiseOpsMatchScalarReference) {
  const KernelTable& ref = gsmooth::simd::kernel_table(Backend::Scalar);
  std::mt19937_64 gen(11);
  for (Backend b : accelerated_backends()) {
    const KernelTable& t = gsmooth::simd::kernel_table(b);
    for (std::size_t n = 0; n < 70; ++n) {
      const auto x = random_vector(gen, n);
      const auto y = random_vector(gen, n);
      const double alpha = -1.7;

      auto y_ref = y;
      auto y_t = y;
      ref.axpy(alpha, x.data(), y_ref.data(), n);
      t.axpy(alpha, x.data(), y_t.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(y_t[i], y_ref[i], 4e-16 * (std::abs(alpha * x[i]) + std::abs(y[i])));
      }

      std::vector<double> o_ref(n), o_t(n);
      ref.add_scaled(x.data(), alpha, y.data(), o_ref.data(), n);
      t.add_scaled(x.data(), alpha, y.data(), o_t.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(o_t[i], o_ref[i], 4e-16 * (std::abs(x[i]) + std::abs(alpha * y[i])));
      }

      ref.subtract(x.data(), y.data(), o_ref.data(), n);
      t.subtract(x.data(), y.data(), o_t.data(), n);
      EXPECT_EQ(o_t, o_ref);

      auto s_ref = x;
      auto s_t = x;
      ref.scale(alpha, s_ref.data(), n);
      t.scale(alpha, s_t.data(), n);
      EXPECT_EQ(s_t, s_ref);
    }
  }
}

TEST(Simd, AddScaledAllowsAliasing) {
  for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
    if (!gsmooth::simd::backend_available(b)) continue;
    const KernelTable& t = gsmooth::simd::kernel_table(b);
    std::vector<double> a{1, 2, 3, 4, 5, 6, 7};
    const std::vector<double> c{1, 1, 1, 1, 1, 1, 1};
    t.add_scaled(a.data(), 2.0, c.data(), a.data(), a.size());
    EXPECT_EQ(a, (std::vector<double>{3, 4, 5, 6, 7, 8, 9}));
  }
}

TEST(Simd, ExactOnSmallIntegers) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> dist(-50, 50);
  for (Backend b : accelerated_backends()) {
    const KernelTable& t = gsmooth::simd::kernel_table(b);
    const KernelTable& ref = gsmooth::simd::kernel_table(Backend::Scalar);
    for (std::size_t n = 1; n < 40; ++n) {
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = dist(gen);
        y[i] = dist(gen);
      }
      EXPECT_EQ(t.dot(x.data(), y.data(), n), ref.dot(x.data(), y.data(), n));
    }
  }
}

TEST(Simd, VectorHelpers) {
  const gsmooth::Vector a{3.0, 4.0};
  const gsmooth::Vector b{1.0, 1.0};
  EXPECT_DOUBLE_EQ(gsmooth::norm(a), 5.0);
  EXPECT_EQ(gsmooth::combine(a, 2.0, b), (gsmooth::Vector{5.0, 6.0}));
  EXPECT_EQ(gsmooth::difference(a, b), (gsmooth::Vector{2.0, 3.0}));
  EXPECT_DOUBLE_EQ(gsmooth::distance(a, b), std::sqrt(13.0));
}

}  // namespace
