#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gsmooth/errors.hpp"
#include "gsmooth/problems.hpp"

namespace {

using gsmooth::Objective;
using gsmooth::SmoothnessParams;
using gsmooth::Vector;
namespace problems = gsmooth::problems;

Vector random_point(std::mt19937_64& gen, std::size_t dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector x(dim);
  for (double& v : x) v = u(gen);
  return x;
}

// Central differences computed here, independently of the verify module.
Vector fd_gradient(const Objective& f, const Vector& x) {
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f.value(xp) - f.value(xm)) / (2.0 * h);
  }
  return g;
}

void expect_gradient_matches_fd(const Objective& f, double scale, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (int n = 0; n < 100; ++n) {
    const Vector x = random_point(gen, f.dim(), scale);
    const Vector g = f.gradient(x);
    const Vector fd = fd_gradient(f, x);
    EXPECT_LE(gsmooth::distance(g, fd), 1e-5 * (1.0 + gsmooth::norm(g))) << f.name();
  }
}

void expect_hessian_matches_fd(const Objective& f, double scale, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (int n = 0; n < 50; ++n) {
    const Vector x = random_point(gen, f.dim(), scale);
    const gsmooth::SymMatrix h = f.hessian(x);
    double err = 0.0, size = 0.0;
    for (std::size_t j = 0; j < f.dim(); ++j) {
      const double step = 1e-5 * (1.0 + std::abs(x[j]));
      Vector xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      const Vector gp = f.gradient(xp), gm = f.gradient(xm);
      for (std::size_t i = 0; i < f.dim(); ++i) {
        const double fd = (gp[i] - gm[i]) / (2.0 * step);
        err += (fd - h(i, j)) * (fd - h(i, j));
        size += h(i, j) * h(i, j);
      }
    }
    EXPECT_LE(std::sqrt(err), 1e-4 * (1.0 + std::sqrt(size))) << f.name();
    EXPECT_LE(h.asymmetry(), 1e-10 * (1.0 + std::sqrt(size)));
  }
}

TEST(PowerNorm, ExampleConstants) {
  EXPECT_EQ(*problems::power_norm(2, 4.0, 1.0).params(), SmoothnessParams(4.0, 1.0));
  EXPECT_EQ(*problems::power_norm(2, 6.0, 1.0).params(), SmoothnessParams(256.0, 1.0));
  EXPECT_DOUBLE_EQ(problems::power_norm(2, 6.0, 2.0).params()->l0(), 16.0);
}

TEST(PowerNorm, ValueAndGradient) {
  const Objective f = problems::power_norm(2, 4.0, 1.0);
  const Vector x{1.0, 1.0};
  EXPECT_DOUBLE_EQ(f.value(x), 1.0);
  const Vector g = f.gradient(x);
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_DOUBLE_EQ(g[1], 2.0);
  EXPECT_EQ(*f.f_star(), 0.0);
  EXPECT_EQ(*f.x_star(), (Vector{0.0, 0.0}));
}

TEST(PowerNorm, HessianVanishesAtOrigin) {
  const gsmooth::SymMatrix h = problems::power_norm(3, 4.0, 1.0).hessian(Vector{0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(h(i, j), 0.0);
  }
}

TEST(PowerNorm, RejectsInvalidArguments) {
  EXPECT_THROW(problems::power_norm(2, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(problems::power_norm(2, 4.0, 0.0), std::invalid_argument);
  EXPECT_THROW(problems::power_norm(0, 4.0, 1.0), std::invalid_argument);
}

TEST(Logistic, ExampleConstants) {
  EXPECT_DOUBLE_EQ(problems::logistic_1d(0.0).params()->l0(), 0.25);
  EXPECT_EQ(problems::logistic_1d(1.0).params()->l0(), 0.0);
  EXPECT_DOUBLE_EQ(problems::logistic_1d(0.5).params()->l0(), 1.0 / 16.0);
  EXPECT_THROW(problems::logistic_1d(1.5), std::invalid_argument);
}

TEST(Logistic, ValuesAtZero) {
  const Objective f = problems::logistic_1d(0.5);
  const Vector x{0.0};
  EXPECT_DOUBLE_EQ(f.value(x), std::log(2.0));
  EXPECT_DOUBLE_EQ(f.gradient(x)[0], 0.5);
  EXPECT_DOUBLE_EQ(f.hessian(x)(0, 0), 0.25);
  EXPECT_FALSE(f.f_star().has_value());
}

TEST(Logistic, StableForLargeArguments) {
  const Objective f = problems::logistic_1d(0.5);
  EXPECT_DOUBLE_EQ(f.value(Vector{800.0}), 800.0);
  EXPECT_GT(f.value(Vector{-800.0}), -1.0);
  EXPECT_TRUE(std::isfinite(f.gradient(Vector{-800.0})[0]));
}

TEST(AffineLogistic, ExampleConstants) {
  EXPECT_EQ(problems::affine_logistic({2.0, 0.0}, 0.0, 2.0).params()->l0(), 0.0);
  EXPECT_DOUBLE_EQ(problems::affine_logistic({1.0, 0.0}, 0.0, 0.5).value(Vector{0.0, 0.0}), std::log(2.0));
  const Vector a{2.0, 1.0, -2.0};
  const double a_norm = std::sqrt(4.0 + 1.0 + 4.0);
  const Objective f = problems::affine_logistic(a, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(f.params()->l0(), (a_norm - 1.0) * (a_norm - 1.0) / 4.0);
  EXPECT_DOUBLE_EQ(f.params()->l0(), 1.0);
  EXPECT_LE(gsmooth::certify_smoothness(f, *f.params(), 5.0, 10000, 3).max_violation, 1e-8);
  EXPECT_THROW(problems::affine_logistic(a, 0.0, 3.5), std::invalid_argument);
}

TEST(ExpPhi, Values) {
  const Objective f = problems::exp_phi(2, SmoothnessParams(1.0, 1.0));
  EXPECT_EQ(f.value(Vector{0.0, 0.0}), 0.0);
  EXPECT_EQ(f.gradient(Vector{0.0, 0.0}), (Vector{0.0, 0.0}));
  EXPECT_NEAR(f.value(Vector{0.6, 0.8}), std::exp(1.0) - 2.0, 1e-15);
}

TEST(ExpPhi, CertifiedOnRadiusThree) {
  const Objective f = problems::exp_phi(2, SmoothnessParams(1.0, 1.0));
  EXPECT_LE(gsmooth::certify_smoothness(f, *f.params(), 3.0, 10000, 1).max_violation, 1e-8);
}

TEST(SumWithSmooth, AffineTermShiftsL0) {
  const Objective f = problems::power_norm(2, 4.0, 1.0);
  const Vector slope{3.0, 4.0};
  const Objective g("affine", 2, [slope](std::span<const double> x) { return gsmooth::dot(slope, x) + 1.0; },
                    [slope](std::span<const double>) { return slope; });
  const Objective h = problems::sum_with_smooth(f, g.with_hessian([](std::span<const double>) {
    return gsmooth::SymMatrix(2);
  }), 0.0, 5.0);
  EXPECT_EQ(*h.params(), SmoothnessParams(4.0 + 5.0 * 1.0, 1.0));
  EXPECT_LE(gsmooth::certify_smoothness(h, *h.params(), 5.0, 5000, 2).max_violation, 1e-8);
}

TEST(SumWithSmooth, ZeroTermKeepsParams) {
  const Objective f = problems::power_norm(2, 4.0, 1.0);
  const Objective zero("zero", 2, [](std::span<const double>) { return 0.0; },
                       [](std::span<const double>) { return Vector{0.0, 0.0}; });
  EXPECT_EQ(*problems::sum_with_smooth(f, zero, 0.0, 0.0).params(), *f.params());
}

TEST(SumWithSmooth, SoftmaxSmoothingPassesCertifier) {
  const Objective f = problems::power_norm(2, 4.0, 1.0);
  const problems::SoftMax g = problems::softmax({{1.0, 2.0}, {-1.0, 0.5}, {0.0, -3.0}}, {0.1, -0.2, 0.3}, 0.5);
  EXPECT_DOUBLE_EQ(g.lip_value, 3.0);
  EXPECT_DOUBLE_EQ(g.lip_grad, 9.0 / 0.5);
  const Objective h = problems::sum_with_smooth(f, g.objective, g.lip_grad, g.lip_value);
  EXPECT_LE(gsmooth::certify_smoothness(h, *h.params(), 5.0, 10000, 4).max_violation, 1e-8);
  expect_gradient_matches_fd(g.objective, 3.0, 21);
  expect_hessian_matches_fd(h, 3.0, 22);
}

TEST(SeparableSum, PowerNormParts) {
  const std::vector<Objective> parts(3, problems::power_norm(1, 4.0, 1.0));
  const Objective h = problems::separable_sum(parts);
  EXPECT_EQ(*h.params(), SmoothnessParams(4.0, 1.0));
  const Vector x{1.0, -2.0, 0.5};
  EXPECT_DOUBLE_EQ(h.value(x), (1.0 + 16.0 + 0.0625) / 4.0);
  EXPECT_EQ(*h.f_star(), 0.0);
  EXPECT_EQ(h.dim(), 3u);
}

TEST(SeparableSum, SinglePartIsIdentical) {
  const Objective f = problems::exp_phi(2, SmoothnessParams(1.0, 2.0));
  const Objective h = problems::separable_sum({f});
  std::mt19937_64 gen(8);
  for (int i = 0; i < 20; ++i) {
    const Vector x = random_point(gen, 2, 2.0);
    EXPECT_EQ(h.value(x), f.value(x));
    EXPECT_EQ(h.gradient(x), f.gradient(x));
  }
  EXPECT_EQ(*h.params(), *f.params());
}

TEST(SeparableSum, ParamsAreComponentwiseMax) {
  const Objective h = problems::separable_sum(
      {problems::exp_phi(1, SmoothnessParams(1.0, 2.0)), problems::exp_phi(1, SmoothnessParams(3.0, 1.0))});
  EXPECT_EQ(*h.params(), SmoothnessParams(3.0, 2.0));
  EXPECT_LE(gsmooth::certify_smoothness(h, *h.params(), 2.0, 5000, 9).max_violation, 1e-8);
}

TEST(Objectives, GradientsMatchFiniteDifferences) {
  std::uint64_t seed = 100;
  for (const Objective& f :
       {problems::power_norm(3, 4.0, 1.0), problems::power_norm(2, 6.0, 1.0), problems::power_norm(2, 8.0, 1.0),
        problems::logistic_1d(0.5), problems::affine_logistic({2.0, 1.0, -2.0}, 0.5, 1.0),
        problems::exp_phi(2, SmoothnessParams(1.0, 1.0)), problems::separable_pnorm(3, 4.0, 1.0),
        problems::quadratic(4), problems::diagonal_quadratic({1.0, 0.1, 0.01})}) {
    expect_gradient_matches_fd(f, 2.0, ++seed);
    expect_hessian_matches_fd(f, 2.0, ++seed);
  }
}

TEST(Objectives, ValuesAboveKnownMinimum) {
  std::mt19937_64 gen(31);
  for (const Objective& f : {problems::power_norm(3, 4.0, 1.0), problems::exp_phi(2, SmoothnessParams(2.0, 1.0)),
                             problems::separable_pnorm(3, 6.0, 1.0), problems::quadratic(2)}) {
    for (int i = 0; i < 200; ++i) EXPECT_GE(f.value(random_point(gen, f.dim(), 5.0)), *f.f_star());
    EXPECT_EQ(f.value(*f.x_star()), *f.f_star());
  }
}

TEST(Objectives, DimensionMismatchIsRejected) {
  const Objective f = problems::power_norm(2, 4.0, 1.0);
  EXPECT_THROW(f.value(Vector{1.0}), std::invalid_argument);
  EXPECT_THROW(f.gradient(Vector{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST(Objectives, MissingHessianIsUnsupported) {
  const Objective f("linear", 1, [](std::span<const double> x) { return x[0]; },
                    [](std::span<const double>) { return Vector{1.0}; });
  EXPECT_THROW(f.hessian(Vector{0.0}), gsmooth::Unsupported);
  EXPECT_THROW(gsmooth::certify_smoothness(f, SmoothnessParams(1.0, 0.0), 1.0, 10, 1), gsmooth::Unsupported);
}

TEST(Certifier, PowerNormRadiusTen) {
  const Objective f = problems::power_norm(3, 4.0, 1.0);
  const gsmooth::CertificateReport rep = gsmooth::certify_smoothness(f, SmoothnessParams(4.0, 1.0), 10.0, 10000, 1);
  EXPECT_LE(rep.max_violation, 1e-8);
  EXPECT_TRUE(rep.passes(1e-8));
  EXPECT_EQ(rep.n_samples, 10000);
  EXPECT_EQ(rep.region_radius, 10.0);
  EXPECT_FALSE(rep.violating_point.has_value());
}

TEST(Certifier, LoosenedConstantLeavesUnitSlack) {
  const Objective f = problems::power_norm(3, 4.0, 1.0);
  const auto rep = gsmooth::certify_smoothness(f, SmoothnessParams(5.0, 1.0), 10.0, 10000, 1);
  EXPECT_LE(rep.max_violation, -1.0 + 1e-8);
}

TEST(Certifier, UnderstatedConstantIsCaughtAtOrigin) {
  const Objective f = problems::logistic_1d(0.0);
  const auto rep = gsmooth::certify_smoothness(f, SmoothnessParams(0.2, 0.0), 5.0, 1000, 1);
  EXPECT_GE(rep.max_violation, 0.05 - 1e-8);
  ASSERT_TRUE(rep.violating_point.has_value());
  EXPECT_FALSE(rep.passes(1e-8));
}

TEST(SpectralNorm, KnownMatrices) {
  gsmooth::SymMatrix d = gsmooth::SymMatrix::identity(3, 2.0);
  d(1, 1) = -5.0;
  EXPECT_NEAR(gsmooth::spectral_norm(d), 5.0, 1e-9);
  gsmooth::SymMatrix a(2);
  a(0, 0) = 2.0;
  a(0, 1) = a(1, 0) = 1.0;
  a(1, 1) = 2.0;
  EXPECT_NEAR(gsmooth::spectral_norm(a), 3.0, 1e-9);
  EXPECT_EQ(gsmooth::spectral_norm(gsmooth::SymMatrix(4)), 0.0);
}

}  // namespace
