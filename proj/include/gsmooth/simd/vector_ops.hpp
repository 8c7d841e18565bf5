#pragma once

// Dense BLAS-1 style kernels used by every objective and optimizer loop.
//
// Each operation has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant. The variant is
// picked once at startup from the CPU capabilities and can be forced through
// set_backend(); all variants agree with the scalar reference up to the
// rounding differences caused by reassociated sums and fused multiply-adds.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace gsmooth::simd {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);

// Parses "scalar", "avx2", "neon" or "auto"; throws std::invalid_argument otherwise.
Backend parse_backend(std::string_view name);

bool backend_available(Backend b);
Backend detect_best_backend();

Backend active_backend();
// Throws std::invalid_argument if the backend is not available on this CPU.
void set_backend(Backend b);

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_norm)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = a + alpha * b  (out may alias a or b)
  void (*add_scaled)(const double* a, double alpha, const double* b, double* out, std::size_t n);
  // out = a - b
  void (*subtract)(const double* a, const double* b, double* out, std::size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
};

// Tables for each compiled variant; kernel_table(b) throws if b was not compiled in.
const KernelTable& kernel_table(Backend b);

namespace detail {
const KernelTable& scalar_table();
#if defined(GSMOOTH_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(GSMOOTH_HAVE_NEON)
const KernelTable& neon_table();
#endif
const KernelTable& active_table();
}  // namespace detail

}  // namespace gsmooth::simd

namespace gsmooth {

using Vector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return simd::detail::active_table().dot(a.data(), b.data(), a.size());
}

inline double squared_norm(std::span<const double> a) {
  return simd::detail::active_table().squared_norm(a.data(), a.size());
}

double norm(std::span<const double> a);

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  simd::detail::active_table().axpy(alpha, x.data(), y.data(), x.size());
}

inline void add_scaled(std::span<const double> a, double alpha, std::span<const double> b,
                       std::span<double> out) {
  simd::detail::active_table().add_scaled(a.data(), alpha, b.data(), out.data(), a.size());
}

inline void scale(double alpha, std::span<double> x) {
  simd::detail::active_table().scale(alpha, x.data(), x.size());
}

// a + alpha * b as a new vector.
Vector combine(std::span<const double> a, double alpha, std::span<const double> b);
Vector difference(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

}  // namespace gsmooth
