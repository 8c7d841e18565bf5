#include <arm_neon.h>

#include "gsmooth/simd/vector_ops.hpp"

namespace gsmooth::simd::detail {
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  double s = 0.0;
  if (n >= 4) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    for (; i + 4 <= n; i += 4) {
      acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
      acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    s = vaddvq_f64(vaddq_f64(acc0, acc1));
  }
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double squared_norm_neon(const double* a, std::size_t n) { return dot_neon(a, a, n); }

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled_neon(const double* a, double alpha, const double* b, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vfmaq_f64(vld1q_f64(a + i), va, vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] + alpha * b[i];
}

void subtract_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void scale_neon(double alpha, double* x, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{dot_neon,        squared_norm_neon, axpy_neon,
                                 add_scaled_neon, subtract_neon,     scale_neon};
  return table;
}

}  // namespace gsmooth::simd::detail
