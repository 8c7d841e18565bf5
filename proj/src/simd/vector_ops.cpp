#include "gsmooth/simd/vector_ops.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace gsmooth::simd {

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  if (name == "neon") return Backend::Neon;
  if (name == "auto") return detect_best_backend();
  throw std::invalid_argument("unknown SIMD backend '" + std::string(name) + "'");
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar: return true;
    case Backend::Avx2:
#if defined(GSMOOTH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(GSMOOTH_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect_best_backend() {
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

const KernelTable& kernel_table(Backend b) {
  switch (b) {
    case Backend::Scalar: return detail::scalar_table();
    case Backend::Avx2:
#if defined(GSMOOTH_HAVE_AVX2)
      return detail::avx2_table();
#else
      break;
#endif
    case Backend::Neon:
#if defined(GSMOOTH_HAVE_NEON)
      return detail::neon_table();
#else
      break;
#endif
  }
  throw std::invalid_argument("SIMD backend '" + std::string(backend_name(b)) + "' not compiled in");
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("GSMOOTH_SIMD")) {
    Backend b = parse_backend(env);
    if (backend_available(b)) return b;
  }
  return detect_best_backend();
}

struct ActiveState {
  std::atomic<Backend> backend;
  std::atomic<const KernelTable*> table;
  ActiveState() : backend(initial_backend()), table(&kernel_table(backend.load())) {}
};

ActiveState& state() {
  static ActiveState s;
  return s;
}

}  // namespace

Backend active_backend() { return state().backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("SIMD backend '" + std::string(backend_name(b)) +
                                "' is not available on this CPU");
  }
  state().table.store(&kernel_table(b), std::memory_order_relaxed);
  state().backend.store(b, std::memory_order_relaxed);
}

namespace detail {
const KernelTable& active_table() { return *state().table.load(std::memory_order_relaxed); }
}  // namespace detail

}  // namespace gsmooth::simd

namespace gsmooth {

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

Vector combine(std::span<const double> a, double alpha, std::span<const double> b) {
  Vector out(a.size());
  add_scaled(a, alpha, b, out);
  return out;
}

Vector difference(std::span<const double> a, std::span<const double> b) {
  Vector out(a.size());
  simd::detail::active_table().subtract(a.data(), b.data(), out.data(), a.size());
  return out;
}

double distance(std::span<const double> a, std::span<const double> b) { return norm(difference(a, b)); }

}  // namespace gsmooth
