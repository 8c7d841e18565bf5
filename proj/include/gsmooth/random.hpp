#pragma once

#include <cstdint>
#include <random>

#include "gsmooth/simd/vector_ops.hpp"

namespace gsmooth {

// Seeded generator whose streams are identical on every platform: the engine
// is std::mt19937_64 (fully specified) and all transformations are done here
// rather than through the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

  Vector unit_direction(std::size_t dim);
  Vector uniform_in_ball(std::size_t dim, double radius);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gsmooth
