#include "gsmooth/random.hpp"

#include <cmath>
#include <numbers>

namespace gsmooth {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open_left();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Vector Rng::unit_direction(std::size_t dim) {
  Vector d(dim);
  double n2 = 0.0;
  do {
    for (auto& c : d) c = normal();
    n2 = squared_norm(d);
  } while (n2 == 0.0);
  scale(1.0 / std::sqrt(n2), d);
  return d;
}

Vector Rng::uniform_in_ball(std::size_t dim, double radius) {
  Vector d = unit_direction(dim);
  const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(dim));
  scale(r, d);
  return d;
}

}  // namespace gsmooth
