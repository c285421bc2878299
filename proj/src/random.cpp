#include "bobylev/random.hpp"

#include <cmath>

namespace bobylev {

std::array<double, 3> Rng::in_ball(double radius) {
  // Rejection from the cube: deterministic given the stream position.
  for (;;) {
    const double x = uniform(-1.0, 1.0);
    const double y = uniform(-1.0, 1.0);
    const double z = uniform(-1.0, 1.0);
    if (x * x + y * y + z * z <= 1.0)
      return {radius * x, radius * y, radius * z};
  }
}

}  // namespace bobylev
