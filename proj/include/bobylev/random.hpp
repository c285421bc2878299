#pragma once

#include <array>
#include <cstdint>
#include <random>

namespace bobylev {

/**
 * Deterministic uniform sampler.  std::uniform_real_distribution is
 * implementation-defined, so artifacts hashed across runs draw through this
 * fixed mapping instead (53-bit mantissa of mt19937_64 output).
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int n) {  // 0..n-1
    return static_cast<int>(uniform() * n) % n;
  }
  std::array<double, 3> in_ball(double radius);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bobylev
