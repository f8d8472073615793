#pragma once

#include <cstdint>

#include "minipic/vec3.hpp"

namespace pic {

// Counter-based splitmix64 generator. Each (seed, stream) pair is an
// independent deterministic sequence; species use their id as the stream, so
// initialization does not depend on worker count or evaluation order.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(mix(seed) ^ mix(0x9E3779B97F4A7C15ull + stream)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform in [0,1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller. Draws two uniforms per pair; the second
  // value is cached, so consumption stays deterministic.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0,1], keeps log() finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Maxwellian sample: per-axis thermal spread uth plus drift u0.
  Vec3 maxwellian(Vec3 uth, Vec3 u0) {
    double a = normal(), b = normal(), c = normal();
    return {u0.x + uth.x * a, u0.y + uth.y * b, u0.z + uth.z * c};
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace pic
