#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace cotest {

// Deterministic splitmix64 stream with named sub-stream derivation.
//
// Every random draw in the project flows from one root seed through
// derive() calls, so adding an algorithm or a fold never perturbs the
// draws of another. The generator is self-contained on purpose:
// std::gamma_distribution and friends are implementation-defined, which
// would break byte-identical reruns across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0,n). Modulo bias is negligible at the pool sizes used here.
  std::size_t next_below(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  double next_gauss() {
    // Marsaglia polar method; the second deviate is discarded to keep the
    // stream position independent of call history.
    for (;;) {
      double u = 2.0 * next_double() - 1.0;
      double v = 2.0 * next_double() - 1.0;
      double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  // Marsaglia-Tsang; shape > 0, unit scale.
  double next_gamma(double shape) {
    if (shape < 1.0) {
      double u = next_double();
      while (u <= 0.0) u = next_double();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = next_gauss();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      double v = t * t * t;
      double u = next_double();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Child stream named by a tag. Does not advance this stream.
  Rng derive(std::string_view tag) const {
    std::uint64_t h = 0xCBF29CE484222325ull ^ state_;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ull;
    }
    return Rng(mix(h));
  }

  Rng derive(std::uint64_t index) const { return Rng(mix(state_ ^ (index * 0x9E3779B97F4A7C15ull + 0x165667B19E3779F9ull))); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_below(i);
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace cotest
