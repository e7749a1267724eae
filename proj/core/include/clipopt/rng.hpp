#ifndef CLIPOPT_RNG_HPP
#define CLIPOPT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace clipopt {

// Deterministic, splittable random stream.
//
// A stream is identified by a 64-bit key. split(tag) derives a child key from
// the parent key and the tag only, never from the draw position, so the
// family of streams reachable from a root seed is fixed before any draws
// happen. Sweeps exploit this: cell i always uses root.split(cell_tag(i)),
// which makes serial and multi-threaded execution byte-identical.
//
// Draw order within a stream is part of the contract; every consumer
// documents how many draws it makes.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(seed), engine_(splitmix64(seed)) {}

  // Child stream; depends only on (key, tag).
  RngStream split(std::uint64_t tag) const {
    return RngStream(splitmix64(key_ ^ (0x9e3779b97f4a7c15ULL + splitmix64(tag))));
  }

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; used where log or a negative power is taken.
  double uniform_open0() { return 1.0 - uniform01(); }

  // Uniform on {0, 1, ..., n-1} without modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms. Avoids
  // std::normal_distribution so draws are identical across standard
  // libraries.
  double normal() {
    const double u1 = uniform_open0();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double rademacher() { return (next_u64() & 1u) ? 1.0 : -1.0; }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace clipopt

#endif  // CLIPOPT_RNG_HPP
