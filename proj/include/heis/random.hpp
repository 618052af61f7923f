#pragma once

// Reproducible randomness. Every randomized check derives its trial streams
// from one 64-bit seed through SplitMix64, so a trial set is bit-identical
// across platforms, standard libraries and thread partitions.

#include <cmath>
#include <cstdint>
#include <limits>

#include "heis/linalg.hpp"

namespace heis {

/// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9E3779B97F4A7C15, then a
/// two-round xor-shift-multiply finalizer.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  /// Independent stream for trial `index` of a run seeded with `seed`.
  static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (index * 0xD1B54A32D192ED03ULL));
    return SplitMix64(mixer() ^ index);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// exp(uniform(log lo, log hi))
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n; }
  /// Standard normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t state_;
};

// Random matrices shared by the property suites.
Point random_point(SplitMix64& rng, double lo, double hi);
Vec3 random_unit_vector(SplitMix64& rng);
Sym2 random_sym2(SplitMix64& rng, double scale);
Sym3 random_sym3(SplitMix64& rng, double scale);
/// Rotation by `angle` in the plane.
Sym2 rotated_diag2(double angle, double a, double b);
/// Uniformly distributed rotation (unit quaternion).
Mat3 random_rotation3(SplitMix64& rng);
/// Q^T diag(d) Q for a random rotation Q.
Sym3 rotated_diag3(const Mat3& q, const Vec3& d);
/// Q^T D Q with eigenvalues drawn log-uniform in [lo, hi].
Sym2 random_psd2(SplitMix64& rng, double lo, double hi);
Sym3 random_psd3(SplitMix64& rng, double lo, double hi);

}  // namespace heis
