#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace at3d {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seedable generator with implementation-independent distributions
/// (std::*_distribution output differs between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Independent stream keyed by a seed and any number of labels, e.g.
  /// (seed, frame, tag_id). Reordering or adding other streams never
  /// changes this one.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  ///< [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();   ///< standard normal, Box-Muller
  int poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace at3d
