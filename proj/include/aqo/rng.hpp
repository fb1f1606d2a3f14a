#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aqo {

/// Mixes a base seed with a stream of indices into a new 64-bit seed
/// (splitmix64 finalizer). Used to give every (instance, perturbation, ...)
/// tuple its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Deterministic uniform sampler. The mapping from engine output to doubles
/// is fixed here rather than delegated to std::uniform_real_distribution,
/// whose algorithm differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform01(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aqo
