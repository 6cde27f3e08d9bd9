#pragma once

#include "hdbwdm/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hdbwdm {

/// Seeded random source with a fixed, platform-independent variate scheme.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Distributions are implemented here rather than through
/// <random> distributions, whose algorithms are implementation-defined:
///  - uniform():  top 53 bits of one engine draw, scaled to [0, 1).
///  - normal():   Marsaglia polar method; the second variate of each accepted
///                pair is cached and returned by the next call.
///  - below(n):   one draw reduced modulo n, with rejection of the biased low range.
/// One seed therefore gives one stream of values on every platform.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based seed derivation: folds each component through mix64, so a
/// derived seed depends only on (master, components) and never on how many
/// other seeds were derived before it.
Seed derive_seed(Seed master, std::initializer_list<std::uint64_t> components);

}  // namespace hdbwdm
