#ifndef CLUSTERABILITY_RANDOM_HPP
#define CLUSTERABILITY_RANDOM_HPP

#include <cstdint>
#include <random>

#include "clusterability/core.hpp"

namespace clusterability {

/// Seed of the `index`-th child stream of `seed`.
///
/// For a fixed parent seed the map index -> child is a bijection, so distinct
/// indices never collide. The result depends only on (seed, index), which is
/// what makes bootstrap replicates independent of the worker schedule.
RandomSeed derive_substream(RandomSeed seed, std::uint64_t index) noexcept;

/// Single-consumer random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Distribution transforms are implemented here rather than taken
/// from <random>, whose distributions are implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(RandomSeed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Standard exponential (ziggurat).
  double exponential();

  /// Standard normal (ziggurat).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace clusterability

#endif  // CLUSTERABILITY_RANDOM_HPP
