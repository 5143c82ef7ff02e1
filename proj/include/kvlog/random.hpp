#ifndef KVLOG_RANDOM_HPP
#define KVLOG_RANDOM_HPP

#include <cstdint>
#include <random>

namespace kvlog {

/// Seeded generator. Draws are computed from raw engine output so that
/// sequences do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n).
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool coin(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Seed of an independent stream, so that work split across threads draws
/// the same numbers as a sequential run.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace kvlog

#endif  // KVLOG_RANDOM_HPP
