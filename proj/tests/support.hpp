#ifndef KVLOG_TESTS_SUPPORT_HPP
#define KVLOG_TESTS_SUPPORT_HPP

#include <string>

#include "kvlog/formula.hpp"
#include "kvlog/models.hpp"
#include "kvlog/random.hpp"

namespace support {

inline kvlog::Vocabulary vocab_1a2p1c() { return {{"a"}, {"p", "q"}, {"c"}}; }
inline kvlog::Vocabulary vocab_2a3p2c() { return {{"a", "b"}, {"p", "q", "r"}, {"c", "d"}}; }

inline std::string source_path(const std::string& rel) {
  return std::string(KVLOG_SOURCE_DIR) + "/" + rel;
}

inline kvlog::GenParams params(const kvlog::Vocabulary& v, std::size_t n, std::uint64_t seed,
                               double density = 0.5) {
  kvlog::GenParams p{v};
  p.num_states = n;
  p.edge_density = density;
  p.seed = seed;
  p.value_count = 3;
  return p;
}

/// Alternates between the two generators.
inline kvlog::TernaryModel random_valid(const kvlog::Vocabulary& v, std::size_t n,
                                        std::uint64_t seed) {
  kvlog::GenParams p = params(v, n, seed);
  if (seed % 2 == 0) return kvlog::generate_direct(p);
  return kvlog::generate_value_induced(p).second;
}

}  // namespace support

#endif
