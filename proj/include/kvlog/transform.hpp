#ifndef KVLOG_TRANSFORM_HPP
#define KVLOG_TRANSFORM_HPP

#include <cstddef>
#include <vector>

#include "kvlog/models.hpp"

namespace kvlog {

/// Two tagged copies of every state. Copy (u, x) has index 2u + x and is
/// named "u.x". Triples never relate a copy to itself.
TernaryModel split(const TernaryModel& m);

/// Parent links of a tree-shaped model. State 0 is the root.
struct TreeShape {
  std::vector<State> parent;        // parent[0] is unused
  std::vector<std::size_t> agent;   // agent of the edge into each state
  std::vector<std::size_t> depth;
};

/// Checks that the union of the binary relations is a tree rooted at state 0
/// in which every other state has exactly one incoming edge. Throws
/// ModelError otherwise.
TreeShape tree_shape(const TernaryModel& m);

/// The tree of paths from root of length at most depth. Children of a path
/// are ordered by agent, then by state.
TernaryModel unravel(const TernaryModel& m, State root, std::size_t depth);

/// Value assignment on a tree-shaped model: siblings reached through the
/// same agent share a value for c unless the parent relates them by the
/// ternary relation for c. Throws ModelError if the resulting equivalence
/// is not transitive or does not reproduce the ternary relation.
FOKripkeModel assign_values(const TernaryModel& tree);

struct FOConversion {
  FOKripkeModel model;
  State root = 0;
};

/// assign_values(unravel(split(m), (s, 0), depth)).
FOConversion to_fo(const TernaryModel& m, State s, std::size_t depth);

}  // namespace kvlog

#endif  // KVLOG_TRANSFORM_HPP
