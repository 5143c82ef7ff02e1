#ifndef KVLOG_BISIM_HPP
#define KVLOG_BISIM_HPP

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kvlog/formula.hpp"
#include "kvlog/models.hpp"

namespace kvlog {

/// A set of (left state, right state) pairs.
struct BisimRelation {
  std::set<std::pair<State, State>> pairs;

  bool contains(State s1, State s2) const { return pairs.count({s1, s2}) != 0; }
  bool operator==(const BisimRelation&) const = default;
};

struct ClauseFailure {
  std::string clause;  // Inv, Zig, Zag, Kvb-Zig, Kvb-Zag, Kvr-Zig, Kvr-Zag
  State left = 0;
  State right = 0;
  std::string agent;
  std::string constant;
  std::string prop;
  /// Unmatched successor (Zig/Zag) or unmatched pair (Kv clauses), on the
  /// side the clause quantifies over.
  std::vector<State> witness;
};

std::string describe(const ClauseFailure& f, const std::vector<std::string>& left_states,
                     const std::vector<std::string>& right_states);

std::vector<ClauseFailure> check_bisimulation(const TernaryModel& m1, const TernaryModel& m2,
                                              const BisimRelation& z);
std::vector<ClauseFailure> check_fo_bisimulation(const FOKripkeModel& f1,
                                                 const FOKripkeModel& f2,
                                                 const BisimRelation& z);

/// Partition-style refinement: starts from the pairs agreeing on every
/// proposition and deletes, round by round, pairs failing a clause against
/// the previous round. Remembers why each pair went so that a
/// distinguishing formula can be rebuilt.
class BisimAnalysis {
 public:
  BisimAnalysis(const TernaryModel& m1, const TernaryModel& m2);

  const BisimRelation& greatest() const { return greatest_; }
  bool bisimilar(State s1, State s2) const { return greatest_.contains(s1, s2); }
  std::size_t rounds() const { return rounds_; }

  /// A formula true at (m1, s1) and false at (m2, s2), checked by
  /// evaluation. Empty when the pair is bisimilar.
  std::optional<Formula> distinguish(State s1, State s2);

 private:
  struct Removal {
    std::size_t round = 0;
    ClauseFailure why;
  };
  std::optional<ClauseFailure> first_failure(State s1, State s2,
                                             const std::vector<char>& z) const;
  Formula delta(State s1, State s2);
  bool in_before(State s1, State s2, std::size_t round) const;

  const TernaryModel& m1_;
  const TernaryModel& m2_;
  std::vector<std::optional<Removal>> removed_;  // [s1 * |S2| + s2]
  std::vector<std::optional<Formula>> memo_;
  BisimRelation greatest_;
  std::size_t rounds_ = 0;
};

BisimRelation greatest_bisim(const TernaryModel& m1, const TernaryModel& m2);
std::optional<Formula> distinguishing_formula(const TernaryModel& m1, State s1,
                                              const TernaryModel& m2, State s2);

}  // namespace kvlog

#endif  // KVLOG_BISIM_HPP
