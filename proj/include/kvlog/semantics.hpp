#ifndef KVLOG_SEMANTICS_HPP
#define KVLOG_SEMANTICS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "kvlog/formula.hpp"
#include "kvlog/models.hpp"

namespace kvlog {

/// A formula resolved against a vocabulary, evaluated bottom-up over all
/// states at once. Shared subterms are evaluated once.
class CompiledFormula {
 public:
  enum class Target { Ternary, FO };

  CompiledFormula(const Formula& f, const Vocabulary& vocab, Target target);

  /// Truth value at every state.
  std::vector<bool> extension(const TernaryModel& m) const;
  std::vector<bool> extension(const FOKripkeModel& m) const;

 private:
  struct Node {
    Op op;
    int prop = -1;
    int agent = -1;
    int constant = -1;
    int lhs = -1;
    int rhs = -1;
  };
  int add(const Formula& f, const Vocabulary& vocab, std::unordered_map<const void*, int>& memo);
  template <typename Model, typename ModalFn>
  std::vector<bool> run(const Model& m, ModalFn&& modal) const;

  std::vector<Node> nodes_;
  Target target_;
};

bool eval_fo(const FOKripkeModel& m, State s, const Formula& f);
bool eval_ternary(const TernaryModel& m, State s, const Formula& f);
bool valid_on(const TernaryModel& m, const Formula& f);

struct Countermodel {
  TernaryModel model;
  State state = 0;
  /// Position of the model in the enumeration order.
  std::uint64_t rank = 0;
};

class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchOptions {
  std::uint64_t budget = 50'000'000;
  unsigned workers = 1;
};

/// Number of models the search enumerates at exactly n states.
std::uint64_t countermodel_space(const Formula& f, std::size_t n);

/// Enumerates valid ternary models of 1..max_states states over the symbols
/// of f (state count, then valuation, then edges, then triples) and returns
/// the first pointed model falsifying f. Throws BoundExceeded when the
/// budget runs out before the space is exhausted.
std::optional<Countermodel> find_countermodel(const Formula& f, std::size_t max_states,
                                              const Vocabulary& vocab,
                                              SearchOptions opts = {});

}  // namespace kvlog

#endif  // KVLOG_SEMANTICS_HPP
