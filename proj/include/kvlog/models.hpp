#ifndef KVLOG_MODELS_HPP
#define KVLOG_MODELS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kvlog/formula.hpp"

namespace kvlog {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using State = std::size_t;

/// Binary accessibility relation over states 0..n-1.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool has(State s, State t) const { return bits_[s * n_ + t] != 0; }
  void set(State s, State t, bool on = true) { bits_[s * n_ + t] = on ? 1 : 0; }
  std::vector<State> successors(State s) const;
  std::size_t edge_count() const;
  bool empty() const { return edge_count() == 0; }

  bool operator==(const Relation&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Ternary relation s R t u over states 0..n-1.
class TripleRelation {
 public:
  TripleRelation() = default;
  explicit TripleRelation(std::size_t n) : n_(n), bits_(n * n * n, 0) {}

  std::size_t size() const { return n_; }
  bool has(State s, State t, State u) const { return bits_[(s * n_ + t) * n_ + u] != 0; }
  void set(State s, State t, State u, bool on = true) {
    bits_[(s * n_ + t) * n_ + u] = on ? 1 : 0;
  }
  /// Sets (s,t,u) and (s,u,t).
  void set_sym(State s, State t, State u, bool on = true) {
    set(s, t, u, on);
    set(s, u, t, on);
  }
  std::size_t triple_count() const;
  bool empty() const { return triple_count() == 0; }
  /// All (s,t,u) in lexicographic order.
  std::vector<std::array<State, 3>> triples() const;

  bool operator==(const TripleRelation&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Kripke model with per-agent binary relations and per-(agent, constant)
/// ternary relations. Relations are indexed by vocabulary position.
struct TernaryModel {
  Vocabulary vocab;
  std::vector<std::string> states;
  std::vector<Relation> access;        // [agent]
  std::vector<TripleRelation> tern;    // [agent * |constants| + constant]
  std::vector<std::vector<bool>> val;  // [state][prop]

  TernaryModel() = default;
  TernaryModel(Vocabulary v, std::vector<std::string> state_names);

  std::size_t size() const { return states.size(); }
  State state(const std::string& name) const;

  Relation& rel(std::size_t agent) { return access[agent]; }
  const Relation& rel(std::size_t agent) const { return access[agent]; }
  TripleRelation& triples(std::size_t agent, std::size_t c) {
    return tern[agent * vocab.constants().size() + c];
  }
  const TripleRelation& triples(std::size_t agent, std::size_t c) const {
    return tern[agent * vocab.constants().size() + c];
  }
  const Relation& rel(const std::string& agent) const;
  const TripleRelation& triples(const std::string& agent, const std::string& c) const;
  bool holds(State s, const std::string& p) const;

  bool operator==(const TernaryModel&) const = default;
};

/// First-order Kripke model: constant domain and a value for every
/// (constant, state).
struct FOKripkeModel {
  Vocabulary vocab;
  std::vector<std::string> states;
  std::vector<std::string> domain;
  std::vector<Relation> access;                // [agent]
  std::vector<std::vector<bool>> val;          // [state][prop]
  std::vector<std::vector<std::size_t>> value;  // [constant][state] -> domain index

  FOKripkeModel() = default;
  FOKripkeModel(Vocabulary v, std::vector<std::string> state_names,
                std::vector<std::string> domain_atoms);

  std::size_t size() const { return states.size(); }
  State state(const std::string& name) const;
  const Relation& rel(const std::string& agent) const;
  bool holds(State s, const std::string& p) const;
  /// Throws ModelError unless every (constant, state) has a value in range.
  void check_assignment() const;

  bool operator==(const FOKripkeModel&) const = default;
};

enum class Condition { SYM, INCL, ATEUC };
const char* to_string(Condition c);

struct Violation {
  Condition condition;
  std::string agent;
  std::string constant;
  std::vector<State> witness;  // (s,t,u) or (s,t,u,v) for ATEUC

  bool operator==(const Violation&) const = default;
};

std::string describe(const Violation& v, const TernaryModel& m);

/// Checks the three frame conditions; empty iff the model is valid.
std::vector<Violation> validate_ternary(const TernaryModel& m);
inline bool is_valid(const TernaryModel& m) { return validate_ternary(m).empty(); }

/// s R_i^c t u iff s->t, s->u and the values of c at t and u differ.
TernaryModel derive_ternary(const FOKripkeModel& f);

/// Adds the mirror of every triple. Returns the number of triples added.
std::size_t close_sym(TernaryModel& m);
/// Adds triples until ATEUC holds, preferring the lexicographically least
/// fix. Requires SYM and INCL.
void repair_ateuc(TernaryModel& m);

struct GenParams {
  Vocabulary vocab;
  std::size_t num_states = 3;
  double edge_density = 0.5;
  std::size_t value_count = 2;
  std::uint64_t seed = 0;
  /// Probability of each INCL-compatible candidate triple in generate_direct.
  double triple_density = 0.3;

  void check() const;
};

std::pair<FOKripkeModel, TernaryModel> generate_value_induced(const GenParams& p);
TernaryModel generate_direct(const GenParams& p);
/// Random FO model only.
FOKripkeModel generate_fo(const GenParams& p);

}  // namespace kvlog

#endif  // KVLOG_MODELS_HPP
