#ifndef KVLOG_FORMULA_HPP
#define KVLOG_FORMULA_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kvlog {

/// Error raised for malformed formulas, unknown symbols and precondition
/// breaches on formula-level operations.
class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite working vocabulary: agents, propositions and constants.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> agents, std::vector<std::string> props,
             std::vector<std::string> constants);

  const std::vector<std::string>& agents() const { return agents_; }
  const std::vector<std::string>& props() const { return props_; }
  const std::vector<std::string>& constants() const { return constants_; }

  // Index lookups; -1 if absent.
  int agent_index(const std::string& name) const;
  int prop_index(const std::string& name) const;
  int constant_index(const std::string& name) const;

  bool has_agent(const std::string& n) const { return agent_index(n) >= 0; }
  bool has_prop(const std::string& n) const { return prop_index(n) >= 0; }
  bool has_constant(const std::string& n) const { return constant_index(n) >= 0; }

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<std::string> agents_;
  std::vector<std::string> props_;
  std::vector<std::string> constants_;
};

bool is_identifier(const std::string& s);

enum class Op : std::uint8_t {
  Top,
  Prop,
  Neg,
  And,
  Box,     // K_i / box_i
  KvCond,  // Kv_i(phi, c)
  BoxU,    // unary [i]^c phi
  BoxB,    // binary [i]^c(phi, psi)
};

enum class Language : std::uint8_t { ELKvR, MLKvR, MLKvB, MLKv };

const char* to_string(Language l);

/// Immutable formula value. Copies share structure.
class Formula {
 public:
  /// Defaults to T.
  Formula();

  Op op() const { return node_->op; }
  /// Proposition name (Prop only).
  const std::string& name() const { return node_->sym; }
  const std::string& agent() const { return node_->agent; }
  const std::string& constant() const { return node_->constant; }
  std::size_t arity() const;
  const Formula& child(std::size_t k) const;
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  bool is(Op o) const { return op() == o; }
  bool is_modal() const;

  /// Node identity, usable as a memo key for shared subterms.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  /// Total structural order.
  friend int compare(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

  static Formula make(Op op, std::string sym, std::string agent,
                      std::string constant, std::vector<Formula> kids);

 private:
  struct Node {
    Op op;
    std::string sym;
    std::string agent;
    std::string constant;
    std::vector<Formula> kids;
    std::size_t size;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend std::size_t size(const Formula& f);
};

/// Number of AST nodes.
std::size_t size(const Formula& f);

// Primitive constructors.
Formula top();
Formula prop(const std::string& p);
Formula neg(const Formula& f);
Formula conj(const Formula& a, const Formula& b);
Formula box(const std::string& agent, const Formula& f);
Formula kv(const std::string& agent, const Formula& f, const std::string& c);
Formula kbox(const std::string& agent, const std::string& c, const Formula& f);
Formula kbox(const std::string& agent, const std::string& c, const Formula& f,
             const Formula& g);

// Derived connectives; each expands to primitives.
Formula bottom();                                   // ~T
Formula disj(const Formula& a, const Formula& b);   // ~(~a & ~b)
Formula implies(const Formula& a, const Formula& b);  // ~(a & ~b)
Formula iff(const Formula& a, const Formula& b);    // (a -> b) & (b -> a)
Formula dia(const std::string& agent, const Formula& f);  // ~[i]~f
Formula kdia(const std::string& agent, const std::string& c, const Formula& f);
Formula kdia(const std::string& agent, const std::string& c, const Formula& f,
             const Formula& g);

Formula conj_all(const std::vector<Formula>& fs);  // T when empty
Formula disj_all(const std::vector<Formula>& fs);  // F when empty

/// Strips a leading double negation, once.
Formula strip_double_neg(const Formula& f);
/// Removes every ~~ pair, anywhere in the tree.
Formula normalize_double_neg(const Formula& f);

struct Symbols {
  std::set<std::string> agents;
  std::set<std::string> props;
  std::set<std::string> constants;
};

Symbols symbols_of(const Formula& f);
/// Throws FormulaError naming the first symbol missing from vocab.
void check_vocabulary(const Formula& f, const Vocabulary& vocab);

}  // namespace kvlog

#endif  // KVLOG_FORMULA_HPP
