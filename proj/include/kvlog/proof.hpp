#ifndef KVLOG_PROOF_HPP
#define KVLOG_PROOF_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kvlog/formula.hpp"
#include "kvlog/models.hpp"
#include "kvlog/syntax.hpp"

namespace kvlog {

class ProofError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Rule { Taut, Axiom, MP, NECK, NECKvR, NECKvB, SUB, RE };

const char* to_string(Rule r);

/// Axiom schema over agent i, constant c and metavariables p, q, r.
struct Schema {
  std::string name;
  Formula formula;
  std::vector<std::string> metavars;
};

struct ProofSystem {
  std::string name;
  Language language = Language::MLKvB;
  std::vector<Schema> schemas;
  std::set<Rule> rules;

  const Schema* schema(const std::string& name) const;
  bool has_rule(Rule r) const { return rules.count(r) != 0; }
  void add_schema(const std::string& name, std::string_view text);
};

/// SMLKVr, SMLKVb, SMLKV, or SMLKVr-bot (SMLKVr with the axiom [i]^c ~F in
/// place of the rule NECKvR).
ProofSystem proof_system(const std::string& name);
std::vector<std::string> proof_system_names();

Formula axiom_instance(const ProofSystem& sys, const std::string& schema,
                       const Substitution& sigma, const std::string& agent,
                       const std::string& constant);

/// Truth-table check of the propositional skeleton, with modal subformulas
/// as atoms. Empty if the skeleton has more than max_atoms atoms.
std::optional<bool> is_tautology(const Formula& f, std::size_t max_atoms = 12);
/// Distinct atoms of the skeleton.
std::vector<Formula> skeleton_atoms(const Formula& f);

struct Step {
  long label = 0;
  Formula formula;
  Rule rule = Rule::Taut;
  std::string schema;
  std::vector<long> refs;
  std::string agent;
  std::string constant;
  Substitution sigma;
  std::optional<Formula> side;    // NECKvB
  std::optional<Formula> target;  // RE
  std::set<Path> positions;       // RE, explicit paths
  std::vector<std::size_t> ordinals;  // RE, 1-based preorder occurrence numbers
  bool all_positions = false;
  std::size_t line = 0;
};

struct Derivation {
  std::vector<Step> steps;
};

/// Parses "n. FORMULA BY RULE(args)" lines; '#' starts a comment.
/// Throws ProofError on malformed lines.
Derivation parse_script(std::string_view text);
Derivation load_script(const std::string& path);
std::string render_script(const Derivation& d);

struct CheckResult {
  bool accepted = true;
  long step = 0;  // label of the first failing step
  std::string reason;
};

CheckResult check_derivation(const ProofSystem& sys, const Derivation& d);

struct FuzzParams {
  std::size_t max_states = 5;
  double edge_density = 0.5;
  double triple_density = 0.3;
  std::uint64_t seed = 0;
  /// Random instances per schema per trial.
  std::size_t instances = 3;
  /// Trials are seeded independently; the report does not depend on this.
  unsigned workers = 1;
};

struct FuzzReport {
  std::size_t trials = 0;
  std::size_t instances_checked = 0;
  std::size_t rule_checks = 0;
  std::vector<std::string> findings;
};

/// Samples valid ternary models and checks every schema instance and rule
/// application against them.
FuzzReport soundness_fuzz(const ProofSystem& sys, const FuzzParams& params,
                          std::size_t trials);

struct NeckvPair {
  /// [a]^c ~F from NECKvR, in SMLKVr.
  Derivation kvbot_from_neckv;
  /// [a]^c phi from [a]^c ~F, DISTKvR and NECK, in SMLKVr-bot.
  Derivation neckv_from_kvbot;
};

/// The two directions for agent a, constant c and phi = (p | ~p).
NeckvPair derive_equivalent_neckv();

}  // namespace kvlog

#endif  // KVLOG_PROOF_HPP
