#include "kvlog/proof.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

#include "kvlog/gen.hpp"
#include "kvlog/random.hpp"
#include "kvlog/semantics.hpp"

namespace kvlog {

const char* to_string(Rule r) {
  switch (r) {
    case Rule::Taut: return "TAUT";
    case Rule::Axiom: return "AX";
    case Rule::MP: return "MP";
    case Rule::NECK: return "NECK";
    case Rule::NECKvR: return "NECKvR";
    case Rule::NECKvB: return "NECKvB";
    case Rule::SUB: return "SUB";
    case Rule::RE: return "RE";
  }
  return "?";
}

const Schema* ProofSystem::schema(const std::string& n) const {
  for (const auto& s : schemas)
    if (s.name == n) return &s;
  return nullptr;
}

void ProofSystem::add_schema(const std::string& n, std::string_view text) {
  Formula f = parse_free(text);
  Symbols syms = symbols_of(f);
  schemas.push_back({n, f, {syms.props.begin(), syms.props.end()}});
}

std::vector<std::string> proof_system_names() {
  return {"SMLKVr", "SMLKVb", "SMLKV", "SMLKVr-bot"};
}

ProofSystem proof_system(const std::string& name) {
  ProofSystem sys;
  sys.name = name;
  const char* distk = "[i](p -> q) -> ([i]p -> [i]q)";
  if (name == "SMLKVr" || name == "SMLKVr-bot") {
    sys.language = Language::MLKvR;
    sys.add_schema("DISTK", distk);
    sys.add_schema("DISTKvR", "[i](p -> q) -> ([i]^c p -> [i]^c q)");
    sys.add_schema("KvRor", "(<i>(p & q) & <i>^c (p | q)) -> (<i>^c p | <i>^c q)");
    sys.rules = {Rule::MP, Rule::NECK, Rule::SUB, Rule::RE};
    if (name == "SMLKVr")
      sys.rules.insert(Rule::NECKvR);
    else
      sys.add_schema("KvRbot", "[i]^c ~F");
  } else if (name == "SMLKVb") {
    sys.language = Language::MLKvB;
    sys.add_schema("DISTK", distk);
    sys.add_schema("DISTKvB", "[i]^c((p -> q), r) -> ([i]^c(p, r) -> [i]^c(q, r))");
    sys.add_schema("SYM", "[i]^c(p, q) -> [i]^c(q, p)");
    sys.add_schema("INCL", "<i>^c(p, q) -> <i>p");
    sys.add_schema("ATEUC", "(<i>^c(p, q) & <i>r) -> (<i>^c(p, r) | <i>^c(q, r))");
    sys.rules = {Rule::MP, Rule::NECK, Rule::NECKvB, Rule::SUB, Rule::RE};
  } else if (name == "SMLKV") {
    sys.language = Language::MLKv;
    sys.add_schema("DISTK", distk);
    sys.add_schema("INCLT", "<i>^c T -> <i>T");
    sys.rules = {Rule::MP, Rule::NECK, Rule::SUB, Rule::RE};
  } else {
    throw ProofError("unknown proof system '" + name + "'");
  }
  return sys;
}

Formula axiom_instance(const ProofSystem& sys, const std::string& name,
                       const Substitution& sigma, const std::string& agent,
                       const std::string& constant) {
  const Schema* s = sys.schema(name);
  if (!s) throw ProofError("schema " + name + " is not in " + sys.name);
  for (const auto& [k, v] : sigma)
    if (std::find(s->metavars.begin(), s->metavars.end(), k) == s->metavars.end())
      throw ProofError("schema " + name + " has no metavariable " + k);
  for (const auto& m : s->metavars)
    if (!sigma.count(m)) throw ProofError("substitution for " + name + " misses " + m);
  if (agent.empty() || constant.empty())
    throw ProofError("schema " + name + " needs i= and c=");
  Formula f = rename_symbols(s->formula, {{"i", agent}}, {{"c", constant}});
  return substitute(f, sigma);
}

namespace {

void collect_atoms(const Formula& f, std::map<Formula, std::size_t>& atoms) {
  switch (f.op()) {
    case Op::Top: return;
    case Op::Neg: collect_atoms(f.child(0), atoms); return;
    case Op::And:
      collect_atoms(f.child(0), atoms);
      collect_atoms(f.child(1), atoms);
      return;
    default: atoms.emplace(f, atoms.size()); return;
  }
}

bool eval_skeleton(const Formula& f, const std::map<Formula, std::size_t>& atoms,
                   std::uint32_t row) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Neg: return !eval_skeleton(f.child(0), atoms, row);
    case Op::And:
      return eval_skeleton(f.child(0), atoms, row) && eval_skeleton(f.child(1), atoms, row);
    default: return (row >> atoms.at(f)) & 1;
  }
}

}  // namespace

std::vector<Formula> skeleton_atoms(const Formula& f) {
  std::map<Formula, std::size_t> atoms;
  collect_atoms(f, atoms);
  std::vector<Formula> out(atoms.size());
  for (const auto& [g, k] : atoms) out[k] = g;
  return out;
}

std::optional<bool> is_tautology(const Formula& f, std::size_t max_atoms) {
  std::map<Formula, std::size_t> atoms;
  collect_atoms(f, atoms);
  if (atoms.size() > max_atoms) return std::nullopt;
  for (std::uint32_t row = 0; row < (std::uint32_t{1} << atoms.size()); ++row)
    if (!eval_skeleton(f, atoms, row)) return false;
  return true;
}

// Scripts ---------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k)
    if (k == s.size() || s[k] == sep) {
      out.push_back(trim(s.substr(start, k - start)));
      start = k + 1;
    }
  return out;
}

long parse_label(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size() || v <= 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ProofError("line " + std::to_string(line) + ": bad step reference '" + s + "'");
  }
}

Formula parse_arg_formula(const std::string& s, std::size_t line) {
  try {
    return parse_free(s);
  } catch (const std::exception& e) {
    throw ProofError("line " + std::to_string(line) + ": " + e.what());
  }
}

Rule rule_from(const std::string& s, std::size_t line) {
  for (Rule r : {Rule::Taut, Rule::Axiom, Rule::MP, Rule::NECK, Rule::NECKvR, Rule::NECKvB,
                 Rule::SUB, Rule::RE})
    if (s == to_string(r)) return r;
  throw ProofError("line " + std::to_string(line) + ": unknown rule '" + s + "'");
}

void parse_positions(Step& st, const std::string& v) {
  if (v == "all") {
    st.all_positions = true;
    return;
  }
  if (v == "none") return;
  for (const auto& part : split(v, ',')) {
    if (!part.empty() && part[0] == '/') {
      try {
        st.positions.insert(path_from_string(part));
      } catch (const std::exception& e) {
        throw ProofError("line " + std::to_string(st.line) + ": " + e.what());
      }
    } else {
      st.ordinals.push_back(static_cast<std::size_t>(parse_label(part, st.line)));
    }
  }
}

}  // namespace

Derivation parse_script(std::string_view text) {
  static const std::regex line_re(R"(^\s*(\d+)\.\s+(.*\S)\s+BY\s+([A-Za-z]+)\s*(?:\((.*)\))?\s*$)");
  Derivation d;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  std::set<long> labels;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::smatch m;
    if (!std::regex_match(line, m, line_re))
      throw ProofError("line " + std::to_string(lineno) + ": expected 'n. FORMULA BY RULE(args)'");
    Step st;
    st.line = lineno;
    st.label = parse_label(m[1].str(), lineno);
    if (!labels.insert(st.label).second)
      throw ProofError("line " + std::to_string(lineno) + ": duplicate step " + m[1].str());
    st.formula = parse_arg_formula(m[2].str(), lineno);
    st.rule = rule_from(m[3].str(), lineno);
    std::vector<std::string> args;
    if (m[4].matched && !trim(m[4].str()).empty()) args = split(m[4].str(), ';');
    std::size_t k = 0;
    if (st.rule == Rule::Axiom) {
      if (args.empty()) throw ProofError("line " + std::to_string(lineno) + ": AX needs a schema");
      st.schema = args[0];
      k = 1;
    }
    for (; k < args.size(); ++k) {
      const std::string& a = args[k];
      auto eq = a.find('=');
      if (eq == std::string::npos) {
        st.refs.push_back(parse_label(a, lineno));
        continue;
      }
      std::string key = trim(a.substr(0, eq));
      std::string val = trim(a.substr(eq + 1));
      if (key == "i") {
        st.agent = val;
      } else if (key == "c") {
        st.constant = val;
      } else if (key == "psi") {
        st.side = parse_arg_formula(val, lineno);
      } else if (key == "target") {
        st.target = parse_arg_formula(val, lineno);
      } else if (key == "at") {
        parse_positions(st, val);
      } else if (is_identifier(key)) {
        st.sigma[key] = parse_arg_formula(val, lineno);
      } else {
        throw ProofError("line " + std::to_string(lineno) + ": bad argument '" + a + "'");
      }
    }
    d.steps.push_back(std::move(st));
  }
  return d;
}

Derivation load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProofError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_script(ss.str());
}

std::string render_script(const Derivation& d) {
  std::ostringstream os;
  for (const auto& st : d.steps) {
    os << st.label << ". " << print(st.formula) << " BY " << to_string(st.rule);
    std::vector<std::string> args;
    if (st.rule == Rule::Axiom) args.push_back(st.schema);
    for (long r : st.refs) args.push_back(std::to_string(r));
    if (!st.agent.empty()) args.push_back("i=" + st.agent);
    if (!st.constant.empty()) args.push_back("c=" + st.constant);
    for (const auto& [p, f] : st.sigma) args.push_back(p + "=" + print(f));
    if (st.side) args.push_back("psi=" + print(*st.side));
    if (st.target) args.push_back("target=" + print(*st.target));
    if (st.rule == Rule::RE) {
      std::string at;
      if (st.all_positions) at = "all";
      for (const auto& p : st.positions) at += (at.empty() ? "" : ",") + path_to_string(p);
      for (auto o : st.ordinals) at += (at.empty() ? "" : ",") + std::to_string(o);
      args.push_back("at=" + (at.empty() ? std::string("none") : at));
    }
    if (!args.empty()) {
      os << "(";
      for (std::size_t k = 0; k < args.size(); ++k) os << (k ? "; " : "") << args[k];
      os << ")";
    }
    os << "\n";
  }
  return os.str();
}

// Checking --------------------------------------------------------------

namespace {

struct Reject {
  std::string reason;
};

std::size_t arity_of(Rule r) {
  switch (r) {
    case Rule::Taut:
    case Rule::Axiom: return 0;
    case Rule::MP: return 2;
    default: return 1;
  }
}

Formula expected(const ProofSystem& sys, const Step& st, const std::vector<Formula>& prem) {
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw Reject{what};
  };
  switch (st.rule) {
    case Rule::Taut: {
      auto t = is_tautology(st.formula);
      need(t.has_value(), "skeleton has more than 12 atoms");
      need(*t, "not a tautology");
      return st.formula;
    }
    case Rule::Axiom:
      try {
        return axiom_instance(sys, st.schema, st.sigma, st.agent, st.constant);
      } catch (const ProofError& e) {
        throw Reject{e.what()};
      }
    case Rule::MP: {
      const Formula& imp = prem[1];
      need(imp == implies(prem[0], st.formula),
           "MP: second premise is not (first premise -> this formula)");
      return st.formula;
    }
    case Rule::NECK:
      need(!st.agent.empty(), "NECK needs i=");
      return box(st.agent, prem[0]);
    case Rule::NECKvR:
      need(!st.agent.empty() && !st.constant.empty(), "NECKvR needs i= and c=");
      return kbox(st.agent, st.constant, prem[0]);
    case Rule::NECKvB:
      need(!st.agent.empty() && !st.constant.empty() && st.side.has_value(),
           "NECKvB needs i=, c= and psi=");
      return kbox(st.agent, st.constant, prem[0], *st.side);
    case Rule::SUB:
      need(!st.sigma.empty(), "SUB needs a substitution");
      return substitute(prem[0], st.sigma);
    case Rule::RE: {
      need(st.target.has_value(), "RE needs target=");
      const Formula& eq = prem[0];
      // psi <-> chi is (psi -> chi) & (chi -> psi)
      need(eq.is(Op::And), "RE: premise is not a biconditional");
      const Formula& l = eq.child(0);
      need(l.is(Op::Neg) && l.child(0).is(Op::And) && l.child(0).child(1).is(Op::Neg),
           "RE: premise is not a biconditional");
      Formula psi = l.child(0).child(0), chi = l.child(0).child(1).child(0);
      need(eq == iff(psi, chi), "RE: premise is not a biconditional");
      const Formula& phi = *st.target;
      std::set<Path> pos = st.positions;
      auto occ = occurrences(phi, psi);
      if (st.all_positions) pos.insert(occ.begin(), occ.end());
      for (auto o : st.ordinals) {
        need(o >= 1 && o <= occ.size(), "RE: occurrence " + std::to_string(o) + " out of range");
        pos.insert(occ[o - 1]);
      }
      try {
        return iff(phi, replace_at(phi, pos, psi, chi));
      } catch (const std::exception& e) {
        throw Reject{std::string("RE: ") + e.what()};
      }
    }
  }
  throw Reject{"unknown rule"};
}

}  // namespace

CheckResult check_derivation(const ProofSystem& sys, const Derivation& d) {
  std::map<long, std::size_t> index;
  for (std::size_t k = 0; k < d.steps.size(); ++k) {
    const Step& st = d.steps[k];
    auto reject = [&](const std::string& why) { return CheckResult{false, st.label, why}; };
    if (index.count(st.label)) return reject("duplicate step label");
    if (!in_language(st.formula, sys.language))
      return reject(std::string("formula is outside ") + to_string(sys.language));
    if (st.rule != Rule::Taut && st.rule != Rule::Axiom && !sys.has_rule(st.rule))
      return reject(std::string("rule ") + to_string(st.rule) + " is not in " + sys.name);
    if (st.refs.size() != arity_of(st.rule))
      return reject(std::string(to_string(st.rule)) + " cites " + std::to_string(st.refs.size()) +
                    " steps, expected " + std::to_string(arity_of(st.rule)));
    std::vector<Formula> prem;
    for (long r : st.refs) {
      auto it = index.find(r);
      if (it == index.end()) return reject("cites step " + std::to_string(r) + " which is not earlier");
      prem.push_back(d.steps[it->second].formula);
    }
    try {
      Formula want = expected(sys, st, prem);
      if (!(want == st.formula))
        return reject("stated formula differs from the justified one: " + print(want));
    } catch (const Reject& r) {
      return reject(r.reason);
    }
    index[st.label] = k;
  }
  return {};
}

// Fuzzing ---------------------------------------------------------------

namespace {

const char* const kTautologies[] = {
    "p -> (q -> p)",
    "(p -> (q -> r)) -> ((p -> q) -> (p -> r))",
    "(~q -> ~p) -> (p -> q)",
    "p | ~p",
    "(p & q) -> (q & p)",
    "~~p <-> p",
};

std::string model_tag(std::size_t trial, const TernaryModel& m) {
  return "trial " + std::to_string(trial) + " (" + std::to_string(m.size()) + " states)";
}

}  // namespace

namespace {

FuzzReport fuzz_trial(const ProofSystem& sys, const FuzzParams& params, std::size_t trial,
                      const std::vector<Formula>& tauts) {
  Vocabulary vocab({"a", "b"}, {"p", "q", "r"}, {"c", "d"});
  Rng rng(stream_seed(params.seed, trial));
  FuzzReport rep;
  FormulaShape shape{2, 4};
  auto rand_formula = [&]() { return random_formula(rng, vocab, sys.language, shape); };
  auto rand_agent = [&]() { return vocab.agents()[rng.below(vocab.agents().size())]; };
  auto rand_const = [&]() { return vocab.constants()[rng.below(vocab.constants().size())]; };
  auto rand_sigma = [&](const std::vector<std::string>& vars) {
    Substitution s;
    for (const auto& v : vars) s[v] = rand_formula();
    return s;
  };

  GenParams gp{vocab};
  gp.num_states = 1 + rng.below(params.max_states);
  gp.edge_density = params.edge_density;
  gp.triple_density = params.triple_density;
  gp.value_count = 2;
  gp.seed = rng.next();
  TernaryModel m = trial % 2 == 0 ? generate_direct(gp) : generate_value_induced(gp).second;
  rep.trials = 1;
  const std::string tag = model_tag(trial, m);
  auto check = [&](const Formula& f, const std::string& what) {
    if (!valid_on(m, f)) rep.findings.push_back(tag + ": " + what + " falsified: " + print(f));
  };

  // Schema instances, kept as premises for the rule checks.
  std::vector<Formula> proved;
  for (std::size_t k = 0; k < params.instances; ++k) {
    Formula t = substitute(tauts[rng.below(tauts.size())], rand_sigma({"p", "q", "r"}));
    ++rep.instances_checked;
    check(t, "TAUT instance");
    proved.push_back(t);
  }
  std::vector<std::pair<const Schema*, Formula>> instances;
  for (const auto& s : sys.schemas)
    for (std::size_t k = 0; k < params.instances; ++k) {
      Formula f = axiom_instance(sys, s.name, rand_sigma(s.metavars), rand_agent(), rand_const());
      ++rep.instances_checked;
      check(f, s.name + " instance");
      proved.push_back(f);
      instances.emplace_back(&s, f);
    }
  std::erase_if(proved, [&](const Formula& f) { return !valid_on(m, f); });
  if (proved.empty()) return rep;
  auto premise = [&]() { return proved[rng.below(proved.size())]; };

  // MP
  for (std::size_t k = 0; k < params.instances; ++k) {
    Formula a = premise(), b = rand_formula();
    if (valid_on(m, implies(a, b))) {
      ++rep.rule_checks;
      check(b, "MP conclusion");
    }
  }
  // Necessitation rules
  for (std::size_t k = 0; k < params.instances; ++k) {
    ++rep.rule_checks;
    check(box(rand_agent(), premise()), "NECK conclusion");
    if (sys.has_rule(Rule::NECKvR)) {
      ++rep.rule_checks;
      check(kbox(rand_agent(), rand_const(), premise()), "NECKvR conclusion");
    }
    if (sys.has_rule(Rule::NECKvB)) {
      ++rep.rule_checks;
      check(kbox(rand_agent(), rand_const(), premise(), rand_formula()), "NECKvB conclusion");
    }
  }
  // SUB on schema instances: substitution instances of frame-valid
  // formulas are again frame-valid. A single model is not closed under SUB.
  for (const auto& [s, f] : instances) {
    ++rep.rule_checks;
    check(substitute(f, rand_sigma({"p", "q", "r"})), "SUB of " + s->name);
  }
  // RE with a biconditional that holds on the model.
  for (std::size_t k = 0; k < params.instances; ++k) {
    Formula psi = rand_formula();
    Formula candidates[] = {neg(neg(psi)), conj(psi, top()), conj(psi, psi), rand_formula()};
    Formula chi = candidates[rng.below(4)];
    if (!valid_on(m, iff(psi, chi))) continue;
    Formula phi = substitute(rand_formula(), {{"p", psi}});
    auto occ = occurrences(phi, psi);
    std::set<Path> pos;
    for (const auto& o : occ)
      if (rng.coin(0.5)) pos.insert(o);
    ++rep.rule_checks;
    check(iff(phi, replace_at(phi, pos, psi, chi)), "RE conclusion");
  }
  return rep;
}

}  // namespace

FuzzReport soundness_fuzz(const ProofSystem& sys, const FuzzParams& params,
                          std::size_t trials) {
  if (trials < 1) throw ProofError("trials must be at least 1");
  if (params.max_states < 1) throw ProofError("max_states must be at least 1");
  std::vector<Formula> tauts;
  for (const char* t : kTautologies) tauts.push_back(parse_free(t));
  std::vector<FuzzReport> parts(trials);
  const unsigned workers = std::max(1u, params.workers);
  auto work = [&](unsigned w) {
    for (std::size_t t = w; t < trials; t += workers) parts[t] = fuzz_trial(sys, params, t, tauts);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  FuzzReport rep;
  for (auto& p : parts) {
    rep.trials += p.trials;
    rep.instances_checked += p.instances_checked;
    rep.rule_checks += p.rule_checks;
    for (auto& f : p.findings) rep.findings.push_back(std::move(f));
  }
  return rep;
}

namespace {

const char* const kKvbotFromNeckv = R"(# [a]^c ~F from NECKvR
1. ~F BY TAUT
2. [a]^c ~F BY NECKvR(1; i=a; c=c)
)";

const char* const kNeckvFromKvbot = R"(# [a]^c phi for phi = (p | ~p), from [a]^c ~F, DISTKvR and NECK
1. (p | ~p) BY TAUT
2. ((p | ~p) -> (~F -> (p | ~p))) BY TAUT
3. (~F -> (p | ~p)) BY MP(1; 2)
4. [a](~F -> (p | ~p)) BY NECK(3; i=a)
5. ([a](~F -> (p | ~p)) -> ([a]^c ~F -> [a]^c (p | ~p))) BY AX(DISTKvR; i=a; c=c; p=~F; q=(p | ~p))
6. ([a]^c ~F -> [a]^c (p | ~p)) BY MP(4; 5)
7. [a]^c ~F BY AX(KvRbot; i=a; c=c)
8. [a]^c (p | ~p) BY MP(7; 6)
)";

}  // namespace

NeckvPair derive_equivalent_neckv() {
  return {parse_script(kKvbotFromNeckv), parse_script(kNeckvFromKvbot)};
}

}  // namespace kvlog
