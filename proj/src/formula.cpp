#include "kvlog/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace kvlog {

namespace {

int find_index(const std::vector<std::string>& v, const std::string& n) {
  auto it = std::find(v.begin(), v.end(), n);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

void check_names(const std::vector<std::string>& names, const char* what) {
  if (names.empty())
    throw FormulaError(std::string("vocabulary has no ") + what);
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!is_identifier(n))
      throw FormulaError(std::string("bad ") + what + " name '" + n + "'");
    if (!seen.insert(n).second)
      throw FormulaError(std::string("duplicate ") + what + " '" + n + "'");
  }
}

}  // namespace

bool is_identifier(const std::string& s) {
  if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_';
  });
}

Vocabulary::Vocabulary(std::vector<std::string> agents,
                       std::vector<std::string> props,
                       std::vector<std::string> constants)
    : agents_(std::move(agents)),
      props_(std::move(props)),
      constants_(std::move(constants)) {
  check_names(agents_, "agent");
  check_names(props_, "proposition");
  check_names(constants_, "constant");
}

int Vocabulary::agent_index(const std::string& n) const { return find_index(agents_, n); }
int Vocabulary::prop_index(const std::string& n) const { return find_index(props_, n); }
int Vocabulary::constant_index(const std::string& n) const {
  return find_index(constants_, n);
}

const char* to_string(Language l) {
  switch (l) {
    case Language::ELKvR: return "ELKvR";
    case Language::MLKvR: return "MLKvR";
    case Language::MLKvB: return "MLKvB";
    case Language::MLKv: return "MLKv";
  }
  return "?";
}

Formula::Formula() : Formula(top()) {}

Formula Formula::make(Op op, std::string sym, std::string agent,
                      std::string constant, std::vector<Formula> kids) {
  std::size_t n = 1;
  for (const auto& k : kids) n += k.node_->size;
  return Formula(std::make_shared<const Node>(Node{op, std::move(sym), std::move(agent),
                                                   std::move(constant), std::move(kids), n}));
}

std::size_t Formula::arity() const { return node_->kids.size(); }

const Formula& Formula::child(std::size_t k) const {
  if (k >= node_->kids.size()) throw FormulaError("child index out of range");
  return node_->kids[k];
}

bool Formula::is_modal() const {
  switch (op()) {
    case Op::Box:
    case Op::KvCond:
    case Op::BoxU:
    case Op::BoxB: return true;
    default: return false;
  }
}

std::size_t size(const Formula& f) { return f.node_->size; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->size != b.node_->size) return false;
  return compare(a, b) == 0;
}

int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  if (int c = a.node_->sym.compare(b.node_->sym)) return c < 0 ? -1 : 1;
  if (int c = a.node_->agent.compare(b.node_->agent)) return c < 0 ? -1 : 1;
  if (int c = a.node_->constant.compare(b.node_->constant)) return c < 0 ? -1 : 1;
  for (std::size_t k = 0; k < a.arity(); ++k)
    if (int c = compare(a.child(k), b.child(k))) return c;
  return 0;
}

Formula top() {
  static const Formula t = Formula::make(Op::Top, "", "", "", {});
  return t;
}

Formula prop(const std::string& p) { return Formula::make(Op::Prop, p, "", "", {}); }
Formula neg(const Formula& f) { return Formula::make(Op::Neg, "", "", "", {f}); }
Formula conj(const Formula& a, const Formula& b) {
  return Formula::make(Op::And, "", "", "", {a, b});
}
Formula box(const std::string& agent, const Formula& f) {
  return Formula::make(Op::Box, "", agent, "", {f});
}
Formula kv(const std::string& agent, const Formula& f, const std::string& c) {
  return Formula::make(Op::KvCond, "", agent, c, {f});
}
Formula kbox(const std::string& agent, const std::string& c, const Formula& f) {
  return Formula::make(Op::BoxU, "", agent, c, {f});
}
Formula kbox(const std::string& agent, const std::string& c, const Formula& f,
             const Formula& g) {
  return Formula::make(Op::BoxB, "", agent, c, {f, g});
}

Formula bottom() { return neg(top()); }
Formula disj(const Formula& a, const Formula& b) { return neg(conj(neg(a), neg(b))); }
Formula implies(const Formula& a, const Formula& b) { return neg(conj(a, neg(b))); }
Formula iff(const Formula& a, const Formula& b) {
  return conj(implies(a, b), implies(b, a));
}
Formula dia(const std::string& agent, const Formula& f) { return neg(box(agent, neg(f))); }
Formula kdia(const std::string& agent, const std::string& c, const Formula& f) {
  return neg(kbox(agent, c, neg(f)));
}
Formula kdia(const std::string& agent, const std::string& c, const Formula& f,
             const Formula& g) {
  return neg(kbox(agent, c, neg(f), neg(g)));
}

Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t k = 1; k < fs.size(); ++k) acc = conj(acc, fs[k]);
  return acc;
}

Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs.front();
  for (std::size_t k = 1; k < fs.size(); ++k) acc = disj(acc, fs[k]);
  return acc;
}

Formula strip_double_neg(const Formula& f) {
  if (f.is(Op::Neg) && f.child(0).is(Op::Neg)) return f.child(0).child(0);
  return f;
}

Formula normalize_double_neg(const Formula& f) {
  if (f.is(Op::Neg) && f.child(0).is(Op::Neg))
    return normalize_double_neg(f.child(0).child(0));
  if (f.arity() == 0) return f;
  std::vector<Formula> kids;
  kids.reserve(f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) kids.push_back(normalize_double_neg(f.child(k)));
  return Formula::make(f.op(), f.name(), f.agent(), f.constant(), std::move(kids));
}

Symbols symbols_of(const Formula& f) {
  Symbols out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.is(Op::Prop)) out.props.insert(g.name());
    if (!g.agent().empty()) out.agents.insert(g.agent());
    if (!g.constant().empty()) out.constants.insert(g.constant());
    for (std::size_t k = 0; k < g.arity(); ++k) walk(g.child(k));
  };
  walk(f);
  return out;
}

void check_vocabulary(const Formula& f, const Vocabulary& vocab) {
  Symbols s = symbols_of(f);
  for (const auto& a : s.agents)
    if (!vocab.has_agent(a)) throw FormulaError("unknown agent '" + a + "'");
  for (const auto& p : s.props)
    if (!vocab.has_prop(p)) throw FormulaError("unknown proposition '" + p + "'");
  for (const auto& c : s.constants)
    if (!vocab.has_constant(c)) throw FormulaError("unknown constant '" + c + "'");
}

}  // namespace kvlog
