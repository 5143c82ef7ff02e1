#include "kvlog/syntax.hpp"

#include <cctype>
#include <functional>
#include <optional>
#include <sstream>

namespace kvlog {

namespace {

enum class Tok {
  End, Top, Bot, Ident, Not, And, Or, Imp, Iff,
  LBrack, RBrack, Lt, Gt, Caret, LParen, RParen, Comma, Kv,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(s.substr(i, len)), i});
    i += len;
  };
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    if (s.substr(i, 3) == "<->") { push(Tok::Iff, 3); continue; }
    if (s.substr(i, 2) == "->") { push(Tok::Imp, 2); continue; }
    if (s.substr(i, 2) == "Kv") { push(Tok::Kv, 2); continue; }
    switch (ch) {
      case 'T': push(Tok::Top, 1); continue;
      case 'F': push(Tok::Bot, 1); continue;
      case '~': push(Tok::Not, 1); continue;
      case '&': push(Tok::And, 1); continue;
      case '|': push(Tok::Or, 1); continue;
      case '[': push(Tok::LBrack, 1); continue;
      case ']': push(Tok::RBrack, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '>': push(Tok::Gt, 1); continue;
      case '^': push(Tok::Caret, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      default: break;
    }
    if (ch >= 'a' && ch <= 'z') {
      std::size_t j = i + 1;
      while (j < s.size() && (std::islower(static_cast<unsigned char>(s[j])) ||
                              std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      push(Tok::Ident, j - i);
      continue;
    }
    throw FormulaError("lex error at offset " + std::to_string(i) + ": unexpected '" +
                       std::string(1, ch) + "'");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary* vocab)
      : toks_(lex(text)), vocab_(vocab) {}

  Formula run() {
    Formula f = parse_iff();
    if (peek().kind != Tok::End) fail("trailing input");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw FormulaError("parse error at offset " + std::to_string(peek().pos) + ": " + msg);
  }

  std::string ident(const char* role) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + role + " name");
    return take().text;
  }
  std::string agent() {
    std::string a = ident("agent");
    if (vocab_ && !vocab_->has_agent(a)) throw FormulaError("unknown agent '" + a + "'");
    return a;
  }
  std::string constant() {
    std::string c = ident("constant");
    if (vocab_ && !vocab_->has_constant(c)) throw FormulaError("unknown constant '" + c + "'");
    return c;
  }

  Formula parse_iff() {
    Formula lhs = parse_imp();
    if (accept(Tok::Iff)) return iff(lhs, parse_iff());
    return lhs;
  }
  Formula parse_imp() {
    Formula lhs = parse_or();
    if (accept(Tok::Imp)) return implies(lhs, parse_imp());
    return lhs;
  }
  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept(Tok::Or)) lhs = disj(lhs, parse_and());
    return lhs;
  }
  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept(Tok::And)) lhs = conj(lhs, parse_unary());
    return lhs;
  }

  // After [a]^c or <a>^c: either "(f, g)", a parenthesized unary argument,
  // or a prefix-level formula.
  std::pair<Formula, std::optional<Formula>> k_args() {
    if (accept(Tok::LParen)) {
      Formula f = parse_iff();
      if (accept(Tok::Comma)) {
        Formula g = parse_iff();
        expect(Tok::RParen, "')'");
        return {f, g};
      }
      expect(Tok::RParen, "')' or ','");
      return {f, std::nullopt};
    }
    return {parse_unary(), std::nullopt};
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: take(); return neg(parse_unary());
      case Tok::Top: take(); return top();
      case Tok::Bot: take(); return bottom();
      case Tok::Ident: {
        std::string p = take().text;
        if (vocab_ && !vocab_->has_prop(p)) throw FormulaError("unknown proposition '" + p + "'");
        return prop(p);
      }
      case Tok::LParen: {
        take();
        Formula f = parse_iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::LBrack:
      case Tok::Lt: {
        bool diamond = t.kind == Tok::Lt;
        take();
        std::string a = agent();
        expect(diamond ? Tok::Gt : Tok::RBrack, diamond ? "'>'" : "']'");
        if (accept(Tok::Caret)) {
          std::string c = constant();
          auto [f, g] = k_args();
          if (g) return diamond ? kdia(a, c, f, *g) : kbox(a, c, f, *g);
          return diamond ? kdia(a, c, f) : kbox(a, c, f);
        }
        Formula f = parse_unary();
        return diamond ? dia(a, f) : box(a, f);
      }
      case Tok::Kv: {
        take();
        expect(Tok::LBrack, "'[' after Kv");
        std::string a = agent();
        expect(Tok::RBrack, "']'");
        expect(Tok::LParen, "'(' after Kv[a]");
        if (peek().kind == Tok::Ident && peek(1).kind == Tok::RParen) {
          std::string c = constant();
          take();
          return kv(a, top(), c);
        }
        Formula f = parse_iff();
        if (!accept(Tok::Comma)) fail("Kv expects (formula, constant)");
        std::string c = constant();
        expect(Tok::RParen, "')'");
        return kv(a, f, c);
      }
      default: fail("expected a formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Vocabulary* vocab_;
};

void print_into(std::ostringstream& os, const Formula& f, bool sugar);

void print_neg(std::ostringstream& os, const Formula& x, bool sugar) {
  if (sugar) {
    auto negated = [](const Formula& g) { return g.is(Op::Neg); };
    if (x.is(Op::Top)) {
      os << 'F';
      return;
    }
    if (x.is(Op::And) && negated(x.lhs()) && negated(x.rhs())) {
      os << '(';
      print_into(os, x.lhs().child(0), sugar);
      os << " | ";
      print_into(os, x.rhs().child(0), sugar);
      os << ')';
      return;
    }
    if (x.is(Op::And) && negated(x.rhs())) {
      os << '(';
      print_into(os, x.lhs(), sugar);
      os << " -> ";
      print_into(os, x.rhs().child(0), sugar);
      os << ')';
      return;
    }
    if (x.is(Op::Box) && negated(x.child(0))) {
      os << '<' << x.agent() << '>';
      print_into(os, x.child(0).child(0), sugar);
      return;
    }
    if (x.is(Op::BoxU) && negated(x.child(0))) {
      os << '<' << x.agent() << ">^" << x.constant() << ' ';
      print_into(os, x.child(0).child(0), sugar);
      return;
    }
    if (x.is(Op::BoxB) && negated(x.lhs()) && negated(x.rhs())) {
      os << '<' << x.agent() << ">^" << x.constant() << '(';
      print_into(os, x.lhs().child(0), sugar);
      os << ", ";
      print_into(os, x.rhs().child(0), sugar);
      os << ')';
      return;
    }
  }
  os << '~';
  print_into(os, x, sugar);
}

// (a -> b) & (b -> a), i.e. ~(a & ~b) & ~(b & ~a)
bool iff_shape(const Formula& f) {
  auto imp = [](const Formula& g) {
    return g.is(Op::Neg) && g.child(0).is(Op::And) && g.child(0).rhs().is(Op::Neg);
  };
  if (!f.is(Op::And) || !imp(f.lhs()) || !imp(f.rhs())) return false;
  const Formula& l = f.lhs().child(0);
  const Formula& r = f.rhs().child(0);
  return l.lhs() == r.rhs().child(0) && l.rhs().child(0) == r.lhs();
}

void print_into(std::ostringstream& os, const Formula& f, bool sugar) {
  switch (f.op()) {
    case Op::Top: os << 'T'; return;
    case Op::Prop: os << f.name(); return;
    case Op::Neg: print_neg(os, f.child(0), sugar); return;
    case Op::And:
      if (sugar && iff_shape(f)) {
        os << '(';
        print_into(os, f.lhs().child(0).lhs(), sugar);
        os << " <-> ";
        print_into(os, f.lhs().child(0).rhs().child(0), sugar);
        os << ')';
        return;
      }
      os << '(';
      print_into(os, f.lhs(), sugar);
      os << " & ";
      print_into(os, f.rhs(), sugar);
      os << ')';
      return;
    case Op::Box:
      os << '[' << f.agent() << ']';
      print_into(os, f.child(0), sugar);
      return;
    case Op::KvCond:
      os << "Kv[" << f.agent() << "](";
      if (!f.child(0).is(Op::Top)) {
        print_into(os, f.child(0), sugar);
        os << ", ";
      }
      os << f.constant() << ')';
      return;
    case Op::BoxU:
      os << '[' << f.agent() << "]^" << f.constant() << ' ';
      print_into(os, f.child(0), sugar);
      return;
    case Op::BoxB:
      os << '[' << f.agent() << "]^" << f.constant() << '(';
      print_into(os, f.lhs(), sugar);
      os << ", ";
      print_into(os, f.rhs(), sugar);
      os << ')';
      return;
  }
}

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  return Formula::make(f.op(), f.name(), f.agent(), f.constant(), std::move(kids));
}

template <typename Fn>
Formula map_children(const Formula& f, Fn&& fn) {
  if (f.arity() == 0) return f;
  std::vector<Formula> kids;
  kids.reserve(f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) kids.push_back(fn(f.child(k)));
  return rebuild(f, std::move(kids));
}

bool normalizes_to_bottom(Formula f) {
  while (f.is(Op::Neg) && f.child(0).is(Op::Neg)) f = f.child(0).child(0);
  return f.is(Op::Neg) && f.child(0).is(Op::Top);
}

// For an argument a of [i]^c(a, .), the matching argument of the dual
// diamond: ~a with one double negation removed.
Formula dual_arg(const Formula& a) { return a.is(Op::Neg) ? a.child(0) : neg(a); }

}  // namespace

Formula parse(std::string_view text, const Vocabulary& vocab) {
  return Parser(text, &vocab).run();
}

Formula parse_free(std::string_view text) { return Parser(text, nullptr).run(); }

std::string print(const Formula& f, PrintOptions opts) {
  std::ostringstream os;
  print_into(os, f, opts.resugar);
  return os.str();
}

std::set<Language> language_of(const Formula& f) {
  bool has_kv = false, has_unary = false, has_binary = false, unary_bottom_only = true;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    switch (g.op()) {
      case Op::KvCond: has_kv = true; break;
      case Op::BoxU:
        has_unary = true;
        if (!normalizes_to_bottom(g.child(0))) unary_bottom_only = false;
        break;
      case Op::BoxB: has_binary = true; break;
      default: break;
    }
    for (std::size_t k = 0; k < g.arity(); ++k) walk(g.child(k));
  };
  walk(f);
  std::set<Language> out;
  if (!has_unary && !has_binary) out.insert(Language::ELKvR);
  if (!has_kv && !has_binary) out.insert(Language::MLKvR);
  if (!has_kv && !has_unary) out.insert(Language::MLKvB);
  if (!has_kv && !has_binary && unary_bottom_only) out.insert(Language::MLKv);
  return out;
}

bool in_language(const Formula& f, Language l) { return language_of(f).count(l) > 0; }

Formula translate_T(const Formula& f) {
  if (!in_language(f, Language::ELKvR))
    throw FormulaError("translate_T: input is not an ELKvR formula: " + print(f));
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (g.is(Op::KvCond)) return kbox(g.agent(), g.constant(), neg(go(g.child(0))));
    return map_children(g, go);
  };
  return go(f);
}

Formula translate_T_inv(const Formula& f) {
  if (!in_language(f, Language::MLKvR))
    throw FormulaError("translate_T_inv: input is not an MLKvR formula: " + print(f));
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (g.is(Op::BoxU))
      return kv(g.agent(), strip_double_neg(neg(go(g.child(0)))), g.constant());
    return map_children(g, go);
  };
  return go(f);
}

Formula embed_unary(const Formula& f) {
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (g.is(Op::KvCond))
      throw FormulaError("embed_unary: Kv is not part of the modal languages");
    if (g.is(Op::BoxU)) {
      Formula a = go(g.child(0));
      return kbox(g.agent(), g.constant(), a, a);
    }
    return map_children(g, go);
  };
  return go(f);
}

Formula binary_diamond_expansion(const std::string& i, const std::string& c,
                                 const Formula& phi, const Formula& psi) {
  Formula first = conj(kdia(i, c, phi), dia(i, psi));
  Formula second = conj(kdia(i, c, psi), dia(i, phi));
  Formula third =
      conj(conj(conj(conj(dia(i, phi), dia(i, psi)), neg(kdia(i, c, phi))), neg(kdia(i, c, psi))),
           kdia(i, c, disj(phi, psi)));
  return disj(disj(first, second), third);
}

Formula reduce_r(const Formula& f) {
  switch (f.op()) {
    case Op::Top:
    case Op::Prop: return f;
    case Op::KvCond: throw FormulaError("reduce_r: Kv is not part of MLKvB");
    case Op::Neg: {
      const Formula& x = f.child(0);
      if (x.is(Op::BoxB))
        return binary_diamond_expansion(x.agent(), x.constant(), reduce_r(dual_arg(x.lhs())),
                                        reduce_r(dual_arg(x.rhs())));
      return neg(reduce_r(x));
    }
    case Op::BoxB:
      return neg(binary_diamond_expansion(f.agent(), f.constant(), reduce_r(dual_arg(f.lhs())),
                                          reduce_r(dual_arg(f.rhs()))));
    default: return map_children(f, reduce_r);
  }
}

Formula substitute(const Formula& f, const Substitution& sigma) {
  if (sigma.empty()) return f;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (g.is(Op::Prop)) {
      auto it = sigma.find(g.name());
      return it == sigma.end() ? g : it->second;
    }
    return map_children(g, go);
  };
  return go(f);
}

Formula rename_symbols(const Formula& f, const std::map<std::string, std::string>& agents,
                       const std::map<std::string, std::string>& constants) {
  auto lookup = [](const std::map<std::string, std::string>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? k : it->second;
  };
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    std::vector<Formula> kids;
    for (std::size_t k = 0; k < g.arity(); ++k) kids.push_back(go(g.child(k)));
    std::string a = g.agent().empty() ? g.agent() : lookup(agents, g.agent());
    std::string c = g.constant().empty() ? g.constant() : lookup(constants, g.constant());
    return Formula::make(g.op(), g.name(), a, c, std::move(kids));
  };
  return go(f);
}

const Formula& subterm_at(const Formula& f, const Path& path) {
  const Formula* cur = &f;
  for (std::size_t k : path) {
    if (k >= cur->arity())
      throw FormulaError("path " + path_to_string(path) + " does not address a subterm");
    cur = &cur->child(k);
  }
  return *cur;
}

std::vector<Path> occurrences(const Formula& f, const Formula& psi) {
  std::vector<Path> out;
  Path cur;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g == psi) {
      out.push_back(cur);
      return;
    }
    for (std::size_t k = 0; k < g.arity(); ++k) {
      cur.push_back(k);
      walk(g.child(k));
      cur.pop_back();
    }
  };
  walk(f);
  return out;
}

Formula replace_at(const Formula& f, const std::set<Path>& positions, const Formula& psi,
                   const Formula& chi) {
  for (const auto& p : positions)
    if (subterm_at(f, p) != psi)
      throw FormulaError("subterm at " + path_to_string(p) + " is " + print(subterm_at(f, p)) +
                         ", not " + print(psi));
  Path cur;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (positions.count(cur)) return chi;
    if (g.arity() == 0) return g;
    std::vector<Formula> kids;
    for (std::size_t k = 0; k < g.arity(); ++k) {
      cur.push_back(k);
      kids.push_back(go(g.child(k)));
      cur.pop_back();
    }
    return rebuild(g, std::move(kids));
  };
  return go(f);
}

std::string path_to_string(const Path& p) {
  if (p.empty()) return "/";
  std::string s;
  for (std::size_t k : p) s += "/" + std::to_string(k);
  return s;
}

Path path_from_string(std::string_view s) {
  if (s.empty() || s[0] != '/') throw FormulaError("path must start with '/'");
  Path p;
  std::size_t i = 1;
  while (i < s.size()) {
    std::size_t j = s.find('/', i);
    if (j == std::string_view::npos) j = s.size();
    std::string part(s.substr(i, j - i));
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw FormulaError("bad path component '" + part + "'");
    p.push_back(std::stoul(part));
    i = j + 1;
  }
  return p;
}

std::size_t modal_depth(const Formula& f) {
  std::size_t d = 0;
  for (std::size_t k = 0; k < f.arity(); ++k) d = std::max(d, modal_depth(f.child(k)));
  return f.is_modal() ? d + 1 : d;
}

}  // namespace kvlog
