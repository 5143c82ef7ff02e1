#include "kvlog/bisim.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "kvlog/semantics.hpp"

namespace kvlog {

namespace {

using TripleFn = std::function<bool(std::size_t a, std::size_t c, State s, State t, State u)>;

// Side of a C-bisimulation check. Triples come through a predicate so the
// FO clauses can read value differences directly.
struct Side {
  const Vocabulary& vocab;
  const std::vector<std::string>& states;
  const std::vector<Relation>& access;
  const std::vector<std::vector<bool>>& val;
  TripleFn triple;
  std::size_t size() const { return states.size(); }
};

Side side_of(const TernaryModel& m) {
  return {m.vocab, m.states, m.access, m.val,
          [&m](std::size_t a, std::size_t c, State s, State t, State u) {
            return m.triples(a, c).has(s, t, u);
          }};
}

Side side_of(const FOKripkeModel& f) {
  return {f.vocab, f.states, f.access, f.val,
          [&f](std::size_t a, std::size_t c, State s, State t, State u) {
            return f.access[a].has(s, t) && f.access[a].has(s, u) &&
                   f.value[c][t] != f.value[c][u];
          }};
}

// Pair matrix over S1 x S2.
using Matrix = std::vector<char>;

// Clauses for one pair, in the order Inv, Zig, Zag, Kv-Zig, Kv-Zag.
void pair_failures(const Side& l, const Side& r, const Matrix& z, State s1, State s2,
                   const char* kv_zig, const char* kv_zag, bool first_only,
                   std::vector<ClauseFailure>& out) {
  const std::size_t n1 = l.size(), n2 = r.size();
  auto in = [&](State a, State b) { return z[a * n2 + b] != 0; };
  auto emit = [&](ClauseFailure f) {
    f.left = s1;
    f.right = s2;
    out.push_back(std::move(f));
    return first_only;
  };
  const auto& props = l.vocab.props();
  for (std::size_t p = 0; p < props.size(); ++p)
    if (l.val[s1][p] != r.val[s2][p])
      if (emit({"Inv", 0, 0, "", "", props[p], {}})) return;
  const auto& agents = l.vocab.agents();
  for (std::size_t a = 0; a < agents.size(); ++a) {
    for (State t1 = 0; t1 < n1; ++t1) {
      if (!l.access[a].has(s1, t1)) continue;
      bool matched = false;
      for (State t2 = 0; t2 < n2 && !matched; ++t2)
        matched = r.access[a].has(s2, t2) && in(t1, t2);
      if (!matched && emit({"Zig", 0, 0, agents[a], "", "", {t1}})) return;
    }
    for (State t2 = 0; t2 < n2; ++t2) {
      if (!r.access[a].has(s2, t2)) continue;
      bool matched = false;
      for (State t1 = 0; t1 < n1 && !matched; ++t1)
        matched = l.access[a].has(s1, t1) && in(t1, t2);
      if (!matched && emit({"Zag", 0, 0, agents[a], "", "", {t2}})) return;
    }
  }
  const auto& consts = l.vocab.constants();
  for (std::size_t a = 0; a < agents.size(); ++a)
    for (std::size_t c = 0; c < consts.size(); ++c) {
      for (State t1 = 0; t1 < n1; ++t1)
        for (State u1 = 0; u1 < n1; ++u1) {
          if (!l.triple(a, c, s1, t1, u1)) continue;
          bool matched = false;
          for (State t2 = 0; t2 < n2 && !matched; ++t2)
            for (State u2 = 0; u2 < n2 && !matched; ++u2)
              matched = in(t1, t2) && in(u1, u2) && r.triple(a, c, s2, t2, u2);
          if (!matched && emit({kv_zig, 0, 0, agents[a], consts[c], "", {t1, u1}})) return;
        }
      for (State t2 = 0; t2 < n2; ++t2)
        for (State u2 = 0; u2 < n2; ++u2) {
          if (!r.triple(a, c, s2, t2, u2)) continue;
          bool matched = false;
          for (State t1 = 0; t1 < n1 && !matched; ++t1)
            for (State u1 = 0; u1 < n1 && !matched; ++u1)
              matched = in(t1, t2) && in(u1, u2) && l.triple(a, c, s1, t1, u1);
          if (!matched && emit({kv_zag, 0, 0, agents[a], consts[c], "", {t2, u2}})) return;
        }
    }
}

Matrix matrix_of(const BisimRelation& z, std::size_t n1, std::size_t n2) {
  Matrix m(n1 * n2, 0);
  for (auto [a, b] : z.pairs) {
    if (a >= n1 || b >= n2) throw ModelError("relation pair out of range");
    m[a * n2 + b] = 1;
  }
  return m;
}

std::vector<ClauseFailure> check(const Side& l, const Side& r, const BisimRelation& z,
                                 const char* kv_zig, const char* kv_zag) {
  if (!(l.vocab == r.vocab)) throw ModelError("models must share a vocabulary");
  Matrix m = matrix_of(z, l.size(), r.size());
  std::vector<ClauseFailure> out;
  for (auto [s1, s2] : z.pairs) pair_failures(l, r, m, s1, s2, kv_zig, kv_zag, false, out);
  return out;
}

// Conjunction with repeated conjuncts dropped.
Formula conj_set(std::vector<Formula> parts) {
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  return conj_all(parts);
}

}  // namespace

std::string describe(const ClauseFailure& f, const std::vector<std::string>& left_states,
                     const std::vector<std::string>& right_states) {
  std::ostringstream os;
  os << f.clause << " fails at (" << left_states[f.left] << ", " << right_states[f.right]
     << ")";
  if (!f.prop.empty()) os << " on " << f.prop;
  if (!f.agent.empty()) os << " for " << f.agent << (f.constant.empty() ? "" : "," + f.constant);
  if (!f.witness.empty()) {
    const bool zig = f.clause.find("Zig") != std::string::npos;
    const auto& names = zig ? left_states : right_states;
    os << ": unmatched (";
    for (std::size_t k = 0; k < f.witness.size(); ++k)
      os << (k ? ", " : "") << names[f.witness[k]];
    os << ")";
  }
  return os.str();
}

std::vector<ClauseFailure> check_bisimulation(const TernaryModel& m1, const TernaryModel& m2,
                                              const BisimRelation& z) {
  return check(side_of(m1), side_of(m2), z, "Kvb-Zig", "Kvb-Zag");
}

std::vector<ClauseFailure> check_fo_bisimulation(const FOKripkeModel& f1,
                                                 const FOKripkeModel& f2,
                                                 const BisimRelation& z) {
  f1.check_assignment();
  f2.check_assignment();
  return check(side_of(f1), side_of(f2), z, "Kvr-Zig", "Kvr-Zag");
}

BisimAnalysis::BisimAnalysis(const TernaryModel& m1, const TernaryModel& m2)
    : m1_(m1), m2_(m2) {
  if (!(m1.vocab == m2.vocab)) throw ModelError("models must share a vocabulary");
  for (const TernaryModel* m : {&m1, &m2}) {
    auto v = validate_ternary(*m);
    if (!v.empty()) throw ModelError("invalid ternary model: " + describe(v.front(), *m));
  }
  const std::size_t n1 = m1.size(), n2 = m2.size();
  removed_.assign(n1 * n2, std::nullopt);
  memo_.assign(n1 * n2, std::nullopt);
  Side l = side_of(m1), r = side_of(m2);

  // Round 0: propositional agreement.
  Matrix z(n1 * n2, 1);
  std::vector<ClauseFailure> fails;
  for (State s1 = 0; s1 < n1; ++s1)
    for (State s2 = 0; s2 < n2; ++s2)
      for (std::size_t p = 0; p < m1.vocab.props().size(); ++p)
        if (m1.val[s1][p] != m2.val[s2][p]) {
          z[s1 * n2 + s2] = 0;
          removed_[s1 * n2 + s2] = Removal{0, {"Inv", s1, s2, "", "", m1.vocab.props()[p], {}}};
          break;
        }
  // Later rounds: every surviving pair is checked against the previous round.
  for (std::size_t round = 1;; ++round) {
    Matrix next = z;
    bool changed = false;
    for (State s1 = 0; s1 < n1; ++s1)
      for (State s2 = 0; s2 < n2; ++s2) {
        if (!z[s1 * n2 + s2]) continue;
        fails.clear();
        pair_failures(l, r, z, s1, s2, "Kvb-Zig", "Kvb-Zag", true, fails);
        if (fails.empty()) continue;
        next[s1 * n2 + s2] = 0;
        removed_[s1 * n2 + s2] = Removal{round, fails.front()};
        changed = true;
      }
    z = std::move(next);
    if (!changed) {
      rounds_ = round;
      break;
    }
  }
  for (State s1 = 0; s1 < n1; ++s1)
    for (State s2 = 0; s2 < n2; ++s2)
      if (z[s1 * n2 + s2]) greatest_.pairs.insert({s1, s2});
}

bool BisimAnalysis::in_before(State s1, State s2, std::size_t round) const {
  const auto& r = removed_[s1 * m2_.size() + s2];
  return !r || r->round >= round;
}

Formula BisimAnalysis::delta(State s1, State s2) {
  const std::size_t n1 = m1_.size(), n2 = m2_.size();
  auto& slot = memo_[s1 * n2 + s2];
  if (slot) return *slot;
  const Removal& rem = *removed_[s1 * n2 + s2];
  const ClauseFailure& why = rem.why;
  // Pairs outside the previous round; each was removed strictly earlier.
  auto out = [&](State a, State b) { return !in_before(a, b, rem.round); };
  const auto& agents = m1_.vocab.agents();
  std::size_t a = 0, c = 0;
  if (!why.agent.empty()) a = static_cast<std::size_t>(m1_.vocab.agent_index(why.agent));
  if (!why.constant.empty()) c = static_cast<std::size_t>(m1_.vocab.constant_index(why.constant));

  Formula f;
  if (why.clause == "Inv") {
    Formula p = prop(why.prop);
    f = m1_.holds(s1, why.prop) ? p : neg(p);
  } else if (why.clause == "Zig") {
    State t1 = why.witness[0];
    std::vector<Formula> parts;
    for (State t2 : m2_.access[a].successors(s2)) parts.push_back(delta(t1, t2));
    f = dia(agents[a], conj_set(parts));
  } else if (why.clause == "Zag") {
    State t2 = why.witness[0];
    std::vector<Formula> parts;
    for (State t1 : m1_.access[a].successors(s1)) parts.push_back(neg(delta(t1, t2)));
    f = neg(dia(agents[a], conj_set(parts)));
  } else {
    const TripleRelation& r1 = m1_.triples(a, c);
    const TripleRelation& r2 = m2_.triples(a, c);
    std::vector<Formula> lhs, rhs;
    if (why.clause == "Kvb-Zig") {
      State t1 = why.witness[0], u1 = why.witness[1];
      std::vector<char> used_t(n2, 0), used_u(n2, 0);
      for (State t2 = 0; t2 < n2; ++t2)
        for (State u2 = 0; u2 < n2; ++u2) {
          if (!r2.has(s2, t2, u2)) continue;
          if (out(t1, t2) && !used_t[t2]) {
            used_t[t2] = 1;
            lhs.push_back(delta(t1, t2));
          }
          if (out(u1, u2) && !used_u[u2]) {
            used_u[u2] = 1;
            rhs.push_back(delta(u1, u2));
          }
        }
      f = kdia(agents[a], why.constant, conj_set(lhs), conj_set(rhs));
    } else {
      State t2 = why.witness[0], u2 = why.witness[1];
      std::vector<char> used_t(n1, 0), used_u(n1, 0);
      for (State t1 = 0; t1 < n1; ++t1)
        for (State u1 = 0; u1 < n1; ++u1) {
          if (!r1.has(s1, t1, u1)) continue;
          if (out(t1, t2) && !used_t[t1]) {
            used_t[t1] = 1;
            lhs.push_back(neg(delta(t1, t2)));
          }
          if (out(u1, u2) && !used_u[u1]) {
            used_u[u1] = 1;
            rhs.push_back(neg(delta(u1, u2)));
          }
        }
      f = neg(kdia(agents[a], why.constant, conj_set(lhs), conj_set(rhs)));
    }
  }
  slot = f;
  return f;
}

std::optional<Formula> BisimAnalysis::distinguish(State s1, State s2) {
  if (s1 >= m1_.size() || s2 >= m2_.size()) throw ModelError("state out of range");
  if (bisimilar(s1, s2)) return std::nullopt;
  Formula f = delta(s1, s2);
  if (!eval_ternary(m1_, s1, f) || eval_ternary(m2_, s2, f))
    throw std::logic_error("distinguishing formula failed verification");
  return f;
}

BisimRelation greatest_bisim(const TernaryModel& m1, const TernaryModel& m2) {
  return BisimAnalysis(m1, m2).greatest();
}

std::optional<Formula> distinguishing_formula(const TernaryModel& m1, State s1,
                                              const TernaryModel& m2, State s2) {
  return BisimAnalysis(m1, m2).distinguish(s1, s2);
}

}  // namespace kvlog
