#include "kvlog/models.hpp"

#include <algorithm>
#include <sstream>

#include "kvlog/random.hpp"

namespace kvlog {

std::vector<State> Relation::successors(State s) const {
  std::vector<State> out;
  for (State t = 0; t < n_; ++t)
    if (has(s, t)) out.push_back(t);
  return out;
}

std::size_t Relation::edge_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::size_t TripleRelation::triple_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<std::array<State, 3>> TripleRelation::triples() const {
  std::vector<std::array<State, 3>> out;
  for (State s = 0; s < n_; ++s)
    for (State t = 0; t < n_; ++t)
      for (State u = 0; u < n_; ++u)
        if (has(s, t, u)) out.push_back({s, t, u});
  return out;
}

namespace {

State find_state(const std::vector<std::string>& states, const std::string& name) {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw ModelError("unknown state '" + name + "'");
  return static_cast<State>(it - states.begin());
}

void check_state_names(const std::vector<std::string>& states) {
  if (states.empty()) throw ModelError("model has no states");
  std::vector<std::string> sorted = states;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) throw ModelError("duplicate state '" + *dup + "'");
}

}  // namespace

TernaryModel::TernaryModel(Vocabulary v, std::vector<std::string> state_names)
    : vocab(std::move(v)), states(std::move(state_names)) {
  check_state_names(states);
  const std::size_t n = states.size();
  access.assign(vocab.agents().size(), Relation(n));
  tern.assign(vocab.agents().size() * vocab.constants().size(), TripleRelation(n));
  val.assign(n, std::vector<bool>(vocab.props().size(), false));
}

State TernaryModel::state(const std::string& name) const { return find_state(states, name); }

const Relation& TernaryModel::rel(const std::string& agent) const {
  int a = vocab.agent_index(agent);
  if (a < 0) throw ModelError("unknown agent '" + agent + "'");
  return access[a];
}

const TripleRelation& TernaryModel::triples(const std::string& agent,
                                            const std::string& c) const {
  int a = vocab.agent_index(agent);
  int k = vocab.constant_index(c);
  if (a < 0) throw ModelError("unknown agent '" + agent + "'");
  if (k < 0) throw ModelError("unknown constant '" + c + "'");
  return triples(static_cast<std::size_t>(a), static_cast<std::size_t>(k));
}

bool TernaryModel::holds(State s, const std::string& p) const {
  int k = vocab.prop_index(p);
  if (k < 0) throw ModelError("unknown proposition '" + p + "'");
  return val[s][k];
}

FOKripkeModel::FOKripkeModel(Vocabulary v, std::vector<std::string> state_names,
                             std::vector<std::string> domain_atoms)
    : vocab(std::move(v)), states(std::move(state_names)), domain(std::move(domain_atoms)) {
  check_state_names(states);
  if (domain.empty()) throw ModelError("FO model needs a non-empty domain");
  const std::size_t n = states.size();
  access.assign(vocab.agents().size(), Relation(n));
  val.assign(n, std::vector<bool>(vocab.props().size(), false));
  value.assign(vocab.constants().size(), std::vector<std::size_t>(n, 0));
}

State FOKripkeModel::state(const std::string& name) const { return find_state(states, name); }

const Relation& FOKripkeModel::rel(const std::string& agent) const {
  int a = vocab.agent_index(agent);
  if (a < 0) throw ModelError("unknown agent '" + agent + "'");
  return access[a];
}

bool FOKripkeModel::holds(State s, const std::string& p) const {
  int k = vocab.prop_index(p);
  if (k < 0) throw ModelError("unknown proposition '" + p + "'");
  return val[s][k];
}

void FOKripkeModel::check_assignment() const {
  if (value.size() != vocab.constants().size())
    throw ModelError("value table does not cover every constant");
  for (const auto& row : value) {
    if (row.size() != states.size())
      throw ModelError("value table does not cover every state");
    for (std::size_t d : row)
      if (d >= domain.size()) throw ModelError("value outside the domain");
  }
}

const char* to_string(Condition c) {
  switch (c) {
    case Condition::SYM: return "SYM";
    case Condition::INCL: return "INCL";
    case Condition::ATEUC: return "ATEUC";
  }
  return "?";
}

std::string describe(const Violation& v, const TernaryModel& m) {
  std::ostringstream os;
  os << to_string(v.condition) << " violated for " << v.agent << "," << v.constant << " at (";
  for (std::size_t k = 0; k < v.witness.size(); ++k)
    os << (k ? "," : "") << m.states[v.witness[k]];
  os << ")";
  return os.str();
}

std::vector<Violation> validate_ternary(const TernaryModel& m) {
  std::vector<Violation> out;
  const std::size_t n = m.size();
  const auto& agents = m.vocab.agents();
  const auto& consts = m.vocab.constants();
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const Relation& to = m.rel(a);
    for (std::size_t c = 0; c < consts.size(); ++c) {
      const TripleRelation& r = m.triples(a, c);
      auto report = [&](Condition cond, std::vector<State> w) {
        out.push_back({cond, agents[a], consts[c], std::move(w)});
      };
      for (State s = 0; s < n; ++s)
        for (State t = 0; t < n; ++t)
          for (State u = 0; u < n; ++u) {
            if (!r.has(s, t, u)) continue;
            bool mirrored = r.has(s, u, t);
            if (!mirrored) report(Condition::SYM, {s, t, u});
            // Remaining checks once per unordered pair {t, u}.
            if (t > u && mirrored) continue;
            if (!to.has(s, t) || !to.has(s, u)) report(Condition::INCL, {s, t, u});
            for (State v = 0; v < n; ++v)
              if (to.has(s, v) && !r.has(s, t, v) && !r.has(s, u, v))
                report(Condition::ATEUC, {s, t, u, v});
          }
    }
  }
  return out;
}

TernaryModel derive_ternary(const FOKripkeModel& f) {
  f.check_assignment();
  TernaryModel m(f.vocab, f.states);
  m.access = f.access;
  m.val = f.val;
  const std::size_t n = f.size();
  for (std::size_t a = 0; a < f.vocab.agents().size(); ++a) {
    const Relation& to = f.access[a];
    for (std::size_t c = 0; c < f.vocab.constants().size(); ++c) {
      TripleRelation& r = m.triples(a, c);
      for (State s = 0; s < n; ++s)
        for (State t = 0; t < n; ++t)
          for (State u = 0; u < n; ++u)
            if (to.has(s, t) && to.has(s, u) && f.value[c][t] != f.value[c][u]) r.set(s, t, u);
    }
  }
  return m;
}

std::size_t close_sym(TernaryModel& m) {
  std::size_t added = 0;
  for (auto& r : m.tern) {
    const std::size_t n = r.size();
    for (State s = 0; s < n; ++s)
      for (State t = 0; t < n; ++t)
        for (State u = 0; u < n; ++u)
          if (r.has(s, t, u) && !r.has(s, u, t)) {
            r.set(s, u, t);
            ++added;
          }
  }
  return added;
}

void repair_ateuc(TernaryModel& m) {
  const std::size_t n = m.size();
  for (std::size_t a = 0; a < m.vocab.agents().size(); ++a) {
    const Relation& to = m.rel(a);
    for (std::size_t c = 0; c < m.vocab.constants().size(); ++c) {
      TripleRelation& r = m.triples(a, c);
      // Each pass either adds a triple or terminates; the INCL-compatible
      // triple space is finite.
      bool changed = true;
      while (changed) {
        changed = false;
        for (State s = 0; s < n; ++s)
          for (State t = 0; t < n; ++t)
            for (State u = t; u < n; ++u) {
              if (!r.has(s, t, u)) continue;
              for (State v = 0; v < n; ++v) {
                if (!to.has(s, v) || r.has(s, t, v) || r.has(s, u, v)) continue;
                // (s,t,v) <= (s,u,v) lexicographically since t <= u.
                r.set_sym(s, t, v);
                changed = true;
              }
            }
      }
    }
  }
}

void GenParams::check() const {
  if (num_states < 1) throw ModelError("num_states must be at least 1");
  if (value_count < 1) throw ModelError("value_count must be at least 1");
  if (edge_density < 0.0 || edge_density > 1.0)
    throw ModelError("edge_density must lie in [0, 1]");
  if (triple_density < 0.0 || triple_density > 1.0)
    throw ModelError("triple_density must lie in [0, 1]");
}

namespace {

std::vector<std::string> default_state_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back("s" + std::to_string(k));
  return out;
}

void random_frame(Rng& rng, std::size_t n, double density, std::vector<Relation>& access,
                  std::vector<std::vector<bool>>& val) {
  for (auto& r : access)
    for (State s = 0; s < n; ++s)
      for (State t = 0; t < n; ++t)
        if (rng.coin(density)) r.set(s, t);
  for (auto& row : val)
    for (std::size_t p = 0; p < row.size(); ++p) row[p] = rng.coin(0.5);
}

}  // namespace

FOKripkeModel generate_fo(const GenParams& p) {
  p.check();
  Rng rng(p.seed);
  std::vector<std::string> dom;
  for (std::size_t k = 0; k < p.value_count; ++k) dom.push_back(std::to_string(k + 1));
  FOKripkeModel f(p.vocab, default_state_names(p.num_states), dom);
  random_frame(rng, p.num_states, p.edge_density, f.access, f.val);
  for (auto& row : f.value)
    for (auto& d : row) d = rng.below(p.value_count);
  return f;
}

std::pair<FOKripkeModel, TernaryModel> generate_value_induced(const GenParams& p) {
  FOKripkeModel f = generate_fo(p);
  TernaryModel m = derive_ternary(f);
  return {std::move(f), std::move(m)};
}

TernaryModel generate_direct(const GenParams& p) {
  p.check();
  Rng rng(p.seed);
  const std::size_t n = p.num_states;
  TernaryModel m(p.vocab, default_state_names(n));
  random_frame(rng, n, p.edge_density, m.access, m.val);
  for (std::size_t a = 0; a < p.vocab.agents().size(); ++a) {
    const Relation& to = m.rel(a);
    for (std::size_t c = 0; c < p.vocab.constants().size(); ++c) {
      TripleRelation& r = m.triples(a, c);
      for (State s = 0; s < n; ++s)
        for (State t = 0; t < n; ++t)
          for (State u = t; u < n; ++u)
            if (to.has(s, t) && to.has(s, u) && rng.coin(p.triple_density)) r.set_sym(s, t, u);
    }
  }
  repair_ateuc(m);
  return m;
}

}  // namespace kvlog
