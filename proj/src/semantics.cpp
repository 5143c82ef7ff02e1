#include "kvlog/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <tuple>

#include "kvlog/syntax.hpp"

namespace kvlog {

CompiledFormula::CompiledFormula(const Formula& f, const Vocabulary& vocab, Target target)
    : target_(target) {
  if (target == Target::FO && !in_language(f, Language::ELKvR))
    throw FormulaError("only ELKvR formulas are evaluated on FO models: " + print(f));
  check_vocabulary(f, vocab);
  std::unordered_map<const void*, int> memo;
  add(f, vocab, memo);
}

int CompiledFormula::add(const Formula& f, const Vocabulary& vocab,
                         std::unordered_map<const void*, int>& memo) {
  if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
  Node n{f.op()};
  if (f.is(Op::Prop)) n.prop = vocab.prop_index(f.name());
  if (!f.agent().empty()) n.agent = vocab.agent_index(f.agent());
  if (!f.constant().empty()) n.constant = vocab.constant_index(f.constant());
  if (f.op() == Op::KvCond && target_ == Target::Ternary)
    throw FormulaError("Kv formulas are evaluated on FO models, not ternary models");
  if ((f.op() == Op::BoxU || f.op() == Op::BoxB) && target_ == Target::FO)
    throw FormulaError("ternary modalities are evaluated on ternary models");
  if (f.arity() > 0) n.lhs = add(f.child(0), vocab, memo);
  if (f.arity() > 1) n.rhs = add(f.child(1), vocab, memo);
  nodes_.push_back(n);
  int idx = static_cast<int>(nodes_.size()) - 1;
  memo.emplace(f.id(), idx);
  return idx;
}

template <typename Model, typename ModalFn>
std::vector<bool> CompiledFormula::run(const Model& m, ModalFn&& modal) const {
  const std::size_t n = m.size();
  std::vector<std::vector<bool>> ext(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& nd = nodes_[k];
    std::vector<bool>& out = ext[k];
    out.assign(n, false);
    switch (nd.op) {
      case Op::Top: out.assign(n, true); break;
      case Op::Prop:
        for (State s = 0; s < n; ++s) out[s] = m.val[s][nd.prop];
        break;
      case Op::Neg:
        for (State s = 0; s < n; ++s) out[s] = !ext[nd.lhs][s];
        break;
      case Op::And:
        for (State s = 0; s < n; ++s) out[s] = ext[nd.lhs][s] && ext[nd.rhs][s];
        break;
      case Op::Box: {
        const Relation& r = m.access[nd.agent];
        const auto& x = ext[nd.lhs];
        for (State s = 0; s < n; ++s) {
          bool all = true;
          for (State t = 0; t < n && all; ++t)
            if (r.has(s, t) && !x[t]) all = false;
          out[s] = all;
        }
        break;
      }
      default: modal(nd, ext, out); break;
    }
  }
  return ext.back();
}

std::vector<bool> CompiledFormula::extension(const TernaryModel& m) const {
  if (target_ != Target::Ternary) throw FormulaError("formula was compiled for FO models");
  const std::size_t n = m.size();
  return run(m, [&](const Node& nd, const std::vector<std::vector<bool>>& ext,
                    std::vector<bool>& out) {
    const TripleRelation& r = m.triples(nd.agent, nd.constant);
    // [i]^c(x, y) fails at s iff some s R t u has t |= ~x and u |= ~y.
    const auto& x = ext[nd.lhs];
    const auto& y = nd.op == Op::BoxB ? ext[nd.rhs] : ext[nd.lhs];
    for (State s = 0; s < n; ++s) {
      bool witness = false;
      for (State t = 0; t < n && !witness; ++t) {
        if (x[t]) continue;
        for (State u = 0; u < n; ++u)
          if (r.has(s, t, u) && !y[u]) {
            witness = true;
            break;
          }
      }
      out[s] = !witness;
    }
  });
}

std::vector<bool> CompiledFormula::extension(const FOKripkeModel& m) const {
  if (target_ != Target::FO) throw FormulaError("formula was compiled for ternary models");
  const std::size_t n = m.size();
  return run(m, [&](const Node& nd, const std::vector<std::vector<bool>>& ext,
                    std::vector<bool>& out) {
    // Kv_i(x, c): all x-successors agree on the value of c.
    const Relation& to = m.access[nd.agent];
    const auto& x = ext[nd.lhs];
    const auto& values = m.value[nd.constant];
    for (State s = 0; s < n; ++s) {
      bool agree = true;
      std::optional<std::size_t> seen;
      for (State t = 0; t < n && agree; ++t) {
        if (!to.has(s, t) || !x[t]) continue;
        if (!seen) seen = values[t];
        else if (*seen != values[t]) agree = false;
      }
      out[s] = agree;
    }
  });
}

bool eval_fo(const FOKripkeModel& m, State s, const Formula& f) {
  if (s >= m.size()) throw ModelError("state index out of range");
  m.check_assignment();
  return CompiledFormula(f, m.vocab, CompiledFormula::Target::FO).extension(m)[s];
}

bool eval_ternary(const TernaryModel& m, State s, const Formula& f) {
  if (s >= m.size()) throw ModelError("state index out of range");
  return CompiledFormula(f, m.vocab, CompiledFormula::Target::Ternary).extension(m)[s];
}

bool valid_on(const TernaryModel& m, const Formula& f) {
  auto ext = CompiledFormula(f, m.vocab, CompiledFormula::Target::Ternary).extension(m);
  return std::all_of(ext.begin(), ext.end(), [](bool b) { return b; });
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::uint64_t sat_pow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < e; ++k) r = sat_mul(r, base);
  return r;
}

// The symbols a search ranges over.
struct SearchShape {
  std::vector<std::string> agents;
  std::vector<std::string> props;
  // Constants paired with each agent in some ternary modality.
  std::vector<std::vector<std::string>> constants_of;
};

SearchShape shape_of(const Formula& f) {
  Symbols syms = symbols_of(f);
  SearchShape sh;
  sh.agents.assign(syms.agents.begin(), syms.agents.end());
  sh.props.assign(syms.props.begin(), syms.props.end());
  std::map<std::string, std::set<std::string>> pairs;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.is(Op::BoxU) || g.is(Op::BoxB)) pairs[g.agent()].insert(g.constant());
    for (std::size_t k = 0; k < g.arity(); ++k) stack.push_back(g.child(k));
  }
  for (const auto& a : sh.agents) {
    const auto& cs = pairs[a];
    sh.constants_of.emplace_back(cs.begin(), cs.end());
  }
  return sh;
}

// Unordered pairs {t, u} (t <= u) of an n-state model, indexed densely.
struct PairIndex {
  std::vector<std::pair<State, State>> pairs;
  explicit PairIndex(std::size_t n) {
    for (State t = 0; t < n; ++t)
      for (State u = t; u < n; ++u) pairs.emplace_back(t, u);
  }
};

// For each successor mask, the ATEUC-closed sets of pairs inside the mask,
// as bitmasks over PairIndex.
class LocalTriples {
 public:
  explicit LocalTriples(std::size_t n) : n_(n), index_(n), by_mask_(std::size_t{1} << n) {
    for (std::uint64_t mask = 0; mask < by_mask_.size(); ++mask) {
      std::vector<std::size_t> inside;
      for (std::size_t k = 0; k < index_.pairs.size(); ++k) {
        auto [t, u] = index_.pairs[k];
        if ((mask >> t & 1) && (mask >> u & 1)) inside.push_back(k);
      }
      auto& out = by_mask_[mask];
      for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << inside.size()); ++sub) {
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < inside.size(); ++k)
          if (sub >> k & 1) bits |= std::uint64_t{1} << inside[k];
        if (ateuc_ok(mask, bits)) out.push_back(bits);
      }
    }
  }

  const std::vector<std::uint64_t>& configs(std::uint64_t mask) const { return by_mask_[mask]; }
  const PairIndex& index() const { return index_; }

 private:
  bool has(std::uint64_t bits, State t, State u) const {
    for (std::size_t k = 0; k < index_.pairs.size(); ++k)
      if (bits >> k & 1) {
        auto [a, b] = index_.pairs[k];
        if ((a == t && b == u) || (a == u && b == t)) return true;
      }
    return false;
  }
  bool ateuc_ok(std::uint64_t mask, std::uint64_t bits) const {
    for (std::size_t k = 0; k < index_.pairs.size(); ++k) {
      if (!(bits >> k & 1)) continue;
      auto [t, u] = index_.pairs[k];
      for (State v = 0; v < n_; ++v)
        if ((mask >> v & 1) && !has(bits, t, v) && !has(bits, u, v)) return false;
    }
    return true;
  }

  std::size_t n_;
  PairIndex index_;
  std::vector<std::vector<std::uint64_t>> by_mask_;
};

std::uint64_t frames_per_valuation(const SearchShape& sh, const LocalTriples& local,
                                   std::size_t n) {
  std::uint64_t frames = 1;
  for (std::size_t a = 0; a < sh.agents.size(); ++a) {
    std::uint64_t per_state = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
      per_state = sat_add(per_state,
                          sat_pow(local.configs(mask).size(), sh.constants_of[a].size()));
    frames = sat_mul(frames, sat_pow(per_state, n));
  }
  return frames;
}

struct Slots {
  // Edge slots: (agent, state) -> mask. Triple slots: (agent, constant, state).
  std::vector<std::pair<std::size_t, State>> edges;
  std::vector<std::tuple<std::size_t, std::size_t, State>> triples;
};

// Walks every frame for one valuation in enumeration order.
class FrameWalker {
 public:
  FrameWalker(const SearchShape& sh, const LocalTriples& local, std::size_t n,
              const std::vector<int>& agent_idx,
              const std::vector<std::vector<int>>& const_idx, TernaryModel& m)
      : sh_(sh), local_(local), n_(n), agent_idx_(agent_idx), const_idx_(const_idx), m_(m) {
    for (std::size_t a = 0; a < sh.agents.size(); ++a)
      for (State s = 0; s < n; ++s) slots_.edges.emplace_back(a, s);
    for (std::size_t a = 0; a < sh.agents.size(); ++a)
      for (std::size_t c = 0; c < sh.constants_of[a].size(); ++c)
        for (State s = 0; s < n; ++s) slots_.triples.emplace_back(a, c, s);
    masks_.assign(slots_.edges.size(), 0);
  }

  // visit() returns false to stop. Returns false if stopped.
  template <typename Visit>
  bool walk(Visit&& visit) {
    return edge_level(0, visit);
  }

 private:
  template <typename Visit>
  bool edge_level(std::size_t k, Visit& visit) {
    if (k == slots_.edges.size()) return triple_level(0, visit);
    auto [a, s] = slots_.edges[k];
    Relation& r = m_.access[agent_idx_[a]];
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n_); ++mask) {
      masks_[k] = mask;
      for (State t = 0; t < n_; ++t) r.set(s, t, mask >> t & 1);
      if (!edge_level(k + 1, visit)) return false;
    }
    return true;
  }

  template <typename Visit>
  bool triple_level(std::size_t k, Visit& visit) {
    if (k == slots_.triples.size()) return visit();
    auto [a, c, s] = slots_.triples[k];
    std::uint64_t mask = masks_[a * n_ + s];
    TripleRelation& r = m_.triples(agent_idx_[a], const_idx_[a][c]);
    const auto& pairs = local_.index().pairs;
    for (std::uint64_t bits : local_.configs(mask)) {
      for (std::size_t p = 0; p < pairs.size(); ++p)
        r.set_sym(s, pairs[p].first, pairs[p].second, bits >> p & 1);
      if (!triple_level(k + 1, visit)) return false;
    }
    return true;
  }

  const SearchShape& sh_;
  const LocalTriples& local_;
  std::size_t n_;
  const std::vector<int>& agent_idx_;
  const std::vector<std::vector<int>>& const_idx_;
  TernaryModel& m_;
  Slots slots_;
  std::vector<std::uint64_t> masks_;
};

std::vector<std::string> search_state_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back("w" + std::to_string(k));
  return out;
}

}  // namespace

std::uint64_t countermodel_space(const Formula& f, std::size_t n) {
  SearchShape sh = shape_of(f);
  LocalTriples local(n);
  std::uint64_t vals = sat_pow(2, n * sh.props.size());
  return sat_mul(vals, frames_per_valuation(sh, local, n));
}

std::optional<Countermodel> find_countermodel(const Formula& f, std::size_t max_states,
                                              const Vocabulary& vocab, SearchOptions opts) {
  if (max_states < 1) throw ModelError("max_states must be at least 1");
  CompiledFormula compiled(f, vocab, CompiledFormula::Target::Ternary);
  SearchShape sh = shape_of(f);
  std::vector<int> agent_idx;
  std::vector<std::vector<int>> const_idx;
  for (std::size_t a = 0; a < sh.agents.size(); ++a) {
    agent_idx.push_back(vocab.agent_index(sh.agents[a]));
    const_idx.emplace_back();
    for (const auto& c : sh.constants_of[a]) const_idx.back().push_back(vocab.constant_index(c));
  }
  std::vector<int> prop_idx;
  for (const auto& p : sh.props) prop_idx.push_back(vocab.prop_index(p));
  const unsigned workers = std::max(1u, opts.workers);

  std::uint64_t base = 0;
  for (std::size_t n = 1; n <= max_states; ++n) {
    if (n > 6) throw BoundExceeded("countermodel search supports at most 6 states");
    LocalTriples local(n);
    const std::uint64_t frames = frames_per_valuation(sh, local, n);
    const std::uint64_t vals = std::uint64_t{1} << (n * sh.props.size());
    const std::uint64_t space = sat_mul(vals, frames);

    std::atomic<std::uint64_t> best{kSaturated};
    std::mutex mu;
    std::optional<Countermodel> found;

    auto work = [&](unsigned w) {
      TernaryModel m(vocab, search_state_names(n));
      FrameWalker walker(sh, local, n, agent_idx, const_idx, m);
      for (std::uint64_t v = w; v < vals; v += workers) {
        std::uint64_t rank = sat_add(base, sat_mul(v, frames));
        if (rank >= opts.budget || rank >= best.load()) return;
        for (State s = 0; s < n; ++s)
          for (std::size_t p = 0; p < prop_idx.size(); ++p)
            m.val[s][prop_idx[p]] = (v >> (s * prop_idx.size() + p)) & 1;
        bool hit = false;
        walker.walk([&]() {
          if (rank >= opts.budget || rank >= best.load()) return false;
          auto ext = compiled.extension(m);
          for (State s = 0; s < n; ++s)
            if (!ext[s]) {
              std::lock_guard<std::mutex> lock(mu);
              if (rank < best.load()) {
                best = rank;
                found = Countermodel{m, s, rank};
              }
              hit = true;
              return false;
            }
          ++rank;
          return true;
        });
        if (hit) return;
      }
    };

    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    if (found) return found;
    base = sat_add(base, space);
    if (base > opts.budget)
      throw BoundExceeded("enumeration budget of " + std::to_string(opts.budget) +
                          " models exceeded at " + std::to_string(n) + " states");
  }
  return std::nullopt;
}

}  // namespace kvlog
