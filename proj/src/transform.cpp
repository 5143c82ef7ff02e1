#include "kvlog/transform.hpp"

#include <algorithm>
#include <numeric>

namespace kvlog {

namespace {

void require_valid(const TernaryModel& m) {
  auto v = validate_ternary(m);
  if (!v.empty()) throw ModelError("invalid ternary model: " + describe(v.front(), m));
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : up_(n) { std::iota(up_.begin(), up_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (up_[x] != x) x = up_[x] = up_[up_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) up_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> up_;
};

}  // namespace

TernaryModel split(const TernaryModel& m) {
  require_valid(m);
  const std::size_t n = m.size();
  std::vector<std::string> names;
  for (State u = 0; u < n; ++u)
    for (int x = 0; x < 2; ++x) names.push_back(m.states[u] + "." + std::to_string(x));
  TernaryModel out(m.vocab, names);
  for (State u = 0; u < 2 * n; ++u) out.val[u] = m.val[u / 2];
  for (std::size_t a = 0; a < m.access.size(); ++a)
    for (State u = 0; u < 2 * n; ++u)
      for (State v = 0; v < 2 * n; ++v)
        if (m.access[a].has(u / 2, v / 2)) out.access[a].set(u, v);
  for (std::size_t k = 0; k < m.tern.size(); ++k)
    for (State u = 0; u < 2 * n; ++u)
      for (State v = 0; v < 2 * n; ++v)
        for (State w = 0; w < 2 * n; ++w)
          if (v != w && m.tern[k].has(u / 2, v / 2, w / 2)) out.tern[k].set(u, v, w);
  return out;
}

TreeShape tree_shape(const TernaryModel& m) {
  const std::size_t n = m.size();
  TreeShape t;
  t.parent.assign(n, 0);
  t.agent.assign(n, 0);
  t.depth.assign(n, 0);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t a = 0; a < m.access.size(); ++a)
    for (State s = 0; s < n; ++s)
      for (State u : m.access[a].successors(s)) {
        ++indegree[u];
        t.parent[u] = s;
        t.agent[u] = a;
      }
  if (indegree[0] != 0) throw ModelError("tree root has a predecessor");
  for (State u = 1; u < n; ++u)
    if (indegree[u] != 1)
      throw ModelError("state '" + m.states[u] + "' has " + std::to_string(indegree[u]) +
                       " predecessors");
  // Every state must reach the root; this also rules out cycles.
  for (State u = 1; u < n; ++u) {
    State w = u;
    std::size_t steps = 0;
    while (w != 0) {
      w = t.parent[w];
      if (++steps > n) throw ModelError("state '" + m.states[u] + "' is not below the root");
    }
    t.depth[u] = steps;
  }
  return t;
}

TernaryModel unravel(const TernaryModel& m, State root, std::size_t depth) {
  require_valid(m);
  if (root >= m.size()) throw ModelError("root out of range");
  struct Node {
    State base;
    std::size_t parent;
    std::size_t agent;
    std::size_t depth;
    std::string name;
  };
  std::vector<Node> nodes{{root, 0, 0, 0, m.states[root]}};
  std::vector<std::vector<std::size_t>> children(1);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].depth == depth) continue;
    for (std::size_t a = 0; a < m.access.size(); ++a)
      for (State t : m.access[a].successors(nodes[k].base)) {
        children[k].push_back(nodes.size());
        nodes.push_back({t, k, a, nodes[k].depth + 1,
                         nodes[k].name + "-" + m.vocab.agents()[a] + "-" + m.states[t]});
        children.emplace_back();
      }
  }
  std::vector<std::string> names;
  for (const auto& nd : nodes) names.push_back(nd.name);
  TernaryModel out(m.vocab, names);
  const std::size_t nc = m.vocab.constants().size();
  for (std::size_t w = 0; w < nodes.size(); ++w) {
    out.val[w] = m.val[nodes[w].base];
    for (std::size_t u : children[w]) out.access[nodes[u].agent].set(w, u);
    for (std::size_t u : children[w])
      for (std::size_t v : children[w]) {
        if (nodes[u].agent != nodes[v].agent) continue;
        const std::size_t a = nodes[u].agent;
        for (std::size_t c = 0; c < nc; ++c)
          if (m.triples(a, c).has(nodes[w].base, nodes[u].base, nodes[v].base))
            out.triples(a, c).set(w, u, v);
      }
  }
  tree_shape(out);
  return out;
}

FOKripkeModel assign_values(const TernaryModel& tree) {
  require_valid(tree);
  TreeShape shape = tree_shape(tree);
  const std::size_t n = tree.size();
  const std::size_t nc = tree.vocab.constants().size();
  auto siblings = [&](State u, State v) {
    return u != 0 && v != 0 && shape.parent[u] == shape.parent[v] &&
           shape.agent[u] == shape.agent[v];
  };

  std::vector<std::vector<std::size_t>> cls(nc, std::vector<std::size_t>(n));
  for (std::size_t c = 0; c < nc; ++c) {
    UnionFind uf(n);
    for (State u = 1; u < n; ++u)
      for (State v = u + 1; v < n; ++v)
        if (siblings(u, v) &&
            !tree.triples(shape.agent[u], c).has(shape.parent[u], u, v))
          uf.unite(u, v);
    for (State u = 0; u < n; ++u) cls[c][u] = uf.find(u);
    // Transitivity: members of one class must be directly related.
    for (State u = 0; u < n; ++u)
      for (State v = u + 1; v < n; ++v) {
        if (cls[c][u] != cls[c][v]) continue;
        if (!siblings(u, v) || tree.triples(shape.agent[u], c).has(shape.parent[u], u, v))
          throw ModelError("value equivalence for " + tree.vocab.constants()[c] +
                           " is not transitive at (" + tree.states[u] + ", " +
                           tree.states[v] + ")");
      }
    // Distinct values exactly on related siblings.
    for (State u = 1; u < n; ++u)
      for (State v = 1; v < n; ++v)
        if (siblings(u, v) && tree.triples(shape.agent[u], c).has(shape.parent[u], u, v) &&
            cls[c][u] == cls[c][v])
          throw ModelError("ternary triple (" + tree.states[shape.parent[u]] + ", " +
                           tree.states[u] + ", " + tree.states[v] +
                           ") relates states with one value");
  }

  // Atom of a class: constant plus the least member name.
  std::vector<std::vector<std::string>> atom(nc, std::vector<std::string>(n));
  std::vector<std::string> domain;
  for (std::size_t c = 0; c < nc; ++c) {
    std::vector<std::string> least(n);
    for (State u = 0; u < n; ++u) {
      auto& l = least[cls[c][u]];
      if (l.empty() || tree.states[u] < l) l = tree.states[u];
    }
    for (State u = 0; u < n; ++u) {
      atom[c][u] = tree.vocab.constants()[c] + ":" + least[cls[c][u]];
      if (std::find(domain.begin(), domain.end(), atom[c][u]) == domain.end())
        domain.push_back(atom[c][u]);
    }
  }
  std::sort(domain.begin(), domain.end());
  FOKripkeModel out(tree.vocab, tree.states, domain);
  out.access = tree.access;
  out.val = tree.val;
  for (std::size_t c = 0; c < nc; ++c)
    for (State u = 0; u < n; ++u)
      out.value[c][u] = static_cast<std::size_t>(
          std::lower_bound(domain.begin(), domain.end(), atom[c][u]) - domain.begin());
  return out;
}

FOConversion to_fo(const TernaryModel& m, State s, std::size_t depth) {
  if (s >= m.size()) throw ModelError("state out of range");
  return {assign_values(unravel(split(m), 2 * s, depth)), 0};
}

}  // namespace kvlog
