#include "kvlog/model_io.hpp"

#include <algorithm>
#include <fstream>

namespace kvlog {

using nlohmann::json;

const TernaryModel& LoadedModel::ternary() const {
  if (!is_ternary()) throw ModelError("expected a ternary model, got an FO model");
  return std::get<TernaryModel>(model);
}

const FOKripkeModel& LoadedModel::fo() const {
  if (is_ternary()) throw ModelError("expected an FO model, got a ternary model");
  return std::get<FOKripkeModel>(model);
}

json vocab_to_json(const Vocabulary& v) {
  return json{{"agents", v.agents()}, {"props", v.props()}, {"constants", v.constants()}};
}

Vocabulary vocab_from_json(const json& j) {
  try {
    return Vocabulary(j.at("agents").get<std::vector<std::string>>(),
                      j.at("props").get<std::vector<std::string>>(),
                      j.at("constants").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw ModelError(std::string("bad vocab: ") + e.what());
  } catch (const FormulaError& e) {
    throw ModelError(std::string("bad vocab: ") + e.what());
  }
}

namespace {

json common_json(const Vocabulary& vocab, const std::vector<std::string>& states,
                 const std::vector<Relation>& access, const std::vector<std::vector<bool>>& val) {
  json j;
  j["vocab"] = vocab_to_json(vocab);
  j["states"] = states;
  json rel = json::object();
  for (std::size_t a = 0; a < vocab.agents().size(); ++a) {
    json edges = json::array();
    for (State s = 0; s < states.size(); ++s)
      for (State t : access[a].successors(s)) edges.push_back({states[s], states[t]});
    rel[vocab.agents()[a]] = edges;
  }
  j["rel"] = rel;
  json v = json::object();
  for (State s = 0; s < states.size(); ++s) {
    json props = json::array();
    for (std::size_t p = 0; p < vocab.props().size(); ++p)
      if (val[s][p]) props.push_back(vocab.props()[p]);
    v[states[s]] = props;
  }
  j["val"] = v;
  return j;
}

std::pair<std::string, std::string> split_key(const std::string& key) {
  auto comma = key.find(',');
  if (comma == std::string::npos) throw ModelError("key '" + key + "' must be 'x,y'");
  return {key.substr(0, comma), key.substr(comma + 1)};
}

std::string atom_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ModelError("value atoms must be strings or integers");
}

template <typename Model>
void read_common(const json& j, Model& m) {
  if (j.contains("rel")) {
    for (const auto& [agent, edges] : j.at("rel").items()) {
      int a = m.vocab.agent_index(agent);
      if (a < 0) throw ModelError("unknown agent '" + agent + "' in rel");
      for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2) throw ModelError("edges must be [s, t] pairs");
        m.access[a].set(m.state(e[0].template get<std::string>()), m.state(e[1].template get<std::string>()));
      }
    }
  }
  if (j.contains("val")) {
    for (const auto& [state, props] : j.at("val").items()) {
      State s = m.state(state);
      for (const auto& p : props) {
        int k = m.vocab.prop_index(p.template get<std::string>());
        if (k < 0) throw ModelError("unknown proposition '" + p.template get<std::string>() + "' in val");
        m.val[s][k] = true;
      }
    }
  }
}

}  // namespace

json to_json(const TernaryModel& m) {
  json j = common_json(m.vocab, m.states, m.access, m.val);
  j["kind"] = "ternary";
  json tern = json::object();
  for (std::size_t a = 0; a < m.vocab.agents().size(); ++a)
    for (std::size_t c = 0; c < m.vocab.constants().size(); ++c) {
      json list = json::array();
      for (const auto& tr : m.triples(a, c).triples())
        list.push_back({m.states[tr[0]], m.states[tr[1]], m.states[tr[2]]});
      tern[m.vocab.agents()[a] + "," + m.vocab.constants()[c]] = list;
    }
  j["tern"] = tern;
  return j;
}

json to_json(const FOKripkeModel& m) {
  json j = common_json(m.vocab, m.states, m.access, m.val);
  j["kind"] = "fo";
  j["domain"] = m.domain;
  json vc = json::object();
  for (std::size_t c = 0; c < m.vocab.constants().size(); ++c)
    for (State s = 0; s < m.size(); ++s)
      vc[m.vocab.constants()[c] + "," + m.states[s]] = m.domain[m.value[c][s]];
  j["vc"] = vc;
  return j;
}

LoadedModel model_from_json(const json& j) {
  try {
    Vocabulary vocab = vocab_from_json(j.at("vocab"));
    auto states = j.at("states").get<std::vector<std::string>>();
    std::string kind = j.value("kind", "ternary");
    if (kind == "ternary") {
      TernaryModel m(vocab, states);
      read_common(j, m);
      if (j.contains("tern")) {
        for (const auto& [key, list] : j.at("tern").items()) {
          auto [agent, c] = split_key(key);
          int a = vocab.agent_index(agent);
          int k = vocab.constant_index(c);
          if (a < 0) throw ModelError("unknown agent '" + agent + "' in tern");
          if (k < 0) throw ModelError("unknown constant '" + c + "' in tern");
          for (const auto& tr : list) {
            if (!tr.is_array() || tr.size() != 3) throw ModelError("triples must be [s, t, u]");
            m.triples(a, k).set(m.state(tr[0].get<std::string>()),
                                m.state(tr[1].get<std::string>()),
                                m.state(tr[2].get<std::string>()));
          }
        }
      }
      std::size_t added = close_sym(m);
      return {std::move(m), added};
    }
    if (kind == "fo") {
      std::vector<std::string> domain;
      if (j.contains("domain"))
        for (const auto& d : j.at("domain")) domain.push_back(atom_text(d));
      const json& vc = j.at("vc");
      for (const auto& [key, v] : vc.items()) {
        std::string atom = atom_text(v);
        if (std::find(domain.begin(), domain.end(), atom) == domain.end()) {
          if (j.contains("domain")) throw ModelError("value '" + atom + "' not in domain");
          domain.push_back(atom);
        }
      }
      FOKripkeModel m(vocab, states, domain);
      read_common(j, m);
      std::vector<std::vector<bool>> seen(vocab.constants().size(),
                                          std::vector<bool>(states.size(), false));
      for (const auto& [key, v] : vc.items()) {
        auto [c, state] = split_key(key);
        int k = vocab.constant_index(c);
        if (k < 0) throw ModelError("unknown constant '" + c + "' in vc");
        State s = m.state(state);
        std::string atom = atom_text(v);
        m.value[k][s] = static_cast<std::size_t>(
            std::find(domain.begin(), domain.end(), atom) - domain.begin());
        seen[k][s] = true;
      }
      for (std::size_t k = 0; k < seen.size(); ++k)
        for (State s = 0; s < states.size(); ++s)
          if (!seen[k][s])
            throw ModelError("vc has no value for (" + vocab.constants()[k] + ", " +
                             states[s] + ")");
      return {std::move(m), 0};
    }
    throw ModelError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  }
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ModelError("'" + path + "': " + e.what());
  }
  return model_from_json(j);
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace kvlog
