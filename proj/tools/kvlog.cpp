// kvlog: command-line front end.
//
// Exit status: 0 success/true/accepted, 1 false/rejected/finding,
// 2 usage or input error, 3 countermodel search budget exhausted.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kvlog/bisim.hpp"
#include "kvlog/formula.hpp"
#include "kvlog/model_io.hpp"
#include "kvlog/models.hpp"
#include "kvlog/proof.hpp"
#include "kvlog/semantics.hpp"
#include "kvlog/syntax.hpp"
#include "kvlog/transform.hpp"

using nlohmann::json;
using namespace kvlog;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_json = false;

void emit(const json& j, const std::string& text) {
  if (g_json)
    std::cout << j.dump() << "\n";
  else
    std::cout << text << "\n";
}

json languages_json(const Formula& f) {
  json out = json::array();
  for (Language l : language_of(f)) out.push_back(to_string(l));
  return out;
}

Vocabulary vocab_for(const Formula& f) {
  Symbols s = symbols_of(f);
  auto or_default = [](const std::set<std::string>& xs, const char* d) {
    return xs.empty() ? std::vector<std::string>{d} : std::vector<std::string>(xs.begin(), xs.end());
  };
  return Vocabulary(or_default(s.agents, "a"), or_default(s.props, "p"),
                    or_default(s.constants, "c"));
}

State state_of(const LoadedModel& m, const std::string& name) {
  return m.is_ternary() ? m.ternary().state(name) : m.fo().state(name);
}

const Vocabulary& vocab_of(const LoadedModel& m) {
  return m.is_ternary() ? m.ternary().vocab : m.fo().vocab;
}

bool eval_any(const LoadedModel& m, State s, const Formula& f) {
  return m.is_ternary() ? eval_ternary(m.ternary(), s, f) : eval_fo(m.fo(), s, f);
}

std::string read_text(const std::string& arg) {
  std::ifstream in(arg);
  if (!in) return arg;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GenParams gen_params(const json& j) {
  GenParams p{vocab_from_json(j.at("vocab"))};
  p.num_states = j.value("num_states", p.num_states);
  p.edge_density = j.value("edge_density", p.edge_density);
  p.value_count = j.value("value_count", p.value_count);
  p.seed = j.value("seed", p.seed);
  p.triple_density = j.value("triple_density", p.triple_density);
  p.check();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowing-value modal logic toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string formula_text, model_path, model2_path, state_name, state2_name, dir, to,
      system, script, kind, params_arg, in_path, out_path, root_name;
  std::size_t max_states = 3, fuzz_states = 5, depth = 0, trials = 100, budget = 50'000'000, instances = 3;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool raw = false, as_ternary = false;

  auto add_json = [&](CLI::App* sc) { sc->add_flag("--json", g_json, "Machine-readable output"); };

  auto* parse_cmd = app.add_subcommand("parse", "Parse and print a formula");
  parse_cmd->add_option("formula", formula_text)->required();
  parse_cmd->add_flag("--raw", raw, "Print without resugaring derived connectives");
  add_json(parse_cmd);

  auto* check_cmd = app.add_subcommand("check", "Evaluate a formula at a state");
  check_cmd->add_option("model", model_path)->required();
  check_cmd->add_option("state", state_name)->required();
  check_cmd->add_option("formula", formula_text)->required();
  add_json(check_cmd);

  auto* valid_cmd = app.add_subcommand("valid", "Truth at every state of a model");
  valid_cmd->add_option("model", model_path)->required();
  valid_cmd->add_option("formula", formula_text)->required();
  add_json(valid_cmd);

  auto* refute_cmd = app.add_subcommand("refute", "Search for a ternary countermodel");
  refute_cmd->add_option("formula", formula_text)->required();
  refute_cmd->add_option("--max-states", max_states)->check(CLI::Range(1, 6));
  refute_cmd->add_option("--budget", budget)->check(CLI::PositiveNumber);
  refute_cmd->add_option("--workers", workers)->check(CLI::Range(1, 256));
  refute_cmd->add_option("--out", out_path, "Also write the countermodel here");
  add_json(refute_cmd);

  auto* translate_cmd = app.add_subcommand("translate", "Translate between ELKvR and MLKvR");
  translate_cmd->add_option("--dir", dir)->required()->check(CLI::IsMember({"elkv2ml", "ml2elkv"}));
  translate_cmd->add_option("formula", formula_text)->required();
  add_json(translate_cmd);

  auto* reduce_cmd = app.add_subcommand("reduce", "Eliminate binary modalities");
  reduce_cmd->add_option("formula", formula_text)->required();
  add_json(reduce_cmd);

  auto* validate_cmd = app.add_subcommand("validate", "Check SYM, INCL and ATEUC");
  validate_cmd->add_option("model", model_path)->required();
  add_json(validate_cmd);

  auto* convert_cmd = app.add_subcommand("convert", "Convert between model kinds");
  convert_cmd->add_option("--to", to)->required()->check(CLI::IsMember({"ternary", "fo"}));
  convert_cmd->add_option("--root", root_name);
  convert_cmd->add_option("--depth", depth);
  convert_cmd->add_option("input", in_path)->required();
  convert_cmd->add_option("output", out_path)->required();
  add_json(convert_cmd);

  auto* bisim_cmd = app.add_subcommand("bisim", "Decide C-bisimilarity of two pointed models");
  bisim_cmd->add_option("left", model_path)->required();
  bisim_cmd->add_option("s1", state_name)->required();
  bisim_cmd->add_option("right", model2_path)->required();
  bisim_cmd->add_option("s2", state2_name)->required();
  add_json(bisim_cmd);

  auto* prove_cmd = app.add_subcommand("prove", "Check a derivation script");
  prove_cmd->add_option("system", system)->required();
  prove_cmd->add_option("script", script)->required();
  add_json(prove_cmd);

  auto* fuzz_cmd = app.add_subcommand("fuzz", "Soundness fuzzing of a proof system");
  fuzz_cmd->add_option("system", system)->required();
  fuzz_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--seed", seed);
  fuzz_cmd->add_option("--max-states", fuzz_states)->check(CLI::Range(1, 8));
  fuzz_cmd->add_option("--instances", instances)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--workers", workers)->check(CLI::Range(1, 256));
  add_json(fuzz_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "Generate a random valid model");
  gen_cmd->add_option("--kind", kind)->required()->check(CLI::IsMember({"value", "direct"}));
  gen_cmd->add_option("params", params_arg, "JSON object or file with vocab, num_states, ...")
      ->required();
  gen_cmd->add_flag("--ternary", as_ternary, "For --kind value, print the derived ternary model");
  add_json(gen_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*parse_cmd) {
      Formula f = parse_free(formula_text);
      std::string text = print(f, {!raw});
      emit({{"formula", text}, {"languages", languages_json(f)}, {"modal_depth", modal_depth(f)}},
           text);
      return 0;
    }
    if (*check_cmd) {
      LoadedModel m = load_model_file(model_path);
      Formula f = parse(formula_text, vocab_of(m));
      bool v = eval_any(m, state_of(m, state_name), f);
      emit({{"value", v}}, v ? "true" : "false");
      return v ? 0 : 1;
    }
    if (*valid_cmd) {
      LoadedModel m = load_model_file(model_path);
      Formula f = parse(formula_text, vocab_of(m));
      const auto& states = m.is_ternary() ? m.ternary().states : m.fo().states;
      json failing = json::array();
      for (State s = 0; s < states.size(); ++s)
        if (!eval_any(m, s, f)) failing.push_back(states[s]);
      bool v = failing.empty();
      emit({{"valid", v}, {"failing", failing}},
           v ? "true" : "false (fails at " + failing.dump() + ")");
      return v ? 0 : 1;
    }
    if (*refute_cmd) {
      Formula f = parse_free(formula_text);
      Vocabulary vocab = vocab_for(f);
      SearchOptions opts{budget, workers};
      std::optional<Countermodel> cm;
      try {
        cm = find_countermodel(f, max_states, vocab, opts);
      } catch (const BoundExceeded& e) {
        emit({{"result", "bound exceeded"}, {"message", e.what()}}, std::string("bound exceeded: ") + e.what());
        return 3;
      }
      if (!cm) {
        emit({{"result", "none"}}, "none within bound");
        return 0;
      }
      json mj = to_json(cm->model);
      if (!out_path.empty()) save_json_file(out_path, mj);
      emit({{"result", "countermodel"}, {"state", cm->model.states[cm->state]}, {"rank", cm->rank},
            {"model", mj}},
           "countermodel at " + cm->model.states[cm->state] + ":\n" + mj.dump(2));
      return 1;
    }
    if (*translate_cmd) {
      Formula f = parse_free(formula_text);
      Formula g = dir == "elkv2ml" ? translate_T(f) : translate_T_inv(f);
      emit({{"formula", print(g)}}, print(g));
      return 0;
    }
    if (*reduce_cmd) {
      Formula g = reduce_r(parse_free(formula_text));
      emit({{"formula", print(g)}}, print(g));
      return 0;
    }
    if (*validate_cmd) {
      LoadedModel lm = load_model_file(model_path);
      const TernaryModel& m = lm.ternary();
      auto vs = validate_ternary(m);
      json arr = json::array();
      std::string text;
      for (const auto& v : vs) {
        json w = json::array();
        for (State s : v.witness) w.push_back(m.states[s]);
        arr.push_back({{"condition", to_string(v.condition)}, {"agent", v.agent},
                       {"constant", v.constant}, {"witness", w}});
        text += describe(v, m) + "\n";
      }
      if (vs.empty()) text = "valid\n";
      if (lm.sym_completions)
        text += "(closed " + std::to_string(lm.sym_completions) + " triples under SYM on load)\n";
      text.pop_back();
      emit({{"valid", vs.empty()}, {"violations", arr}, {"sym_completions", lm.sym_completions}},
           text);
      return vs.empty() ? 0 : 1;
    }
    if (*convert_cmd) {
      LoadedModel lm = load_model_file(in_path);
      json out;
      std::string root_out;
      if (to == "ternary") {
        out = to_json(derive_ternary(lm.fo()));
      } else {
        if (root_name.empty()) throw UsageError("--to fo needs --root");
        const TernaryModel& m = lm.ternary();
        FOConversion conv = to_fo(m, m.state(root_name), depth);
        out = to_json(conv.model);
        root_out = conv.model.states[conv.root];
      }
      save_json_file(out_path, out);
      emit({{"output", out_path}, {"root", root_out}},
           "wrote " + out_path + (root_out.empty() ? "" : " (root " + root_out + ")"));
      return 0;
    }
    if (*bisim_cmd) {
      LoadedModel l = load_model_file(model_path), r = load_model_file(model2_path);
      const TernaryModel& m1 = l.ternary();
      const TernaryModel& m2 = r.ternary();
      BisimAnalysis an(m1, m2);
      State s1 = m1.state(state_name), s2 = m2.state(state2_name);
      auto f = an.distinguish(s1, s2);
      if (!f) {
        emit({{"bisimilar", true}}, "bisimilar");
        return 0;
      }
      emit({{"bisimilar", false}, {"formula", print(*f)}},
           "not bisimilar; distinguishing formula (true at " + state_name + ", false at " +
               state2_name + "):\n" + print(*f));
      return 1;
    }
    if (*prove_cmd) {
      ProofSystem sys = proof_system(system);
      Derivation d;
      try {
        d = load_script(script);
      } catch (const ProofError& e) {
        emit({{"accepted", false}, {"step", nullptr}, {"reason", e.what()}},
             std::string("rejected: ") + e.what());
        return 1;
      }
      CheckResult r = check_derivation(sys, d);
      if (r.accepted) {
        emit({{"accepted", true}, {"steps", d.steps.size()}},
             "accepted (" + std::to_string(d.steps.size()) + " steps)");
        return 0;
      }
      emit({{"accepted", false}, {"step", r.step}, {"reason", r.reason}},
           "rejected at step " + std::to_string(r.step) + ": " + r.reason);
      return 1;
    }
    if (*fuzz_cmd) {
      ProofSystem sys = proof_system(system);
      FuzzParams p;
      p.seed = seed;
      p.max_states = fuzz_states;
      p.instances = instances;
      p.workers = workers;
      FuzzReport rep = soundness_fuzz(sys, p, trials);
      std::string text = std::to_string(rep.trials) + " trials, " +
                         std::to_string(rep.instances_checked) + " instances, " +
                         std::to_string(rep.rule_checks) + " rule checks, " +
                         std::to_string(rep.findings.size()) + " falsified";
      for (const auto& f : rep.findings) text += "\n" + f;
      emit({{"trials", rep.trials}, {"instances", rep.instances_checked},
            {"rule_checks", rep.rule_checks}, {"findings", rep.findings}},
           text);
      return rep.findings.empty() ? 0 : 1;
    }
    if (*gen_cmd) {
      json pj;
      try {
        pj = json::parse(read_text(params_arg));
      } catch (const json::exception& e) {
        throw UsageError(std::string("bad params: ") + e.what());
      }
      GenParams p = gen_params(pj);
      json out;
      if (kind == "value") {
        auto [fo, tern] = generate_value_induced(p);
        out = as_ternary ? to_json(tern) : to_json(fo);
      } else {
        out = to_json(generate_direct(p));
      }
      std::cout << (g_json ? out.dump() : out.dump(2)) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "kvlog: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
