// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "kvlog/bisim.hpp"
#include "kvlog/gen.hpp"
#include "kvlog/model_io.hpp"
#include "kvlog/proof.hpp"
#include "kvlog/semantics.hpp"
#include "kvlog/syntax.hpp"
#include "kvlog/transform.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace kvlog;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void criterion(int n, double limit_s, const std::string& title, const std::function<Verdict()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (v.ok && secs >= limit_s) v.fail("time limit exceeded");
  if (!v.ok) ++failures;
  std::printf("%s %d %s (%.2fs / %.0fs)%s%s\n", v.ok ? "PASS" : "FAIL", n, title.c_str(), secs,
              limit_s, v.detail.empty() ? "" : ": ", v.detail.c_str());
  std::fflush(stdout);
}

std::pair<int, std::string> run_cli(const std::string& args) {
  std::string cmd = std::string(KVLOG_BINARY) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::map<std::string, std::string> headers(const std::string& path) {
  std::ifstream in(path);
  std::map<std::string, std::string> h;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string val = line.substr(colon + 1);
    val.erase(0, val.find_first_not_of(' '));
    h.emplace(line.substr(2, colon - 2), val);
  }
  return h;
}

const Vocabulary V1 = support::vocab_1a2p1c();
const Vocabulary V2 = support::vocab_2a3p2c();

// Criterion 9 is checked on the inputs of criterion 4.
struct StructureStats {
  std::size_t splits = 0, trees = 0, conversions = 0;
  Verdict verdict;
} structure;

bool reflexive_pair_free(const TernaryModel& m) {
  for (const auto& r : m.tern)
    for (const auto& tr : r.triples())
      if (tr[1] == tr[2]) return false;
  return true;
}

bool is_tree(const TernaryModel& m) {
  const std::size_t n = m.size();
  std::vector<int> indeg(n, 0);
  std::size_t edges = 0;
  for (const auto& r : m.access)
    for (State s = 0; s < n; ++s)
      for (State t = 0; t < n; ++t)
        if (r.has(s, t)) ++indeg[t], ++edges;
  if (n == 0 || indeg[0] != 0 || edges != n - 1) return false;
  for (State t = 1; t < n; ++t)
    if (indeg[t] != 1) return false;
  return true;
}

}  // namespace

int main() {
  criterion(1, 1, "binary-diamond witness models are told apart", [] {
    Verdict v;
    std::string lp = support::source_path("models/binary_witness_left.json");
    std::string rp = support::source_path("models/binary_witness_right.json");
    TernaryModel l = load_model_file(lp).ternary(), r = load_model_file(rp).ternary();
    Formula f = parse("<a>^c(p, q)", l.vocab);
    if (!eval_ternary(l, l.state("s"), f)) v.fail("<a>^c(p, q) false at s");
    if (eval_ternary(r, r.state("x"), f)) v.fail("<a>^c(p, q) true at x");
    if (greatest_bisim(l, r).contains(l.state("s"), r.state("x"))) v.fail("s and x paired");
    auto [code, out] = run_cli("bisim --json " + lp + " s " + rp + " x");
    auto j = nlohmann::json::parse(out);
    if (code != 1 || j["bisimilar"] != false) v.fail("cli did not report non-bisimilar");
    Formula g = parse(j["formula"].get<std::string>(), l.vocab);
    if (!oracle::eval(l, l.state("s"), g) || oracle::eval(r, r.state("x"), g))
      v.fail("cli formula does not distinguish");
    v.detail = "distinguisher " + print(g);
    return v;
  });

  criterion(2, 30, "binary modalities reduce to unary ones", [] {
    Verdict v;
    Rng rng(2002);
    std::size_t points = 0;
    for (std::uint64_t k = 0; k < 500; ++k) {
      TernaryModel m = support::random_valid(V2, 1 + k % 5, 20000 + k);
      Formula phi = random_formula(rng, V2, Language::MLKvB);
      Formula psi = random_formula(rng, V2, Language::MLKvB);
      Formula lhs = kdia("a", "c", phi, psi);
      Formula rhs = binary_diamond_expansion("a", "c", phi, psi);
      Formula f = random_formula(rng, V2, Language::MLKvB);
      Formula rf = reduce_r(f);
      for (State s = 0; s < m.size(); ++s, ++points) {
        bool a = eval_ternary(m, s, lhs);
        if (a != eval_ternary(m, s, rhs) || a != oracle::eval(m, s, rhs))
          v.fail("expansion differs on " + print(lhs));
        bool b = eval_ternary(m, s, f);
        if (b != eval_ternary(m, s, rf) || b != oracle::eval(m, s, rf))
          v.fail("reduction differs on " + print(f));
      }
    }
    if (v.ok) v.detail = std::to_string(points) + " pointed models";
    return v;
  });

  criterion(3, 30, "FO truth equals ternary truth of the translation", [] {
    Verdict v;
    Rng rng(3003);
    std::size_t checks = 0;
    for (std::uint64_t k = 0; k < 500; ++k) {
      FOKripkeModel f = generate_fo(support::params(V2, 1 + k % 6, 30000 + k));
      TernaryModel m = derive_ternary(f);
      for (int j = 0; j < 4; ++j) {
        Formula g = random_formula(rng, V2, Language::ELKvR);
        Formula tg = translate_T(g);
        for (State s = 0; s < f.size(); ++s, ++checks) {
          bool a = eval_fo(f, s, g);
          if (a != oracle::eval(f, s, g) || a != eval_ternary(m, s, tg))
            v.fail("disagreement on " + print(g));
        }
      }
    }
    if (v.ok) v.detail = std::to_string(checks) + " checks";
    return v;
  });

  criterion(4, 60, "ternary truth survives conversion to FO models", [] {
    Verdict v;
    Rng rng(4004);
    std::size_t checks = 0;
    for (std::uint64_t k = 0; k < 200; ++k) {
      TernaryModel m = support::random_valid(V2, 1 + k % 5, 40000 + k);
      TernaryModel sp = split(m);
      ++structure.splits;
      if (!reflexive_pair_free(sp)) structure.verdict.fail("split pairs a copy with itself");
      for (int j = 0; j < 3; ++j) {
        Formula g = random_formula(rng, V2, Language::ELKvR);
        std::size_t d = modal_depth(g);
        for (State s = 0; s < m.size(); ++s, ++checks) {
          TernaryModel tree = unravel(sp, 2 * s, d);
          ++structure.trees;
          if (!is_tree(tree)) structure.verdict.fail("unravel output is not a tree");
          FOConversion c;
          try {
            c = to_fo(m, s, d);
            ++structure.conversions;
          } catch (const ModelError& e) {
            structure.verdict.fail(std::string("value assignment failed: ") + e.what());
            v.fail("conversion failed");
            continue;
          }
          bool want = eval_ternary(m, s, translate_T(g));
          if (want != eval_fo(c.model, c.root, g) || want != oracle::eval(c.model, c.root, g))
            v.fail("truth changed for " + print(g));
        }
      }
    }
    if (v.ok) v.detail = std::to_string(checks) + " rooted checks";
    return v;
  });

  criterion(5, 60, "validator agrees with the triple-loop oracle over 3 states", [] {
    Verdict v;
    Vocabulary voc({"a"}, {"p"}, {"c"});
    std::size_t structures = 0, valid = 0;
    oracle::for_each_structure(voc, 3, [&](TernaryModel& m) {
      for (std::uint64_t b = 0; b < 8; ++b) {
        for (State s = 0; s < 3; ++s) m.val[s][0] = b >> s & 1;
        ++structures;
        auto vs = validate_ternary(m);
        oracle::Flags got;
        for (const auto& x : vs) {
          if (x.condition == Condition::SYM) got.sym = false;
          if (x.condition == Condition::INCL) got.incl = false;
          if (x.condition == Condition::ATEUC) got.ateuc = false;
        }
        oracle::Flags want = oracle::conditions(m);
        if (!(got == want)) v.fail("disagreement");
        valid += vs.empty();
      }
    });
    if (v.ok)
      v.detail = std::to_string(structures) + " structures, " + std::to_string(valid) + " valid";
    return v;
  });

  criterion(6, 60, "soundness fuzz finds nothing; the bogus schema is refuted", [] {
    Verdict v;
    std::string detail;
    for (const char* name : {"SMLKVr", "SMLKVb", "SMLKV"}) {
      FuzzParams p;
      p.seed = 6006;
      p.max_states = 5;
      p.workers = 4;
      FuzzReport rep = soundness_fuzz(proof_system(name), p, 100);
      if (rep.trials != 100) v.fail(std::string(name) + ": wrong trial count");
      if (!rep.findings.empty()) v.fail(std::string(name) + ": " + rep.findings.front());
      detail += std::string(name) + " " + std::to_string(rep.instances_checked) + "+" +
                std::to_string(rep.rule_checks) + ", ";
    }
    Formula bogus = parse("<a>^c(p | q) -> (<a>^c p | <a>^c q)", V1);
    auto cm = find_countermodel(bogus, 3, V1);
    if (!cm) v.fail("no countermodel within 3 states");
    else if (eval_ternary(cm->model, cm->state, bogus) || !oracle::valid(cm->model))
      v.fail("countermodel does not refute");
    else
      detail += "bogus refuted on " + std::to_string(cm->model.size()) + " states";
    if (v.ok) v.detail = detail;
    return v;
  });

  criterion(7, 5, "shipped derivations accepted, mutants rejected where intended", [] {
    Verdict v;
    std::size_t good = 0, bad = 0;
    for (const auto& e : fs::directory_iterator(support::source_path("proofs"))) {
      if (e.path().extension() != ".kvp") continue;
      auto h = headers(e.path().string());
      CheckResult r = check_derivation(proof_system(h.at("system")), load_script(e.path().string()));
      if (!r.accepted) v.fail(e.path().filename().string() + " rejected: " + r.reason);
      ++good;
    }
    for (const auto& e : fs::directory_iterator(support::source_path("proofs/negative"))) {
      auto h = headers(e.path().string());
      CheckResult r = check_derivation(proof_system(h.at("system")), load_script(e.path().string()));
      if (r.accepted || r.step != std::stol(h.at("expect-reject")))
        v.fail(e.path().filename().string() + " not rejected at step " + h.at("expect-reject"));
      ++bad;
    }
    NeckvPair np = derive_equivalent_neckv();
    if (!check_derivation(proof_system("SMLKVr"), np.kvbot_from_neckv).accepted ||
        !check_derivation(proof_system("SMLKVr-bot"), np.neckv_from_kvbot).accepted)
      v.fail("built-in equivalence derivations rejected");
    if (good < 9 || bad < 8) v.fail("corpus incomplete");
    if (v.ok) v.detail = std::to_string(good) + " accepted, " + std::to_string(bad) + " rejected";
    return v;
  });

  criterion(8, 120, "bisimilar pairs agree; other pairs get verified distinguishers", [] {
    Verdict v;
    Rng rng(8008);
    std::size_t paired = 0, separated = 0;
    for (std::uint64_t k = 0; k < 300; ++k) {
      TernaryModel m1 = support::random_valid(V1, 1 + k % 4, 80000 + 2 * k);
      TernaryModel m2 = support::random_valid(V1, 1 + (k / 4) % 4, 80001 + 2 * k);
      BisimAnalysis an(m1, m2);
      std::vector<Formula> fs;
      for (int j = 0; j < 50; ++j) fs.push_back(random_formula(rng, V1, Language::MLKvB));
      for (State s1 = 0; s1 < m1.size(); ++s1)
        for (State s2 = 0; s2 < m2.size(); ++s2) {
          if (an.bisimilar(s1, s2)) {
            ++paired;
            for (const auto& f : fs)
              if (oracle::eval(m1, s1, f) != oracle::eval(m2, s2, f))
                v.fail("bisimilar pair disagrees on " + print(f));
          } else {
            ++separated;
            auto f = an.distinguish(s1, s2);
            if (!f || !oracle::eval(m1, s1, *f) || oracle::eval(m2, s2, *f))
              v.fail("no verified distinguisher");
          }
        }
    }
    if (v.ok)
      v.detail = std::to_string(paired) + " paired, " + std::to_string(separated) + " separated";
    return v;
  });

  criterion(9, 60, "split, unravel and value assignment keep their structure", [] {
    Verdict v = structure.verdict;
    if (structure.conversions == 0) v.fail("no inputs from criterion 4");
    if (v.ok)
      v.detail = std::to_string(structure.splits) + " splits, " + std::to_string(structure.trees) +
                 " trees, " + std::to_string(structure.conversions) + " value assignments";
    return v;
  });

  return failures;
}
