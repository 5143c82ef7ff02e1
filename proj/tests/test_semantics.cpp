#include <gtest/gtest.h>

#include "kvlog/gen.hpp"
#include "kvlog/model_io.hpp"
#include "kvlog/semantics.hpp"
#include "kvlog/syntax.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace kvlog;

namespace {

const Vocabulary V1 = support::vocab_1a2p1c();
Formula P(const std::string& t) { return parse(t, V1); }

// s -> t, u; t:p; u:q; s R t u.
TernaryModel non_normal_witness() {
  TernaryModel m(V1, {"s", "t", "u"});
  m.rel(0).set(0, 1);
  m.rel(0).set(0, 2);
  m.triples(0, 0).set_sym(0, 1, 2);
  m.val[1][0] = true;
  m.val[2][1] = true;
  return m;
}

const char* kBogus = "<a>^c(p | q) -> (<a>^c p | <a>^c q)";

}  // namespace

TEST(EvalFO, Examples) {
  FOKripkeModel f(V1, {"s", "t", "u"}, {"1", "2"});
  f.access[0].set(0, 1);
  f.access[0].set(0, 2);
  f.val[1] = {true, true};
  f.val[2] = {true, false};
  f.value[0] = {0, 0, 1};
  EXPECT_FALSE(eval_fo(f, 0, P("Kv[a](p, c)")));
  EXPECT_TRUE(eval_fo(f, 0, P("Kv[a]((p & q), c)")));
  EXPECT_FALSE(eval_fo(f, 0, P("Kv[a](c)")));
  EXPECT_TRUE(eval_fo(f, 1, P("Kv[a](c)")));
  for (State s = 0; s < 3; ++s) EXPECT_TRUE(eval_fo(f, s, P("Kv[a](F, c)")));
  EXPECT_THROW(eval_fo(f, 0, P("[a]^c p")), FormulaError);
  EXPECT_THROW(eval_fo(f, 7, P("p")), ModelError);
}

TEST(EvalFO, KvBottomEverywhere) {
  Vocabulary v = support::vocab_2a3p2c();
  Formula kb = parse("Kv[a](F, c) & Kv[b](F, d)", v);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    FOKripkeModel f = generate_fo(support::params(v, 1 + seed % 6, seed));
    for (State s = 0; s < f.size(); ++s) ASSERT_TRUE(eval_fo(f, s, kb));
  }
}

TEST(EvalTernary, BinaryWitnessModels) {
  TernaryModel l = load_model_file(support::source_path("models/binary_witness_left.json")).ternary();
  TernaryModel r = load_model_file(support::source_path("models/binary_witness_right.json")).ternary();
  Formula f = P("<a>^c(p, q)");
  EXPECT_TRUE(eval_ternary(l, l.state("s"), f));
  EXPECT_FALSE(eval_ternary(r, r.state("x"), f));
  EXPECT_TRUE(oracle::eval(l, l.state("s"), f));
  EXPECT_FALSE(oracle::eval(r, r.state("x"), f));
}

TEST(EvalTernary, NonNormalWitness) {
  TernaryModel m = non_normal_witness();
  ASSERT_TRUE(is_valid(m));
  EXPECT_TRUE(eval_ternary(m, 0, P("<a>^c(p | q)")));
  EXPECT_FALSE(eval_ternary(m, 0, P("<a>^c p")));
  EXPECT_FALSE(eval_ternary(m, 0, P("<a>^c q")));
  EXPECT_FALSE(valid_on(m, P(kBogus)));
  EXPECT_TRUE(valid_on(m, top()));
  EXPECT_THROW(eval_ternary(m, 0, P("Kv[a](p, c)")), FormulaError);
}

TEST(EvalTernary, VacuityWithoutTriples) {
  Rng rng(2);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenParams p = support::params(V1, 1 + seed % 5, seed);
    p.triple_density = 0;
    TernaryModel m = generate_direct(p);
    ASSERT_TRUE(m.triples(0, 0).empty());
    for (int k = 0; k < 5; ++k) {
      Formula f = random_formula(rng, V1, Language::MLKvB, {1, 4});
      for (State s = 0; s < m.size(); ++s) {
        ASSERT_TRUE(eval_ternary(m, s, kbox("a", "c", f)));
        ASSERT_TRUE(eval_ternary(m, s, kbox("a", "c", f, f)));
        ASSERT_FALSE(eval_ternary(m, s, kdia("a", "c", f)));
        ASSERT_FALSE(eval_ternary(m, s, kdia("a", "c", f, f)));
      }
    }
  }
}

TEST(EvalTernary, AgreesWithOracle) {
  Vocabulary v = support::vocab_2a3p2c();
  Rng rng(31);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TernaryModel m = support::random_valid(v, 1 + seed % 5, seed);
    for (int k = 0; k < 5; ++k) {
      Formula f = random_formula(rng, v, k % 2 ? Language::MLKvB : Language::MLKvR, {3, 6});
      for (State s = 0; s < m.size(); ++s)
        ASSERT_EQ(eval_ternary(m, s, f), oracle::eval(m, s, f)) << print(f);
    }
  }
}

TEST(EvalTernary, DiagonalBinaryMatchesUnary) {
  Rng rng(13);
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    TernaryModel m = support::random_valid(V1, 1 + seed % 5, seed + 77);
    for (int k = 0; k < 4; ++k) {
      Formula f = random_formula(rng, V1, Language::MLKvR, {1, 4});
      for (State s = 0; s < m.size(); ++s)
        ASSERT_EQ(eval_ternary(m, s, kbox("a", "c", f)), eval_ternary(m, s, kbox("a", "c", f, f)));
    }
  }
}

TEST(EvalTernary, SymInstancesValid) {
  Rng rng(4);
  Formula sym = P("[a]^c(p, q) -> [a]^c(q, p)");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TernaryModel m = support::random_valid(V1, 1 + seed % 5, seed);
    Formula a = random_formula(rng, V1, Language::MLKvB, {2, 4});
    Formula b = random_formula(rng, V1, Language::MLKvB, {2, 4});
    ASSERT_TRUE(valid_on(m, substitute(sym, {{"p", a}, {"q", b}})));
  }
}

TEST(FOtoTernary, TruthPreserved) {
  Vocabulary v = support::vocab_2a3p2c();
  Rng rng(19);
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    FOKripkeModel f = generate_fo(support::params(v, 1 + seed % 6, seed));
    TernaryModel m = derive_ternary(f);
    for (int k = 0; k < 5; ++k) {
      Formula g = random_formula(rng, v, Language::ELKvR);
      Formula tg = translate_T(g);
      for (State s = 0; s < f.size(); ++s) {
        bool lhs = eval_fo(f, s, g);
        ASSERT_EQ(lhs, oracle::eval(f, s, g));
        ASSERT_EQ(lhs, eval_ternary(m, s, tg)) << print(g);
      }
    }
  }
}

TEST(Countermodel, Examples) {
  auto cm = find_countermodel(P(kBogus), 3, V1);
  ASSERT_TRUE(cm.has_value());
  EXPECT_TRUE(oracle::valid(cm->model));
  EXPECT_FALSE(oracle::eval(cm->model, cm->state, P(kBogus)));

  EXPECT_FALSE(find_countermodel(P("[a]^c(p, q) -> [a]^c(q, p)"), 3, V1).has_value());

  auto bot = find_countermodel(P("F"), 1, V1);
  ASSERT_TRUE(bot.has_value());
  EXPECT_EQ(bot->model.size(), 1u);
  EXPECT_TRUE(bot->model.rel(0).empty());
  EXPECT_EQ(bot->rank, 0u);
}

TEST(Countermodel, BudgetGuard) {
  SearchOptions o;
  o.budget = 10;
  EXPECT_THROW(find_countermodel(P("[a]^c(p, q) -> [a]^c(q, p)"), 3, V1, o), BoundExceeded);
  EXPECT_THROW(find_countermodel(P("p"), 0, V1), ModelError);
}

// An independent enumerator over at most two states decides the same
// questions.
TEST(Countermodel, AgreesWithNaiveEnumerator) {
  Rng rng(101);
  int refuted = 0, survived = 0;
  for (int k = 0; k < 120; ++k) {
    Formula f = random_formula(rng, V1, k % 3 == 0 ? Language::MLKvR : Language::MLKvB, {2, 5});
    if (k % 4 == 0) f = implies(random_formula(rng, V1, Language::MLKvB, {1, 3}), f);
    std::optional<std::size_t> smallest;
    for (std::size_t n = 1; n <= 2 && !smallest; ++n)
      oracle::for_each_valid_model(V1, n, [&](const TernaryModel& m) {
        for (State s = 0; s < n; ++s)
          if (!smallest && !oracle::eval(m, s, f)) smallest = n;
      });
    auto cm = find_countermodel(f, 2, V1);
    ASSERT_EQ(cm.has_value(), smallest.has_value()) << print(f);
    if (cm) {
      ++refuted;
      EXPECT_EQ(cm->model.size(), *smallest);
      EXPECT_TRUE(oracle::valid(cm->model));
      EXPECT_FALSE(oracle::eval(cm->model, cm->state, f));
    } else {
      ++survived;
    }
  }
  EXPECT_GT(refuted, 10);
  EXPECT_GT(survived, 10);
}

TEST(Countermodel, IndependentOfWorkers) {
  Rng rng(5);
  for (int k = 0; k < 12; ++k) {
    Formula f = implies(random_formula(rng, V1, Language::MLKvB, {1, 3}),
                        random_formula(rng, V1, Language::MLKvB, {1, 3}));
    SearchOptions one, four;
    four.workers = 4;
    if (k == 0) f = P(kBogus);
    std::size_t n = k == 0 ? 3 : 2;
    auto a = find_countermodel(f, n, V1, one);
    auto b = find_countermodel(f, n, V1, four);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_EQ(a->rank, b->rank);
      EXPECT_EQ(a->state, b->state);
      EXPECT_EQ(a->model, b->model);
    }
  }
}
