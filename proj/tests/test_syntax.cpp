#include <gtest/gtest.h>

#include "kvlog/gen.hpp"
#include "kvlog/semantics.hpp"
#include "kvlog/syntax.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace kvlog;

namespace {

const Vocabulary V = support::vocab_2a3p2c();
Formula P(const std::string& t) { return parse(t, V); }
const Formula p = prop("p"), q = prop("q"), r = prop("r");

bool has_distinct_binary(const Formula& f) {
  if (f.is(Op::BoxB) && f.child(0) != f.child(1)) return true;
  for (std::size_t k = 0; k < f.arity(); ++k)
    if (has_distinct_binary(f.child(k))) return true;
  return false;
}

}  // namespace

TEST(Parse, Constructors) {
  EXPECT_EQ(P("Kv[a](p, c)"), kv("a", p, "c"));
  EXPECT_EQ(P("[a]^c ~p"), kbox("a", "c", neg(p)));
  EXPECT_EQ(P("<a>^c(p, q)"), neg(kbox("a", "c", neg(p), neg(q))));
  EXPECT_EQ(P("Kv[a](c)"), kv("a", top(), "c"));
  EXPECT_EQ(P("F"), neg(top()));
  EXPECT_EQ(P("<a>p"), neg(box("a", neg(p))));
  EXPECT_EQ(P("<a>^c p"), neg(kbox("a", "c", neg(p))));
}

TEST(Parse, Precedence) {
  EXPECT_EQ(P("~p & q"), conj(neg(p), q));
  EXPECT_EQ(P("p & q | r"), disj(conj(p, q), r));
  EXPECT_EQ(P("p | q -> r"), implies(disj(p, q), r));
  EXPECT_EQ(P("p -> q -> r"), implies(p, implies(q, r)));
  EXPECT_EQ(P("p <-> q <-> r"), iff(p, iff(q, r)));
  EXPECT_EQ(P("[a]p & q"), conj(box("a", p), q));
}

TEST(Parse, Errors) {
  EXPECT_THROW(P("p &"), FormulaError);
  EXPECT_THROW(P("zz"), FormulaError);        // unknown proposition
  EXPECT_THROW(P("[x]p"), FormulaError);      // unknown agent
  EXPECT_THROW(P("[a]^e p"), FormulaError);   // unknown constant
  EXPECT_THROW(P("Kv[a](p, q, c)"), FormulaError);
  EXPECT_THROW(P("[a]^c(p, q, r)"), FormulaError);
  EXPECT_EQ(P("[a]^c(p)"), kbox("a", "c", p));  // a parenthesized unary argument
  EXPECT_THROW(P("p $ q"), FormulaError);
}

TEST(Print, Examples) {
  EXPECT_EQ(print(kbox("a", "c", top())), "[a]^c T");
  EXPECT_EQ(print(neg(kbox("a", "c", neg(p), neg(q)))), "<a>^c(p, q)");
  EXPECT_EQ(print(conj(p, box("a", q))), "(p & [a]q)");
  EXPECT_EQ(print(neg(kbox("a", "c", neg(p), neg(q))), {.resugar = false}), "~[a]^c(~p, ~q)");
}

TEST(Print, RoundTrip) {
  Rng rng(11);
  for (Language l : {Language::ELKvR, Language::MLKvR, Language::MLKvB, Language::MLKv})
    for (int k = 0; k < 400; ++k) {
      Formula f = random_formula(rng, V, l, {3, 7});
      ASSERT_EQ(parse(print(f), V), f) << print(f);
      ASSERT_EQ(parse(print(f, {.resugar = false}), V), f) << print(f, {.resugar = false});
    }
}

TEST(Language, Membership) {
  using S = std::set<Language>;
  EXPECT_EQ(language_of(kv("a", p, "c")), S{Language::ELKvR});
  EXPECT_EQ(language_of(kbox("a", "c", neg(top()))), (S{Language::MLKvR, Language::MLKv}));
  EXPECT_EQ(language_of(kbox("a", "c", p, q)), S{Language::MLKvB});
  EXPECT_EQ(language_of(kbox("a", "c", p)), S{Language::MLKvR});
  EXPECT_EQ(language_of(conj(p, box("a", q))),
            (S{Language::ELKvR, Language::MLKvR, Language::MLKvB, Language::MLKv}));
  // ~~F normalizes to F.
  EXPECT_TRUE(in_language(kbox("a", "c", neg(neg(neg(top())))), Language::MLKv));
  EXPECT_FALSE(in_language(kbox("a", "c", conj(p, neg(p))), Language::MLKv));
}

TEST(Language, GeneratorsStayInside) {
  Rng rng(3);
  for (Language l : {Language::ELKvR, Language::MLKvR, Language::MLKvB, Language::MLKv})
    for (int k = 0; k < 300; ++k) {
      Formula f = random_formula(rng, V, l, {2, 5});
      ASSERT_TRUE(in_language(f, l)) << to_string(l) << " " << print(f);
      ASSERT_LE(modal_depth(f), 2u);
    }
}

TEST(Translate, T) {
  EXPECT_EQ(translate_T(kv("a", p, "c")), kbox("a", "c", neg(p)));
  EXPECT_EQ(translate_T(box("a", p)), box("a", p));
  EXPECT_EQ(translate_T(neg(kv("a", top(), "c"))), neg(kbox("a", "c", neg(top()))));
  EXPECT_THROW(translate_T(kbox("a", "c", p)), FormulaError);
}

TEST(Translate, TInv) {
  EXPECT_EQ(translate_T_inv(kbox("a", "c", neg(p))), kv("a", p, "c"));
  EXPECT_EQ(translate_T_inv(kbox("a", "c", p)), kv("a", neg(p), "c"));
  EXPECT_EQ(translate_T_inv(box("a", p)), box("a", p));
  EXPECT_THROW(translate_T_inv(kv("a", p, "c")), FormulaError);
}

TEST(Translate, InverseUpToDoubleNegation) {
  Rng rng(5);
  for (int k = 0; k < 500; ++k) {
    Formula f = random_formula(rng, V, Language::ELKvR, {3, 6});
    ASSERT_EQ(normalize_double_neg(translate_T_inv(translate_T(f))), normalize_double_neg(f))
        << print(f);
    Formula g = random_formula(rng, V, Language::MLKvR, {3, 6});
    ASSERT_EQ(normalize_double_neg(translate_T(translate_T_inv(g))), normalize_double_neg(g))
        << print(g);
  }
}

TEST(Embed, Examples) {
  EXPECT_EQ(embed_unary(P("<a>^c p")), P("<a>^c(p, p)"));
  EXPECT_EQ(embed_unary(P("[a]p")), P("[a]p"));
  EXPECT_EQ(embed_unary(P("[a]^c ~q")), P("[a]^c(~q, ~q)"));
}

TEST(Embed, SemanticTransparency) {
  Vocabulary v = support::vocab_1a2p1c();
  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    TernaryModel m = support::random_valid(v, 1 + seed % 4, seed);
    for (int k = 0; k < 6; ++k) {
      Formula f = random_formula(rng, v, Language::MLKvR);
      Formula g = embed_unary(f);
      ASSERT_TRUE(in_language(g, Language::MLKvB));
      for (State s = 0; s < m.size(); ++s)
        ASSERT_EQ(oracle::eval(m, s, f), oracle::eval(m, s, g)) << print(f);
    }
  }
}

TEST(Reduce, ThreeDisjuncts) {
  Formula expected =
      P("(<a>^c p & <a>q) | (<a>^c q & <a>p) | "
        "(<a>p & <a>q & ~<a>^c p & ~<a>^c q & <a>^c(p | q))");
  EXPECT_EQ(reduce_r(P("<a>^c(p, q)")), expected);
  EXPECT_EQ(binary_diamond_expansion("a", "c", p, q), expected);
  EXPECT_EQ(reduce_r(P("p & [a]q")), P("p & [a]q"));
}

TEST(Reduce, DiagonalAgreesWithUnaryUpToThreeStates) {
  Vocabulary v({"a"}, {"p"}, {"c"});
  Formula lhs = parse("<a>^c p", v);
  Formula rhs = reduce_r(parse("<a>^c(p, p)", v));
  std::size_t models = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    oracle::for_each_valid_model(v, n, [&](const TernaryModel& m) {
      ++models;
      for (State s = 0; s < m.size(); ++s)
        ASSERT_EQ(oracle::eval(m, s, lhs), oracle::eval(m, s, rhs));
    });
  EXPECT_GT(models, 1000u);
}

TEST(Reduce, SemanticEquivalenceAndShape) {
  Vocabulary v = support::vocab_1a2p1c();
  Rng rng(23);
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    TernaryModel m = support::random_valid(v, 1 + seed % 4, seed + 1000);
    for (int k = 0; k < 6; ++k) {
      Formula f = random_formula(rng, v, Language::MLKvB);
      Formula g = reduce_r(f);
      ASSERT_FALSE(has_distinct_binary(g)) << print(g);
      for (State s = 0; s < m.size(); ++s)
        ASSERT_EQ(oracle::eval(m, s, f), oracle::eval(m, s, g)) << print(f);
    }
  }
}

TEST(Substitute, Examples) {
  EXPECT_EQ(substitute(P("p -> p"), {{"p", P("[a]^c q")}}), P("[a]^c q -> [a]^c q"));
  EXPECT_EQ(substitute(P("[a]^c(p, q) -> [a]^c(q, p)"), {{"p", P("r & q")}, {"q", top()}}),
            P("[a]^c((r & q), T) -> [a]^c(T, (r & q))"));
  Formula f = P("[a](p -> q) & <b>^d r");
  EXPECT_EQ(substitute(f, {}), f);
  // Simultaneous, not sequential.
  EXPECT_EQ(substitute(P("p & q"), {{"p", q}, {"q", p}}), P("q & p"));
}

TEST(ReplaceAt, Examples) {
  Formula f = conj(p, p);
  EXPECT_EQ(replace_at(f, {{0}}, p, q), conj(q, p));
  EXPECT_EQ(replace_at(f, {{0}, {1}}, p, q), conj(q, q));
  EXPECT_EQ(replace_at(f, {}, p, q), f);
  EXPECT_THROW(replace_at(f, {{2}}, p, q), FormulaError);
  EXPECT_THROW(replace_at(f, {{0}}, q, p), FormulaError);
  EXPECT_EQ(occurrences(f, p), (std::vector<Path>{{0}, {1}}));
}

TEST(ModalDepth, Examples) {
  EXPECT_EQ(modal_depth(p), 0u);
  EXPECT_EQ(modal_depth(P("[a]<a>^c(p, q)")), 2u);
  EXPECT_EQ(modal_depth(P("Kv[a]([a]p, c)")), 2u);
}
