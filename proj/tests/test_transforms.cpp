#include <gtest/gtest.h>

#include "generators.hpp"
#include "hflz/entailment.hpp"
#include "hflz/error.hpp"
#include "hflz/parser.hpp"
#include "hflz/printer.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/semantics.hpp"
#include "hflz/transforms.hpp"
#include "hflz/typecheck.hpp"
#include "support.hpp"

namespace hflz {
namespace {

const std::string kEven = "(mu x: int -> prop. \\y: int. y = 0 \\/ x(y - 2))";

EvalOptions window(std::int64_t b) {
  EvalOptions o;
  o.window = b;
  o.policy = WindowPolicy::Window;
  return o;
}

TEST(Desugar, QuantifierEncodings) {
  Symbol phi = fresh_symbol("phi");
  std::vector<TypedSymbol> env = {{phi, parse_type("int -> prop")}};
  auto check = [&](const char* sugar, const char* plain) {
    FormulaPtr got = desugar_quantifiers(parse_formula(sugar, env));
    EXPECT_TRUE(alpha_equal(got, parse_formula(plain, env))) << sugar << "\n got " << print(got);
  };
  check("forall x. phi(x)", "(nu q: int -> prop. \\n: int. phi(n) /\\ q(n - 1) /\\ q(n + 1))(0)");
  check("exists x >= 0. phi(x)", "(mu q: int -> prop. \\n: int. phi(n) \\/ q(n + 1))(0)");
  check("forall x >= 0. phi(x)", "(nu q: int -> prop. \\n: int. phi(n) /\\ q(n + 1))(0)");
  check("exists x. phi(x)", "(mu q: int -> prop. \\n: int. phi(n) \\/ q(n - 1) \\/ q(n + 1))(0)");
}

TEST(Desugar, SugarFreeIsUnchanged) {
  FormulaPtr f = parse_formula(kEven + "(4) \\/ <a> true");
  EXPECT_TRUE(alpha_equal(desugar_quantifiers(f), f));
}

TEST(Desugar, PreservesBoundedMeaning) {
  const char* texts[] = {"exists x >= 0. x = 3", "forall x >= 2. x > 1", "exists x. x = -4 /\\ x < 0",
                         "forall i. forall u >= max(i + 1, 1). u > i"};
  for (const char* t : texts) {
    FormulaPtr f = parse_formula(t);
    FormulaPtr g = desugar_quantifiers(f);
    EXPECT_FALSE(has_kind(g, Formula::Kind::Exists) || has_kind(g, Formula::Kind::Forall)) << t;
    EXPECT_EQ(eval_bounded(f, window(8)), eval_bounded(g, window(8))) << t;
  }
}

TEST(BoundExpr, ParseAndPrint) {
  EXPECT_EQ(parse_bound_expr("4").str(), "4");
  EXPECT_TRUE(parse_bound_expr("4").is_constant());
  EXPECT_EQ(parse_bound_expr("i + 1").str(), "i + 1");
  BoundExpr b = parse_bound_expr("max(i + 1, 1)");
  EXPECT_EQ(b.pieces.size(), 2u);
  EXPECT_EQ(b.str(), "max(i + 1, 1)");
  EXPECT_THROW(parse_bound_expr("max()"), ParseError);
}

TEST(BoundExpr, Schedule) {
  auto strs = [](const std::vector<BoundExpr>& bs) {
    std::vector<std::string> out;
    for (const auto& b : bs) out.push_back(b.str());
    return out;
  };
  EXPECT_EQ(strs(bound_schedule(8)), (std::vector<std::string>{"1", "2", "4", "8"}));
  EXPECT_EQ(strs(bound_schedule(10)), (std::vector<std::string>{"1", "2", "4", "8", "10"}));
  EXPECT_EQ(strs(bound_schedule(1)), (std::vector<std::string>{"1"}));
}

TEST(EliminateMu, CountdownWithVariableBound) {
  FormulaPtr f = parse_formula(test::read_data("countdown.hfl"));
  FormulaPtr g = eliminate_mu(f, parse_bound_expr("max(i + 1, 1)"));
  FormulaPtr want = parse_formula(
      "forall i. forall u >= max(i + 1, 1). (nu x': int -> int -> prop. \\(z: int, y: int). z > 0 /\\ (y <= 0 \\/ "
      "x'(z - 1, y - 1)))(u, i)");
  EXPECT_TRUE(alpha_equal(g, want)) << print(g);
  EXPECT_FALSE(has_kind(g, Formula::Kind::Mu));
  EXPECT_EQ(typecheck(g)->str(), "prop");
}

TEST(EliminateMu, MuFreeIsUnchanged) {
  FormulaPtr f = parse_formula(test::read_data("abstraction.hfl"));
  EXPECT_TRUE(alpha_equal(eliminate_mu(f, BoundExpr::constant(3)), f));
}

TEST(EliminateMu, RefusesHigherOrder) {
  FormulaPtr f = parse_formula(
      "(mu f: (int -> prop) -> prop. \\g: int -> prop. g(1) \\/ f(g))(\\y: int. y > 0)");
  EXPECT_THROW(eliminate_mu(f, BoundExpr::constant(2)), UnsupportedError);
}

TEST(EliminateMu, EvenSixNeedsFourUnfoldings) {
  // Independent count: y = 6, 4, 2, 0 are the calls until the base case fires.
  int unfoldings = 0;
  for (int y = 6;; y -= 2) {
    ++unfoldings;
    if (y == 0) break;
  }
  ASSERT_EQ(unfoldings, 4);
  FormulaPtr f = parse_formula(kEven + "(6)");
  ASSERT_TRUE(eval_bounded(f, window(16)));
  for (int n : {1, 2, 3, 4, 5, 8}) {
    FormulaPtr g = eliminate_mu(f, BoundExpr::constant(n));
    EXPECT_EQ(eval_bounded(g, window(16)), n >= unfoldings) << n;
  }
}

TEST(EliminateMu, SoundAndMonotoneOnRandomInstances) {
  std::mt19937_64 rng(41);
  int eliminated_valid = 0;
  for (int i = 0; i < 40; ++i) {
    auto inst = test::random_first_order(rng);
    FormulaPtr f = parse_formula(inst.formula);
    bool original = eval_bounded(f, window(16));
    bool prev = false;
    for (int n : {1, 2, 4, 8, 16}) {
      FormulaPtr g = eliminate_mu(f, BoundExpr::constant(n));
      ASSERT_FALSE(has_kind(g, Formula::Kind::Mu));
      bool v = eval_bounded(g, window(16));
      EXPECT_TRUE(!v || original) << inst.formula << " bound " << n;
      EXPECT_TRUE(!prev || v) << inst.formula << " bound " << n;
      prev = v;
      eliminated_valid += v;
    }
  }
  EXPECT_GT(eliminated_valid, 0);
}

TEST(Predicates, ParseSet) {
  PredicateSet p = parse_predicate_set("y: y > 0, y >= 10\n# comment\n*: _ != 3\n");
  EXPECT_EQ(p.for_binder("y"), (std::vector<std::string>{"y > 0", "y >= 10"}));
  EXPECT_EQ(p.for_binder("k"), (std::vector<std::string>{"k != 3"}));
  EXPECT_TRUE(parse_predicate_set("").empty());
  EXPECT_THROW(parse_predicate_set("y y > 0"), ParseError);
}

TEST(Abstraction, PositiveCounter) {
  FormulaPtr f = parse_formula(test::read_data("abstraction.hfl"));
  PredicateSet p = parse_predicate_set(test::read_data("abstraction.preds"));
  FormulaPtr want = parse_formula("(nu x: prop -> prop. \\b: prop. b /\\ x(b)) true");
  WindowOracle wo;
  std::vector<std::string> warnings;
  FormulaPtr g = abstract_predicates(f, p, wo, &warnings);
  EXPECT_TRUE(alpha_equal(g, want)) << print(g);
  EXPECT_FALSE(warnings.empty());
  EXPECT_TRUE(check_pure(trivial_model(), g));
  if (auto solver = test::external_solver()) {
    SmtOracle so(*solver, std::chrono::seconds(10));
    warnings.clear();
    EXPECT_TRUE(alpha_equal(abstract_predicates(f, p, so, &warnings), want));
    EXPECT_TRUE(warnings.empty());
  }
}

TEST(Abstraction, IntegerFreeIsUnchanged) {
  FormulaPtr f = parse_formula("(nu x: prop -> prop. \\y: prop. y \\/ x(y)) true");
  WindowOracle wo;
  EXPECT_TRUE(alpha_equal(abstract_predicates(f, PredicateSet{}, wo), f));
}

TEST(Abstraction, SoundOnRandomInstances) {
  std::mt19937_64 rng(43);
  WindowOracle wo(32);
  int abstract_valid = 0;
  for (int i = 0; i < 30; ++i) {
    auto inst = test::random_first_order(rng);
    FormulaPtr f = parse_formula(inst.formula);
    FormulaPtr g;
    try {
      g = abstract_predicates(f, parse_predicate_set(inst.predicates), wo);
    } catch (const UnsupportedError&) {
      continue;
    }
    ASSERT_TRUE(is_pure(g)) << print(g);
    bool v = check_pure(trivial_model(), g);
    abstract_valid += v;
    EXPECT_TRUE(!v || eval_bounded(f, window(32))) << inst.formula << "\n" << inst.predicates << print(g);
  }
  EXPECT_GT(abstract_valid, 0);
}

TEST(Entailment, WindowOracle) {
  Symbol y = fresh_symbol("y");
  std::vector<TypedSymbol> env = {{y, Type::integer()}};
  WindowOracle wo;
  EXPECT_EQ(wo.entails({parse_formula("y > 0", env)}, parse_formula("y >= 0", env)), Tri::Yes);
  EXPECT_EQ(wo.entails({parse_formula("y >= 0", env)}, parse_formula("y > 0", env)), Tri::No);
  EXPECT_EQ(wo.satisfiable({parse_formula("y > 3", env), parse_formula("y < 2", env)}), Tri::No);
  EXPECT_TRUE(wo.heuristic());
}

TEST(Entailment, SmtlibQuery) {
  Symbol y = fresh_symbol("y'");
  std::vector<TypedSymbol> env = {{y, Type::integer()}};
  std::string q = smtlib_query({parse_formula("y' - 3 != -2", env)});
  EXPECT_NE(q.find("(declare-const |y'| Int)"), std::string::npos) << q;
  EXPECT_NE(q.find("distinct"), std::string::npos) << q;
  EXPECT_NE(q.find("(- 2)"), std::string::npos) << q;
  EXPECT_NE(q.find("(check-sat)"), std::string::npos) << q;
}

TEST(Entailment, SmtOracle) {
  auto solver = test::external_solver();
  if (!solver) GTEST_SKIP() << "no external solver";
  Symbol y = fresh_symbol("y");
  std::vector<TypedSymbol> env = {{y, Type::integer()}};
  SmtOracle so(*solver, std::chrono::seconds(10));
  EXPECT_EQ(so.entails({parse_formula("y > 0", env)}, parse_formula("y >= 1", env)), Tri::Yes);
  EXPECT_EQ(so.satisfiable({parse_formula("y > 100", env)}), Tri::Yes);
  EXPECT_EQ(so.satisfiable({parse_formula("y > 100", env), parse_formula("y < 50", env)}), Tri::No);
  SmtOracle broken("false", std::chrono::seconds(2));
  EXPECT_EQ(broken.satisfiable({parse_formula("y > 0", env)}), Tri::Unknown);
}

}  // namespace
}  // namespace hflz
