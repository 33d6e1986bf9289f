#include <gtest/gtest.h>

#include "hflz/error.hpp"
#include "hflz/parser.hpp"
#include "hflz/printer.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/typecheck.hpp"
#include "support.hpp"

namespace hflz {
namespace {

const char* kMult =
    "(mu u: int -> int -> int -> prop. \\(x: int, y: int, z: int). y = z = 0 \\/ (1 <= y /\\ u(x, y - 1, z - x)) "
    "\\/ (y + 1 <= 0 /\\ u(x, y + 1, z + x)))";

const char* kPhi22 = "(nu x: prop -> prop. \\y: prop. y \\/ <a> x(<b> y))";

TEST(Types, OrderOfTypes) {
  EXPECT_EQ(order_of(*Type::prop()), 0u);
  EXPECT_EQ(order_of(*Type::integer()), 0u);
  EXPECT_EQ(order_of(*parse_type("prop -> prop")), 1u);
  EXPECT_EQ(order_of(*parse_type("(int -> prop) -> prop")), 2u);
  EXPECT_EQ(order_of(*parse_type("int -> int -> prop")), 1u);
}

TEST(Types, OrderMatchesDefinitionOnRandomTypes) {
  std::uint64_t seed = 7;
  auto next = [&] {
    seed = seed * 6364136223846793005ull + 1442695040888963407ull;
    return seed >> 33;
  };
  std::function<TypePtr(int)> gen = [&](int depth) -> TypePtr {
    if (depth == 0 || next() % 3 == 0) return Type::prop();
    TypePtr arg = next() % 2 ? Type::integer() : gen(depth - 1);
    return Type::arrow(arg, gen(depth - 1));
  };
  std::function<unsigned(const Type&)> order = [&](const Type& t) -> unsigned {
    if (!t.is_arrow()) return 0;
    return std::max(order(*t.argument()) + 1, order(*t.result()));
  };
  for (int i = 0; i < 200; ++i) {
    TypePtr t = gen(4);
    EXPECT_EQ(order_of(*t), order(*t)) << t->str();
  }
}

TEST(Parser, Constants) {
  EXPECT_TRUE(parse_formula("true")->is(Formula::Kind::True));
  EXPECT_TRUE(parse_formula("false")->is(Formula::Kind::False));
}

TEST(Parser, FixpointWithLambdaBody) {
  FormulaPtr f = parse_formula("nu x: (int -> prop). \\y:int. y <= 0 \\/ x (y+1)");
  ASSERT_TRUE(f->is(Formula::Kind::Nu));
  EXPECT_TRUE(f->body()->is(Formula::Kind::Lambda));
  EXPECT_EQ(f->type()->str(), "int -> prop");
}

TEST(Parser, OrBindsLooserThanAnd) {
  FormulaPtr f = parse_formula("true \\/ false /\\ true");
  ASSERT_TRUE(f->is(Formula::Kind::Or));
  EXPECT_TRUE(f->rhs()->is(Formula::Kind::And));
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse_formula("true \\/\n  (false");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_GT(e.column(), 1);
  }
  EXPECT_THROW(parse_formula("x \\/ true"), ParseError);
  EXPECT_THROW(parse_formula("\\y. y"), ParseError);
}

TEST(Parser, RejectsVariableMultiplication) {
  EXPECT_THROW(parse_formula("forall x, y. x * y >= 0"), ParseError);
}

TEST(Parser, PrintReparsesAlphaEqual) {
  const char* corpus[] = {
      kMult,
      "(nu x: int -> prop. \\y: int. y >= 0 /\\ x(y + 1)) 1",
      "forall i. (mu x: int -> prop. \\y: int. y <= 0 \\/ x(y - 1)) i",
      "forall i. forall u >= max(i + 1, 1). (nu x': int -> int -> prop. \\(z: int, y: int). z > 0 /\\ (y <= 0 \\/ "
      "x'(z - 1, y - 1)))(u, i)",
      "<read> <read> <close> <end> true",
      "[a] false /\\ <b> (mu z: prop. z)",
      "exists x >= 0. x = 3 \\/ -x != 2",
      "(mu f: (prop -> prop) -> prop. \\g: prop -> prop. g(<end> true) \\/ <read> f(\\z: prop. <close> z))(\\z: prop. "
      "z)",
  };
  std::string phi22 = std::string(kPhi22) + "(<c> true)";
  std::vector<std::string> texts(std::begin(corpus), std::end(corpus));
  texts.push_back(phi22);
  for (const auto& t : texts) {
    FormulaPtr f = parse_formula(t);
    std::string printed = print(f);
    FormulaPtr g = parse_formula(printed);
    EXPECT_TRUE(alpha_equal(f, g)) << t << "\nprinted: " << printed;
    EXPECT_EQ(print(g), printed);
  }
}

TEST(Typecheck, Basics) {
  EXPECT_EQ(typecheck(parse_formula("true \\/ false"))->str(), "prop");
  EXPECT_EQ(typecheck(parse_formula(kMult))->str(), "int -> int -> int -> prop");
  EXPECT_EQ(formula_order(parse_formula(kPhi22)), 1u);
}

TEST(Typecheck, Errors) {
  EXPECT_THROW(parse_formula("true 3"), TypeError);
  EXPECT_THROW(parse_formula("(\\y: int. y > 0) true"), TypeError);
  EXPECT_THROW(require_prop(parse_formula("\\y: int. y > 0")), TypeError);
  EXPECT_THROW(parse_formula("mu x: int. true"), Error);
}

TEST(Rewrite, SubstituteSimple) {
  Symbol x = fresh_symbol("x");
  Symbol y = fresh_symbol("y");
  std::vector<TypedSymbol> env = {{x, Type::prop()}, {y, Type::prop()}};
  FormulaPtr f = parse_formula("x \\/ y", env);
  FormulaPtr g = substitute(f, x, Formula::tt());
  EXPECT_TRUE(alpha_equal(g, Formula::disj(Formula::tt(), Formula::var(y, Type::prop()))));
}

TEST(Rewrite, SubstituteAvoidsCapture) {
  Symbol x = fresh_symbol("x");
  Symbol n = fresh_symbol("n");
  std::vector<TypedSymbol> env = {{x, Type::prop()}, {n, Type::integer()}};
  // The lambda binds a variable named n; substituting a formula that
  // mentions the free n must rename the binder.
  FormulaPtr f = parse_formula("\\n: int. n > 0 \\/ x", env);
  FormulaPtr value = parse_formula("n = 5", env);
  FormulaPtr g = substitute(f, x, value);
  ASSERT_TRUE(g->is(Formula::Kind::Lambda));
  EXPECT_FALSE(g->symbol() == n);
  EXPECT_TRUE(contains(g->free_ids(), n.id));
  FormulaPtr applied = beta_step(Formula::app(g, IntExpr::constant(1)));
  EXPECT_TRUE(alpha_equal(applied, parse_formula("1 > 0 \\/ n = 5", env)));
}

TEST(Rewrite, SubstituteTypeMismatch) {
  Symbol x = fresh_symbol("x");
  FormulaPtr f = parse_formula("x \\/ true", {{x, Type::prop()}});
  EXPECT_THROW(substitute(f, x, parse_formula("\\y: prop. y")), TypeError);
}

TEST(Rewrite, UnfoldAndBetaQuantifierEncoding) {
  // psi = mu x. \n. phi(n) \/ x(n + 1) with phi a free int -> prop variable.
  Symbol phi = fresh_symbol("phi");
  std::vector<TypedSymbol> env = {{phi, parse_type("int -> prop")}};
  FormulaPtr psi = parse_formula("mu x: int -> prop. \\n: int. phi(n) \\/ x(n + 1)", env);
  FormulaPtr psi0 = Formula::app(psi, IntExpr::constant(0));
  FormulaPtr unfolded = *unfold_leftmost(psi0);
  // (\n. phi(n) \/ psi(n + 1)) 0
  ASSERT_TRUE(unfolded->is(Formula::Kind::App));
  ASSERT_TRUE(unfolded->fun()->is(Formula::Kind::Lambda));
  FormulaPtr step2 = beta_step(unfolded);
  FormulaPtr want = Formula::disj(Formula::app(Formula::var(phi, parse_type("int -> prop")), IntExpr::constant(0)),
                                  Formula::app(psi, IntExpr::constant(1)));
  EXPECT_TRUE(alpha_equal(normalize_arith(step2), want)) << print(step2);
}

TEST(Rewrite, UnfoldEvenThenBeta) {
  const char* even = "(mu x: int -> prop. \\y: int. y = 0 \\/ x(y - 2))";
  Symbol y = fresh_symbol("y");
  std::vector<TypedSymbol> env = {{y, Type::integer()}};
  FormulaPtr e = parse_formula(even);
  FormulaPtr applied = Formula::app(e, IntExpr::var(y));
  FormulaPtr step = beta_step(Formula::app(unfold_fixpoint(e), IntExpr::var(y)));
  FormulaPtr want = parse_formula(std::string("y = 0 \\/ ") + even + "(y - 2)", env);
  EXPECT_TRUE(alpha_equal(step, want)) << print(step);
  EXPECT_EQ(typecheck(step, env)->str(), typecheck(applied, env)->str());
}

TEST(Rewrite, BetaAndErrors) {
  EXPECT_TRUE(beta_step(parse_formula("(\\x: prop. x) true"))->is(Formula::Kind::True));
  EXPECT_THROW(beta_step(parse_formula("true")), Error);
  EXPECT_THROW(unfold_fixpoint(parse_formula("true")), Error);
  EXPECT_FALSE(beta_leftmost(parse_formula("<a> true")).has_value());
}

TEST(Rewrite, DualOfMult) {
  const char* phi =
      "mu u: int -> int -> int -> prop. \\(x: int, y: int, r: int). (y = 0 /\\ r = 0) \\/ exists s. y != 0 /\\ u(x, "
      "y - 1, s) /\\ r = s + x";
  const char* dual =
      "nu u: int -> int -> int -> prop. \\(x: int, y: int, r: int). (y != 0 \\/ r != 0) /\\ forall s. y = 0 \\/ u(x, "
      "y - 1, s) \\/ r != s + x";
  EXPECT_TRUE(alpha_equal(dualize(parse_formula(phi)), parse_formula(dual)));
  EXPECT_TRUE(dualize(Formula::tt())->is(Formula::Kind::False));
}

TEST(Rewrite, DualizeIsInvolutionAndPreservesTypes) {
  const char* corpus[] = {kMult, kPhi22, "<read> [close] (nu z: prop. z /\\ <end> true)",
                          "forall i. exists j >= i. j > 3 \\/ i < -2"};
  for (const char* t : corpus) {
    FormulaPtr f = parse_formula(t);
    FormulaPtr d = dualize(f);
    EXPECT_TRUE(alpha_equal(dualize(d), f)) << t;
    EXPECT_EQ(typecheck(d)->str(), typecheck(f)->str()) << t;
  }
}

TEST(Rewrite, NormalizeArith) {
  Symbol y = fresh_symbol("y");
  IntExprPtr e = parse_int_expr("y + 1 - 2", {{y, Type::integer()}});
  EXPECT_EQ(print(normalize_arith(e)), "y - 1");
  EXPECT_EQ(print(normalize_arith(parse_int_expr("0 + 1"))), "1");
  EXPECT_EQ(eval_constant(parse_int_expr("3 - -4")), 7);
}

}  // namespace
}  // namespace hflz
