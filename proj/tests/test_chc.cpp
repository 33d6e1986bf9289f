#include <gtest/gtest.h>

#include <thread>

#include "hflz/chc.hpp"
#include "hflz/error.hpp"
#include "hflz/parser.hpp"
#include "hflz/printer.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/semantics.hpp"
#include "hflz/typecheck.hpp"
#include "support.hpp"

namespace hflz {
namespace {

ChcSystem load(const char* name) { return parse_smtlib_horn(test::read_data(name)); }

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

EvalOptions strict(std::int64_t b) {
  EvalOptions o;
  o.window = b;
  return o;
}

TEST(Horn, MultShape) {
  ChcSystem s = load("mult.smt2");
  EXPECT_EQ(s.predicates.size(), 1u);
  EXPECT_EQ(s.predicates.at("mult"), 3u);
  EXPECT_EQ(s.clauses.size(), 3u);
  EXPECT_EQ(s.goal_count(), 1u);
  std::string text = emit_smtlib_horn(s);
  EXPECT_EQ(count(text, "(assert "), 3u);
  EXPECT_EQ(count(text, "(declare-fun "), 1u);
  EXPECT_EQ(text, test::read_data("mult.golden.smt2"));
}

TEST(Horn, EmptySystem) {
  EXPECT_EQ(emit_smtlib_horn(ChcSystem{}), "(set-logic HORN)\n(check-sat)\n");
}

TEST(Horn, EmitParseRoundTrip) {
  for (const char* name : {"mult.smt2", "mult_strict.smt2", "countdown_clauses.smt2", "unsat.smt2", "evod.smt2",
                           "nogoal.smt2"}) {
    ChcSystem s = load(name);
    ChcSystem back = parse_smtlib_horn(emit_smtlib_horn(s));
    EXPECT_TRUE(same_system(s, back)) << name;
    EXPECT_EQ(emit_smtlib_horn(back), emit_smtlib_horn(s)) << name;
  }
}

TEST(Horn, ReaderErrors) {
  EXPECT_THROW(parse_smtlib_horn("(set-logic HORN)\n(assert (P 1))\n"), ParseError);
  EXPECT_THROW(parse_smtlib_horn("(declare-fun P (Int) Bool)\n(assert (forall ((x Int)) (=> true (P x x))))"),
               ParseError);
  EXPECT_THROW(parse_smtlib_horn("(assert (forall ((x Int)) (=> true false))"), ParseError);
}

TEST(Horn, Validate) {
  ChcSystem s = load("mult.smt2");
  s.clauses[0].vars.pop_back();
  EXPECT_THROW(s.validate(), Error);
}

TEST(ChcToHfl, MultMatchesHandWrittenDual) {
  FormulaPtr f = chc_to_hfl(load("mult.smt2"));
  FormulaPtr want = parse_formula(
      "forall x, y, r. (nu u: int -> int -> int -> prop. \\(x: int, y: int, r: int). (y != 0 \\/ r != 0) /\\ forall "
      "s. y = 0 \\/ u(x, y - 1, s) \\/ r != s + x)(x, y, r) \\/ x <= 0 \\/ r >= y");
  EXPECT_TRUE(alpha_equal(f, want)) << print(f);
  EXPECT_FALSE(has_kind(f, Formula::Kind::Mu));
  EXPECT_FALSE(has_modalities(f));
  EXPECT_TRUE(f->free_ids().empty());
  require_prop(f);
}

TEST(ChcToHfl, NoGoalsIsTrue) { EXPECT_TRUE(chc_to_hfl(load("nogoal.smt2"))->is(Formula::Kind::True)); }

TEST(ChcToHfl, ContradictorySystemIsBoundedInvalid) {
  FormulaPtr f = chc_to_hfl(load("unsat.smt2"));
  EXPECT_FALSE(eval_bounded(f, strict(8)));
  EXPECT_TRUE(eval_bounded(dualize(f), strict(8)));
}

TEST(ChcToHfl, MultAgreesWithArithmeticOnWindow) {
  // The formula is valid; its window-restricted reading must be true too.
  EvalOptions o = strict(4);
  o.policy = WindowPolicy::Window;
  EXPECT_TRUE(eval_bounded(chc_to_hfl(load("mult.smt2")), o));
  // r > y fails at y = r = 0.
  EXPECT_FALSE(eval_bounded(chc_to_hfl(load("mult_strict.smt2")), o));
  EXPECT_TRUE(eval_bounded(dualize(chc_to_hfl(load("mult_strict.smt2"))), strict(4)));
}

TEST(HflToChc, CountdownClauses) {
  FormulaPtr f = parse_formula(test::read_data("countdown_elim.hfl"));
  ChcSystem s = hfl_to_chc(f);
  EXPECT_TRUE(same_system(s, load("countdown_clauses.smt2"))) << emit_smtlib_horn(s);
  EXPECT_EQ(emit_smtlib_horn(s), test::read_data("countdown.golden.smt2"));
}

TEST(HflToChc, TautologyUnderForall) {
  ChcSystem s = hfl_to_chc(parse_formula("forall y. (nu x: int -> prop. \\y: int. true)(y)"));
  EXPECT_LE(s.clauses.size(), 1u);
  for (const auto& c : s.clauses) EXPECT_TRUE(c.is_goal());
  // No definite clause can derive the predicate, so the goal never fires.
  EXPECT_EQ(s.predicates.size(), 1u);
}

TEST(HflToChc, RoundTripPreservesCounts) {
  for (const char* name : {"mult.smt2", "countdown_clauses.smt2", "evod.smt2", "unsat.smt2"}) {
    ChcSystem s = load(name);
    ChcSystem back = hfl_to_chc(chc_to_hfl(s));
    EXPECT_EQ(back.predicates.size(), s.predicates.size()) << name << "\n" << emit_smtlib_horn(back);
    EXPECT_EQ(back.clauses.size(), s.clauses.size()) << name << "\n" << emit_smtlib_horn(back);
  }
  ChcSystem mult = load("mult.smt2");
  EXPECT_TRUE(same_system(hfl_to_chc(chc_to_hfl(mult)), mult));
}

TEST(HflToChc, RefusesOutsideFragment) {
  EXPECT_THROW(hfl_to_chc(parse_formula("(mu x: int -> prop. \\y: int. y <= 0 \\/ x(y - 1))(3)")), UnsupportedError);
  EXPECT_THROW(hfl_to_chc(parse_formula("<a> true")), UnsupportedError);
  EXPECT_THROW(hfl_to_chc(parse_formula("(nu x: prop -> prop. \\y: prop. y /\\ x(y))(true)")), UnsupportedError);
}

TEST(SolverOutput, Parsing) {
  EXPECT_EQ(parse_solver_output("sat\n(model)\n").kind, SolverVerdict::Kind::Sat);
  EXPECT_EQ(parse_solver_output("sat\n(model)\n").detail, "(model)\n");
  EXPECT_EQ(parse_solver_output("unsat\n").kind, SolverVerdict::Kind::Unsat);
  EXPECT_EQ(parse_solver_output("warning: x\nunknown\n").kind, SolverVerdict::Kind::Unknown);
  SolverVerdict junk = parse_solver_output("(error \"line 1\")\n");
  EXPECT_EQ(junk.kind, SolverVerdict::Kind::Unknown);
  EXPECT_NE(junk.detail.find("error"), std::string::npos);
  EXPECT_EQ(parse_solver_output("unsatisfiable\n").kind, SolverVerdict::Kind::Unknown);
}

TEST(SolveExternal, FakeSolvers) {
  ChcSystem s = load("unsat.smt2");
  auto run = [&](const std::string& cmd, std::chrono::milliseconds t = std::chrono::seconds(5)) {
    return solve_external(s, SolverConfig{cmd, t});
  };
  EXPECT_EQ(run("echo sat #").kind, SolverVerdict::Kind::Sat);
  EXPECT_EQ(run("echo unsat #").kind, SolverVerdict::Kind::Unsat);
  EXPECT_EQ(run("grep -c assert").kind, SolverVerdict::Kind::Unknown);
  // The script must be readable at the substituted path.
  EXPECT_EQ(run("grep -q check-sat {file} && echo sat").kind, SolverVerdict::Kind::Sat);
  EXPECT_THROW(run("/nonexistent/solver"), SolverError);
}

TEST(SolveExternal, TimeoutAndCancel) {
  ChcSystem s = load("unsat.smt2");
  auto start = std::chrono::steady_clock::now();
  SolverVerdict v = solve_external(s, SolverConfig{"sleep 5; echo sat #", std::chrono::milliseconds(200)});
  EXPECT_EQ(v.kind, SolverVerdict::Kind::Unknown);
  EXPECT_EQ(v.detail, "timeout");
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(3));

  std::stop_source stop;
  std::jthread canceller([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    stop.request_stop();
  });
  start = std::chrono::steady_clock::now();
  v = solve_external(s, SolverConfig{"sleep 5; echo sat #", std::chrono::seconds(10)}, stop.get_token());
  EXPECT_EQ(v.kind, SolverVerdict::Kind::Unknown);
  EXPECT_EQ(v.detail, "cancelled");
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(3));
}

class RealSolver : public ::testing::Test {
 protected:
  void SetUp() override {
    auto s = test::external_solver();
    if (!s) GTEST_SKIP() << "no external solver (set HFLMC_SOLVER or install z3)";
    cfg_ = SolverConfig{*s, std::chrono::seconds(30)};
  }
  SolverConfig cfg_;
};

TEST_F(RealSolver, KnownVerdicts) {
  EXPECT_EQ(solve_external(load("countdown_clauses.smt2"), cfg_).kind, SolverVerdict::Kind::Sat);
  EXPECT_EQ(solve_external(load("mult.smt2"), cfg_).kind, SolverVerdict::Kind::Sat);
  EXPECT_EQ(solve_external(load("unsat.smt2"), cfg_).kind, SolverVerdict::Kind::Unsat);
  EXPECT_EQ(solve_external(load("mult_strict.smt2"), cfg_).kind, SolverVerdict::Kind::Unsat);
}

TEST_F(RealSolver, RoundTripIsEquisatisfiable) {
  for (const char* name : {"mult.smt2", "unsat.smt2", "countdown_clauses.smt2"}) {
    ChcSystem s = load(name);
    EXPECT_EQ(solve_external(hfl_to_chc(chc_to_hfl(s)), cfg_).kind, solve_external(s, cfg_).kind) << name;
  }
}

TEST(ClauseModels, DisjunctiveModelValidatesClauses) {
  ChcSystem s = load("countdown_clauses.smt2");
  Symbol z = fresh_symbol("z");
  Symbol y = fresh_symbol("y");
  std::vector<TypedSymbol> env = {{z, Type::integer()}, {y, Type::integer()}};
  WindowOracle oracle(24);
  std::map<std::string, test::Interpretation> corrected = {{"X", {{z, y}, parse_formula("z <= 0 \\/ z <= y", env)}}};
  for (const auto& c : s.clauses) EXPECT_EQ(test::clause_holds(c, corrected, oracle), Tri::Yes);
  // The conjunctive reading fails the first clause at z = 0, y = -1.
  std::map<std::string, test::Interpretation> conjunctive = {{"X", {{z, y}, parse_formula("z <= 0 /\\ z <= y", env)}}};
  EXPECT_EQ(test::clause_holds(s.clauses[0], conjunctive, oracle), Tri::No);
}

}  // namespace
}  // namespace hflz
