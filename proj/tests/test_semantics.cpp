#include <gtest/gtest.h>

#include "generators.hpp"
#include "hflz/error.hpp"
#include "hflz/parser.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/semantics.hpp"
#include "support.hpp"

namespace hflz {
namespace {

const std::string kMult =
    "(mu u: int -> int -> int -> prop. \\(x: int, y: int, z: int). y = z = 0 \\/ (1 <= y /\\ u(x, y - 1, z - x)) "
    "\\/ (y + 1 <= 0 /\\ u(x, y + 1, z + x)))";
const std::string kEven = "(mu x: int -> prop. \\y: int. y = 0 \\/ x(y - 2))";
const std::string kOdd = "(mu x: int -> prop. \\y: int. y = 1 \\/ x(y - 2))";

EvalOptions strict(std::int64_t window) {
  EvalOptions o;
  o.window = window;
  return o;
}

// Is there an a^n b^n path from the initial state to a state with a c-edge?
bool anbnc(const Lts& m) {
  auto step = [&](std::set<std::size_t> from, const std::string& label) {
    std::set<std::size_t> out;
    for (const auto& t : m.transitions)
      if (from.count(t.source) && m.labels[t.label] == label) out.insert(t.target);
    return out;
  };
  for (std::size_t n = 0; n <= m.states.size(); ++n) {
    std::set<std::size_t> cur = {m.initial};
    for (std::size_t i = 0; i < n; ++i) cur = step(cur, "a");
    for (std::size_t i = 0; i < n; ++i) cur = step(cur, "b");
    if (!step(cur, "c").empty()) return true;
  }
  return false;
}

// Greatest-fixpoint reading: an a-path of every length also satisfies it.
bool infinite_a_path(const Lts& m) {
  std::set<std::size_t> cur = {m.initial};
  for (std::size_t i = 0; i <= m.states.size() && !cur.empty(); ++i) {
    std::set<std::size_t> next;
    for (const auto& t : m.transitions)
      if (cur.count(t.source) && m.labels[t.label] == "a") next.insert(t.target);
    cur = next;
  }
  return !cur.empty();
}

TEST(CheckPure, FileProtocol) {
  Lts m = parse_lts(test::read_data("file.lts"));
  EXPECT_TRUE(check_pure(m, parse_formula(test::read_data("file_ok.hfl"))));
  EXPECT_FALSE(check_pure(m, parse_formula(test::read_data("file_bad.hfl"))));
}

TEST(CheckPure, AnbnChains) {
  FormulaPtr f = parse_formula(test::read_data("anbn.hfl"));
  Lts good = parse_lts(test::read_data("chain_a2b2c.lts"));
  Lts bad = parse_lts(test::read_data("chain_a1b2c.lts"));
  ASSERT_TRUE(anbnc(good));
  ASSERT_FALSE(anbnc(bad));
  EvalStats stats;
  EXPECT_TRUE(check_pure(good, f, &stats));
  EXPECT_TRUE(stats.within_height);
  EXPECT_FALSE(check_pure(bad, f));
}

TEST(CheckPure, AnbnAgreesWithPathOracleOnRandomModels) {
  std::mt19937_64 rng(11);
  FormulaPtr f = parse_formula(test::read_data("anbn.hfl"));
  for (int i = 0; i < 60; ++i) {
    Lts m = test::random_lts(rng, 4);
    EXPECT_EQ(check_pure(m, f), anbnc(m) || infinite_a_path(m)) << print_lts(m);
  }
}

TEST(CheckPure, TrivialFixpoints) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    Lts m = test::random_lts(rng);
    EXPECT_TRUE(check_pure(m, parse_formula("nu x: prop. x")));
    EXPECT_FALSE(check_pure(m, parse_formula("mu x: prop. x")));
  }
}

TEST(CheckPure, RejectsImpureAndOversizedTables) {
  EXPECT_THROW(check_pure(trivial_model(), parse_formula("1 > 0")), Error);
  FormulaPtr f = parse_formula(
      "(mu f: ((prop -> prop) -> prop) -> prop. \\g: (prop -> prop) -> prop. g(\\z: prop. z))(\\h: prop -> prop. "
      "h(true))");
  Lts m = parse_lts(test::read_data("file.lts"));
  EXPECT_THROW(check_pure(m, f, nullptr, 16), ResourceError);
}

TEST(CheckPure, DualityOnRandomFormulas) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 80; ++i) {
    Lts m = test::random_lts(rng);
    std::string text = test::random_pure_formula(rng);
    FormulaPtr f = parse_formula(text);
    EvalStats stats;
    bool a = check_pure(m, f, &stats);
    bool b = check_pure(m, dualize(f), &stats);
    EXPECT_NE(a, b) << text << "\n" << print_lts(m);
    EXPECT_TRUE(stats.within_height) << text;
  }
}

TEST(EvalBounded, PureAgreesWithExact) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40; ++i) {
    Lts m = test::random_lts(rng);
    FormulaPtr f = parse_formula(test::random_pure_formula(rng));
    bool exact = check_pure(m, f);
    EXPECT_EQ(eval_bounded(f, strict(1), &m), exact);
    EXPECT_EQ(eval_bounded(f, strict(5), &m), exact);
  }
}

TEST(EvalBounded, MultMatchesArithmetic) {
  EXPECT_TRUE(eval_bounded(parse_formula(kMult + "(2, 3, 6)"), strict(8)));
  EXPECT_FALSE(eval_bounded(parse_formula(kMult + "(2, 3, 5)"), strict(8)));
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y)
      for (int z = -4; z <= 4; ++z) {
        std::string t = kMult + "(" + std::to_string(x) + ", " + std::to_string(y) + ", " + std::to_string(z) + ")";
        EXPECT_EQ(eval_bounded(parse_formula(t), strict(8)), x * y == z) << t;
      }
}

TEST(EvalBounded, EvenMatchesParity) {
  EXPECT_TRUE(eval_bounded(parse_formula(kEven + "(4)"), strict(8)));
  EXPECT_FALSE(eval_bounded(parse_formula(kEven + "(3)"), strict(8)));
  for (int y = -8; y <= 8; ++y)
    EXPECT_EQ(eval_bounded(parse_formula(kEven + "(" + std::to_string(y) + ")"), strict(8)), y >= 0 && y % 2 == 0)
        << y;
}

TEST(EvalBounded, ChainLeavingWindowIsFalse) {
  EXPECT_FALSE(eval_bounded(parse_formula("(nu x: int -> prop. \\n: int. n <= 5 /\\ x(n + 1))(0)"), strict(8)));
  // Leaves the window before the bound is reached.
  EXPECT_FALSE(eval_bounded(parse_formula("(nu x: int -> prop. \\n: int. n <= 100 /\\ x(n + 1))(0)"), strict(8)));
  EXPECT_FALSE(eval_bounded(parse_formula("forall x. x = x"), strict(8)));
  EXPECT_TRUE(eval_bounded(parse_formula("exists x. x = 3"), strict(8)));
}

TEST(EvalBounded, MonotoneInWindowAndNeverBothWithDual) {
  std::vector<std::string> corpus = {
      kMult + "(2, 3, 6)",
      kEven + "(6)",
      "(nu x: int -> prop. \\y: int. y >= 0 /\\ x(y + 1)) 1",
      "exists i. (mu x: int -> prop. \\y: int. y <= 0 \\/ x(y - 1)) i",
      "exists n. n >= 3 /\\ " + kOdd + "(n)",
      test::read_data("countdown.hfl"),
  };
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) corpus.push_back(test::random_first_order(rng).formula);
  for (const auto& t : corpus) {
    FormulaPtr f = parse_formula(t);
    bool prev = false;
    for (std::int64_t b : {2, 4, 8, 12}) {
      bool v = eval_bounded(f, strict(b));
      EXPECT_TRUE(!prev || v) << t << " at window " << b;
      prev = v;
      EXPECT_FALSE(v && eval_bounded(dualize(f), strict(b))) << t;
    }
  }
}

TEST(EvalBounded, WindowPolicyEvenOdd) {
  EvalOptions o;
  o.window = 16;
  o.policy = WindowPolicy::Window;
  std::string f = "forall n. n < -16 \\/ n > 16 \\/ (" + kEven + "(n) => " + kOdd + "(n + 1))";
  EXPECT_TRUE(eval_bounded(parse_formula(f), o));
  EXPECT_FALSE(eval_bounded(parse_formula("forall n. " + kEven + "(n)"), o));
}

TEST(EvalBounded, RecursiveProgramOnFileModel) {
  Lts m = parse_lts(test::read_data("file.lts"));
  EvalOptions o;
  o.window = 12;
  o.policy = WindowPolicy::Window;
  const char* prog =
      "(mu f: int -> prop -> prop. \\(n: int, k: prop). (n > 0 \\/ <close> k) /\\ (n <= 0 \\/ <read> f(n - 1, k)))(10, "
      "<end> true)";
  EXPECT_TRUE(eval_bounded(parse_formula(prog), o, &m));
  EXPECT_TRUE(eval_bounded(parse_formula(prog), strict(12), &m));
  const char* swapped =
      "(mu f: int -> prop -> prop. \\(n: int, k: prop). (n > 0 \\/ <read> k) /\\ (n <= 0 \\/ <close> f(n - 1, k)))(10, "
      "<end> true)";
  EXPECT_FALSE(eval_bounded(parse_formula(swapped), o, &m));
}

}  // namespace
}  // namespace hflz
