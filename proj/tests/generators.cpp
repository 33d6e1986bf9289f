#include "generators.hpp"

#include <vector>

namespace hflz::test {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

const std::vector<std::string> kLabels = {"a", "b", "c"};
const std::vector<std::string> kOps = {"<=", "<", "=", "!=", ">=", ">"};

struct PureGen {
  std::mt19937_64& rng;
  int fresh = 0;
  std::vector<std::string> props;
  std::vector<std::string> funs;

  std::string name(const char* base) { return base + std::to_string(fresh++); }

  std::string prop(int depth) {
    int choice = uniform(rng, 0, depth <= 0 ? 2 : 9);
    switch (choice) {
      case 0: return uniform(rng, 0, 1) ? "true" : "false";
      case 1:
      case 2:
        if (!props.empty()) return pick(rng, props);
        if (!funs.empty()) return pick(rng, funs) + "(" + (uniform(rng, 0, 1) ? "true" : "false") + ")";
        return uniform(rng, 0, 1) ? "true" : "false";
      case 3: return "<" + pick(rng, kLabels) + "> " + atomic(depth - 1);
      case 4: return "[" + pick(rng, kLabels) + "] " + atomic(depth - 1);
      case 5: return "(" + prop(depth - 1) + " \\/ " + prop(depth - 1) + ")";
      case 6: return "(" + prop(depth - 1) + " /\\ " + prop(depth - 1) + ")";
      case 7: {
        std::string x = name("x");
        props.push_back(x);
        std::string body = prop(depth - 1);
        props.pop_back();
        return std::string("(") + (uniform(rng, 0, 1) ? "mu " : "nu ") + x + ": prop. " + body + ")";
      }
      case 8:
        if (!funs.empty()) return pick(rng, funs) + "(" + prop(depth - 1) + ")";
        [[fallthrough]];
      default: {
        std::string f = name("f");
        std::string y = name("y");
        funs.push_back(f);
        props.push_back(y);
        std::string body = prop(depth - 1);
        props.pop_back();
        funs.pop_back();
        std::string arg = prop(depth - 1);
        return std::string("(") + (uniform(rng, 0, 1) ? "mu " : "nu ") + f + ": prop -> prop. \\" + y +
               ": prop. " + body + ")(" + arg + ")";
      }
    }
  }

  std::string atomic(int depth) {
    std::string p = prop(depth);
    return "(" + p + ")";
  }
};

struct FirstOrderGen {
  std::mt19937_64& rng;
  int fresh = 0;
  std::vector<std::string> ints;
  std::string preds;

  std::string term() {
    if (!ints.empty() && uniform(rng, 0, 2) > 0) {
      std::string v = pick(rng, ints);
      int c = uniform(rng, -2, 2);
      if (c == 0) return v;
      return v + (c > 0 ? " + " : " - ") + std::to_string(std::abs(c));
    }
    return std::to_string(uniform(rng, -6, 6));
  }

  std::string atom() { return term() + " " + pick(rng, kOps) + " " + term(); }

  std::string prop(int depth) {
    int choice = uniform(rng, 0, depth <= 0 ? 1 : 5);
    switch (choice) {
      case 0:
      case 1: return atom();
      case 2: return "(" + prop(depth - 1) + " \\/ " + prop(depth - 1) + ")";
      case 3: return "(" + prop(depth - 1) + " /\\ " + prop(depth - 1) + ")";
      default: return fixpoint(depth);
    }
  }

  std::string fixpoint(int depth) {
    std::string x = "x" + std::to_string(fresh);
    std::string y = "y" + std::to_string(fresh);
    ++fresh;
    int lo = uniform(rng, -8, 4);
    int hi = uniform(rng, lo + 2, 8);
    int step = pick(rng, std::vector<int>{-2, -1, 1, 2});
    std::string arg = term();
    ints.push_back(y);
    std::string base = prop(depth - 1);
    std::string call = x + "(" + y + (step > 0 ? " + " : " - ") + std::to_string(std::abs(step)) + ")";
    if (uniform(rng, 0, 2) == 0) call = "(" + call + (uniform(rng, 0, 1) ? " \\/ " : " /\\ ") + atom() + ")";
    ints.pop_back();
    std::string guard = y + " > " + std::to_string(lo) + " /\\ " + y + " < " + std::to_string(hi);
    std::string rec = "(" + guard + " /\\ " + call + ")";
    std::string body = uniform(rng, 0, 1) ? base + " \\/ " + rec : base + " /\\ (" + rec + " \\/ " + atom_on(y) + ")";
    int c = uniform(rng, -3, 3);
    preds += y + ": " + y + " " + pick(rng, kOps) + " " + std::to_string(c);
    if (uniform(rng, 0, 1)) preds += ", " + y + " " + pick(rng, kOps) + " " + std::to_string(uniform(rng, -3, 3));
    preds += "\n";
    return std::string("(") + (uniform(rng, 0, 2) == 0 ? "nu " : "mu ") + x + ": int -> prop. \\" + y + ": int. " +
           body + ")(" + arg + ")";
  }

  std::string atom_on(const std::string& y) {
    return y + " " + pick(rng, kOps) + " " + std::to_string(uniform(rng, -6, 6));
  }
};

}  // namespace

Lts random_lts(std::mt19937_64& rng, std::size_t max_states) {
  Lts m;
  std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(max_states)));
  for (std::size_t i = 0; i < n; ++i) m.states.push_back("s" + std::to_string(i));
  m.labels = kLabels;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t l = 0; l < kLabels.size(); ++l)
      for (std::size_t t = 0; t < n; ++t)
        if (uniform(rng, 0, 99) < 30) m.transitions.push_back({s, l, t});
  m.initial = 0;
  return m;
}

std::string random_pure_formula(std::mt19937_64& rng, int depth) { return PureGen{rng}.prop(depth); }

FirstOrderInstance random_first_order(std::mt19937_64& rng, int depth) {
  FirstOrderGen g{rng};
  std::string f = g.fixpoint(depth);
  if (uniform(rng, 0, 1)) f = "(" + f + (uniform(rng, 0, 1) ? " \\/ " : " /\\ ") + g.prop(depth - 1) + ")";
  return {f, g.preds};
}

}  // namespace hflz::test
