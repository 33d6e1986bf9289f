#include "hflz/rewrite.hpp"

#include <algorithm>
#include <unordered_map>

#include "formula_util.hpp"
#include "hflz/error.hpp"
#include "hflz/printer.hpp"

namespace hflz {

namespace {

using detail::map_children;

class Substitution {
 public:
  explicit Substitution(const std::vector<std::pair<Symbol, Arg>>& bindings) {
    for (const auto& [sym, value] : bindings) {
      map_[sym.id] = value;
      const IdSet& fv = free_ids(value);
      value_free_.insert(value_free_.end(), fv.begin(), fv.end());
    }
    std::sort(value_free_.begin(), value_free_.end());
  }

  IntExprPtr go(const IntExprPtr& e) {
    if (!touches(e->free_ids())) return e;
    switch (e->kind()) {
      case IntExpr::Kind::Var: {
        auto it = map_.find(e->symbol().id);
        if (it == map_.end()) return e;
        if (!is_int_arg(it->second))
          throw TypeError("cannot substitute a formula for integer variable '" + e->symbol().name + "'");
        return std::get<IntExprPtr>(it->second);
      }
      case IntExpr::Kind::Add: return IntExpr::add(go(e->lhs()), go(e->rhs()));
      case IntExpr::Kind::Sub: return IntExpr::sub(go(e->lhs()), go(e->rhs()));
      case IntExpr::Kind::Neg: return IntExpr::neg(go(e->lhs()));
      case IntExpr::Kind::Const: return e;
    }
    return e;
  }

  FormulaPtr go(const FormulaPtr& f) {
    if (!touches(f->free_ids())) return f;
    if (f->is(Formula::Kind::Var)) {
      auto it = map_.find(f->symbol().id);
      if (it == map_.end()) return f;
      if (is_int_arg(it->second))
        throw TypeError("cannot substitute an integer for predicate variable '" + f->symbol().name + "'");
      const FormulaPtr& v = std::get<FormulaPtr>(it->second);
      if (!same_type(v->type(), f->binder_type()))
        throw TypeError("substituting a value of type " + (v->type() ? v->type()->str() : std::string("<ill-typed>")) +
                        " for '" + f->symbol().name + "' of type " + f->binder_type()->str());
      return v;
    }
    if (!f->is_binder()) {
      return map_children(
          f, [this](const FormulaPtr& c) { return go(c); }, [this](const IntExprPtr& c) { return go(c); });
    }

    // Binder: bounds of quantifiers live outside the scope.
    std::vector<IntExprPtr> bounds;
    for (const auto& b : f->bounds()) bounds.push_back(go(b));

    const Symbol& s = f->symbol();
    TypePtr type = f->is_quantifier() ? Type::integer() : f->binder_type();
    Symbol bound = s;
    std::optional<Arg> saved;
    auto it = map_.find(s.id);
    if (it != map_.end()) {
      saved = it->second;
      map_.erase(it);
    }
    bool rename = contains(value_free_, s.id);
    if (rename) {
      bound = fresh_symbol(s.name);
      map_[s.id] = detail::reference_to(bound, type);
    }
    FormulaPtr body = go(f->body());
    if (rename) map_.erase(s.id);
    if (saved) map_[s.id] = *saved;

    switch (f->kind()) {
      case Formula::Kind::Mu:
      case Formula::Kind::Nu: return Formula::fixpoint(f->kind(), bound, type, body);
      case Formula::Kind::Lambda: return Formula::lambda(bound, type, body);
      default: return Formula::quantifier(f->kind(), bound, std::move(bounds), body);
    }
  }

 private:
  bool touches(const IdSet& free) const {
    for (const auto& [id, v] : map_)
      if (contains(free, id)) return true;
    return false;
  }

  std::unordered_map<std::uint64_t, Arg> map_;
  IdSet value_free_;
};

bool arg_type_matches(const Arg& arg, const TypePtr& expected) {
  if (is_int_arg(arg)) return expected->is_int();
  return same_type(std::get<FormulaPtr>(arg)->type(), expected);
}

template <typename Step>
std::optional<FormulaPtr> leftmost(const FormulaPtr& f, const Step& step) {
  if (auto r = step(f)) return r;
  switch (f->kind()) {
    case Formula::Kind::Or:
    case Formula::Kind::And: {
      if (auto l = leftmost(f->lhs(), step))
        return f->is(Formula::Kind::Or) ? Formula::disj(*l, f->rhs()) : Formula::conj(*l, f->rhs());
      if (auto r = leftmost(f->rhs(), step))
        return f->is(Formula::Kind::Or) ? Formula::disj(f->lhs(), *r) : Formula::conj(f->lhs(), *r);
      return std::nullopt;
    }
    case Formula::Kind::App: {
      if (auto g = leftmost(f->fun(), step)) return Formula::app(*g, f->arg());
      if (!is_int_arg(f->arg()))
        if (auto a = leftmost(std::get<FormulaPtr>(f->arg()), step)) return Formula::app(f->fun(), *a);
      return std::nullopt;
    }
    case Formula::Kind::Diamond:
    case Formula::Kind::Box:
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
    case Formula::Kind::Lambda:
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      auto b = leftmost(f->body(), step);
      if (!b) return std::nullopt;
      return map_children(
          f, [&](const FormulaPtr&) { return *b; }, [](const IntExprPtr& e) { return e; });
    }
    default: return std::nullopt;
  }
}

class AlphaEq {
 public:
  bool eq(const IntExprPtr& a, const IntExprPtr& b) const {
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
      case IntExpr::Kind::Const: return a->value() == b->value();
      case IntExpr::Kind::Var: return same_var(a->symbol().id, b->symbol().id);
      case IntExpr::Kind::Neg: return eq(a->lhs(), b->lhs());
      default: return eq(a->lhs(), b->lhs()) && eq(a->rhs(), b->rhs());
    }
  }

  bool eq(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
      case Formula::Kind::True:
      case Formula::Kind::False: return true;
      case Formula::Kind::Var: return same_var(a->symbol().id, b->symbol().id);
      case Formula::Kind::Or:
      case Formula::Kind::And: return eq(a->lhs(), b->lhs()) && eq(a->rhs(), b->rhs());
      case Formula::Kind::Diamond:
      case Formula::Kind::Box: return a->label() == b->label() && eq(a->body(), b->body());
      case Formula::Kind::App:
        if (is_int_arg(a->arg()) != is_int_arg(b->arg())) return false;
        if (!eq(a->fun(), b->fun())) return false;
        if (is_int_arg(a->arg())) return eq(std::get<IntExprPtr>(a->arg()), std::get<IntExprPtr>(b->arg()));
        return eq(std::get<FormulaPtr>(a->arg()), std::get<FormulaPtr>(b->arg()));
      case Formula::Kind::Atom: return a->op() == b->op() && eq(a->int_lhs(), b->int_lhs()) && eq(a->int_rhs(), b->int_rhs());
      default: {
        if (!same_type(a->binder_type(), b->binder_type())) return false;
        if (a->bounds().size() != b->bounds().size()) return false;
        for (std::size_t i = 0; i < a->bounds().size(); ++i)
          if (!eq(a->bounds()[i], b->bounds()[i])) return false;
        left_.push_back(a->symbol().id);
        right_.push_back(b->symbol().id);
        bool r = eq(a->body(), b->body());
        left_.pop_back();
        right_.pop_back();
        return r;
      }
    }
  }

 private:
  bool same_var(std::uint64_t x, std::uint64_t y) const {
    // Innermost binding wins on both sides.
    for (std::size_t i = left_.size(); i-- > 0;) {
      bool lx = left_[i] == x;
      bool ry = right_[i] == y;
      if (lx || ry) return lx && ry;
    }
    return x == y;
  }

  std::vector<std::uint64_t> left_;
  std::vector<std::uint64_t> right_;
};

struct Linear {
  std::vector<std::pair<Symbol, std::int64_t>> terms;
  std::int64_t constant = 0;

  void add_var(const Symbol& s, std::int64_t k) {
    for (auto& [sym, c] : terms)
      if (sym.id == s.id) {
        c += k;
        return;
      }
    terms.emplace_back(s, k);
  }
};

void linearize(const IntExprPtr& e, std::int64_t sign, Linear& out) {
  switch (e->kind()) {
    case IntExpr::Kind::Const: out.constant += sign * e->value(); break;
    case IntExpr::Kind::Var: out.add_var(e->symbol(), sign); break;
    case IntExpr::Kind::Add:
      linearize(e->lhs(), sign, out);
      linearize(e->rhs(), sign, out);
      break;
    case IntExpr::Kind::Sub:
      linearize(e->lhs(), sign, out);
      linearize(e->rhs(), -sign, out);
      break;
    case IntExpr::Kind::Neg: linearize(e->lhs(), -sign, out); break;
  }
}

}  // namespace

FormulaPtr substitute(const FormulaPtr& formula, const Symbol& x, const Arg& value) {
  Substitution s({{x, value}});
  return s.go(formula);
}

IntExprPtr substitute(const IntExprPtr& expr, const Symbol& x, const IntExprPtr& value) {
  Substitution s({{x, value}});
  return s.go(expr);
}

FormulaPtr substitute_many(const FormulaPtr& formula, const std::vector<std::pair<Symbol, Arg>>& bindings) {
  if (bindings.empty()) return formula;
  Substitution s(bindings);
  return s.go(formula);
}

FormulaPtr unfold_fixpoint(const FormulaPtr& formula) {
  if (!formula->is_fixpoint()) throw Error("not a fixpoint: " + print(formula));
  return substitute(formula->body(), formula->symbol(), formula);
}

FormulaPtr beta_step(const FormulaPtr& formula) {
  if (!formula->is(Formula::Kind::App) || !formula->fun()->is(Formula::Kind::Lambda))
    throw Error("no redex: " + print(formula));
  const FormulaPtr& lam = formula->fun();
  if (!arg_type_matches(formula->arg(), lam->binder_type()))
    throw TypeError("argument does not match parameter type " + lam->binder_type()->str() + " in " + print(formula));
  return substitute(lam->body(), lam->symbol(), formula->arg());
}

std::optional<FormulaPtr> beta_leftmost(const FormulaPtr& formula) {
  return leftmost(formula, [](const FormulaPtr& f) -> std::optional<FormulaPtr> {
    if (f->is(Formula::Kind::App) && f->fun()->is(Formula::Kind::Lambda)) return beta_step(f);
    return std::nullopt;
  });
}

std::optional<FormulaPtr> unfold_leftmost(const FormulaPtr& formula) {
  return leftmost(formula, [](const FormulaPtr& f) -> std::optional<FormulaPtr> {
    if (f->is_fixpoint()) return unfold_fixpoint(f);
    return std::nullopt;
  });
}

FormulaPtr dualize(const FormulaPtr& f) {
  using K = Formula::Kind;
  switch (f->kind()) {
    case K::True: return Formula::ff();
    case K::False: return Formula::tt();
    case K::Var: return f;
    case K::Or: return Formula::conj(dualize(f->lhs()), dualize(f->rhs()));
    case K::And: return Formula::disj(dualize(f->lhs()), dualize(f->rhs()));
    case K::Diamond: return Formula::box(f->label(), dualize(f->body()));
    case K::Box: return Formula::diamond(f->label(), dualize(f->body()));
    case K::Mu: return Formula::nu(f->symbol(), f->binder_type(), dualize(f->body()));
    case K::Nu: return Formula::mu(f->symbol(), f->binder_type(), dualize(f->body()));
    case K::Lambda: return Formula::lambda(f->symbol(), f->binder_type(), dualize(f->body()));
    case K::App:
      if (is_int_arg(f->arg())) return Formula::app(dualize(f->fun()), f->arg());
      return Formula::app(dualize(f->fun()), dualize(std::get<FormulaPtr>(f->arg())));
    case K::Atom: return Formula::atom(complement(f->op()), f->int_lhs(), f->int_rhs());
    case K::Exists: return Formula::forall(f->symbol(), f->bounds(), dualize(f->body()));
    case K::Forall: return Formula::exists(f->symbol(), f->bounds(), dualize(f->body()));
  }
  return f;
}

bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  AlphaEq e;
  return e.eq(a, b);
}

bool alpha_equal(const IntExprPtr& a, const IntExprPtr& b) {
  AlphaEq e;
  return e.eq(a, b);
}

IntExprPtr normalize_arith(const IntExprPtr& expr) {
  Linear lin;
  linearize(expr, 1, lin);
  IntExprPtr acc;
  for (const auto& [sym, k] : lin.terms) {
    for (std::int64_t i = 0; i < std::llabs(k); ++i) {
      IntExprPtr v = IntExpr::var(sym);
      if (k > 0) acc = acc ? IntExpr::add(acc, v) : v;
      else acc = acc ? IntExpr::sub(acc, v) : IntExpr::neg(v);
    }
  }
  std::int64_t c = lin.constant;
  if (!acc) return IntExpr::constant(c);
  if (c > 0) return IntExpr::add(acc, IntExpr::constant(c));
  if (c < 0) return IntExpr::sub(acc, IntExpr::constant(-c));
  return acc;
}

FormulaPtr normalize_arith(const FormulaPtr& formula) {
  return map_children(
      formula, [](const FormulaPtr& c) { return normalize_arith(c); },
      [](const IntExprPtr& e) { return normalize_arith(e); });
}

std::int64_t eval_constant(const IntExprPtr& expr) {
  switch (expr->kind()) {
    case IntExpr::Kind::Const: return expr->value();
    case IntExpr::Kind::Var: throw Error("expression mentions variable '" + expr->symbol().name + "'");
    case IntExpr::Kind::Add: return eval_constant(expr->lhs()) + eval_constant(expr->rhs());
    case IntExpr::Kind::Sub: return eval_constant(expr->lhs()) - eval_constant(expr->rhs());
    case IntExpr::Kind::Neg: return -eval_constant(expr->lhs());
  }
  return 0;
}

}  // namespace hflz
