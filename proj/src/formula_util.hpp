#pragma once

#include <utility>
#include <vector>

#include "hflz/formula.hpp"

namespace hflz::detail {

/// Rebuilds `f` with every direct formula child replaced by `ff(child)` and
/// every integer child (atom sides, int arguments, quantifier bounds) by
/// `fi(child)`. Binder symbols and types are kept. Returns `f` itself when
/// nothing changed.
template <typename FF, typename FI>
FormulaPtr map_children(const FormulaPtr& f, FF&& ff, FI&& fi) {
  using K = Formula::Kind;
  switch (f->kind()) {
    case K::True:
    case K::False:
    case K::Var: return f;
    case K::Or:
    case K::And: {
      FormulaPtr l = ff(f->lhs());
      FormulaPtr r = ff(f->rhs());
      if (l == f->lhs() && r == f->rhs()) return f;
      return f->is(K::Or) ? Formula::disj(l, r) : Formula::conj(l, r);
    }
    case K::Diamond:
    case K::Box: {
      FormulaPtr b = ff(f->body());
      if (b == f->body()) return f;
      return f->is(K::Diamond) ? Formula::diamond(f->label(), b) : Formula::box(f->label(), b);
    }
    case K::Mu:
    case K::Nu: {
      FormulaPtr b = ff(f->body());
      if (b == f->body()) return f;
      return Formula::fixpoint(f->kind(), f->symbol(), f->binder_type(), b);
    }
    case K::Lambda: {
      FormulaPtr b = ff(f->body());
      if (b == f->body()) return f;
      return Formula::lambda(f->symbol(), f->binder_type(), b);
    }
    case K::App: {
      FormulaPtr fun = ff(f->fun());
      if (is_int_arg(f->arg())) {
        IntExprPtr a = fi(std::get<IntExprPtr>(f->arg()));
        if (fun == f->fun() && a == std::get<IntExprPtr>(f->arg())) return f;
        return Formula::app(fun, a);
      }
      FormulaPtr a = ff(std::get<FormulaPtr>(f->arg()));
      if (fun == f->fun() && a == std::get<FormulaPtr>(f->arg())) return f;
      return Formula::app(fun, a);
    }
    case K::Atom: {
      IntExprPtr l = fi(f->int_lhs());
      IntExprPtr r = fi(f->int_rhs());
      if (l == f->int_lhs() && r == f->int_rhs()) return f;
      return Formula::atom(f->op(), l, r);
    }
    case K::Exists:
    case K::Forall: {
      bool same = true;
      std::vector<IntExprPtr> bounds;
      for (const auto& b : f->bounds()) {
        bounds.push_back(fi(b));
        same = same && bounds.back() == b;
      }
      FormulaPtr body = ff(f->body());
      if (same && body == f->body()) return f;
      return Formula::quantifier(f->kind(), f->symbol(), std::move(bounds), body);
    }
  }
  return f;
}

/// The formula variable or integer variable that refers to binder `s`.
inline Arg reference_to(const Symbol& s, const TypePtr& type) {
  if (type->is_int()) return IntExpr::var(s);
  return Formula::var(s, type);
}

}  // namespace hflz::detail
