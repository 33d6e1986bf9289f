#include "hflz/typecheck.hpp"

#include <algorithm>
#include <unordered_map>

#include "hflz/error.hpp"
#include "hflz/printer.hpp"

namespace hflz {

namespace {

std::string excerpt(const FormulaPtr& f) {
  std::string s = print(f);
  if (s.size() > 120) s = s.substr(0, 117) + "...";
  return s;
}

class Checker {
 public:
  explicit Checker(const std::vector<TypedSymbol>& env) {
    for (const auto& s : env) types_[s.symbol.id] = s.type;
  }

  void check_int(const IntExprPtr& e) {
    switch (e->kind()) {
      case IntExpr::Kind::Var: {
        auto it = types_.find(e->symbol().id);
        if (it == types_.end()) throw TypeError("unbound integer variable '" + e->symbol().name + "'");
        if (!it->second->is_int())
          throw TypeError("'" + e->symbol().name + "' has type " + it->second->str() + " but is used as an integer");
        break;
      }
      case IntExpr::Kind::Add:
      case IntExpr::Kind::Sub:
        check_int(e->lhs());
        check_int(e->rhs());
        break;
      case IntExpr::Kind::Neg: check_int(e->lhs()); break;
      case IntExpr::Kind::Const: break;
    }
  }

  TypePtr check(const FormulaPtr& f) {
    switch (f->kind()) {
      case Formula::Kind::True:
      case Formula::Kind::False: return Type::prop();
      case Formula::Kind::Var: {
        auto it = types_.find(f->symbol().id);
        if (it == types_.end()) throw TypeError("unbound variable '" + f->symbol().name + "'");
        if (!same_type(it->second, f->binder_type()))
          throw TypeError("variable '" + f->symbol().name + "' is declared " + it->second->str() + " but used as " +
                          f->binder_type()->str());
        return it->second;
      }
      case Formula::Kind::Or:
      case Formula::Kind::And: {
        expect_prop(f->lhs(), f);
        expect_prop(f->rhs(), f);
        return Type::prop();
      }
      case Formula::Kind::Diamond:
      case Formula::Kind::Box:
        expect_prop(f->body(), f);
        return Type::prop();
      case Formula::Kind::Mu:
      case Formula::Kind::Nu: {
        with(f->symbol(), f->binder_type());
        TypePtr body = check(f->body());
        without(f->symbol());
        if (!same_type(body, f->binder_type()))
          throw TypeError("fixpoint '" + f->symbol().name + "' is declared " + f->binder_type()->str() +
                          " but its body has type " + body->str());
        return f->binder_type();
      }
      case Formula::Kind::Lambda: {
        with(f->symbol(), f->binder_type());
        TypePtr body = check(f->body());
        without(f->symbol());
        return Type::arrow(f->binder_type(), body);
      }
      case Formula::Kind::App: {
        TypePtr fun = check(f->fun());
        if (!fun->is_arrow()) throw TypeError("applying a non-function of type " + fun->str() + " in " + excerpt(f));
        if (is_int_arg(f->arg())) {
          check_int(std::get<IntExprPtr>(f->arg()));
          if (!fun->argument()->is_int())
            throw TypeError("integer argument passed where " + fun->argument()->str() + " is expected in " + excerpt(f));
        } else {
          TypePtr a = check(std::get<FormulaPtr>(f->arg()));
          if (!same_type(a, fun->argument()))
            throw TypeError("argument of type " + a->str() + " passed where " + fun->argument()->str() +
                            " is expected in " + excerpt(f));
        }
        return fun->result();
      }
      case Formula::Kind::Atom:
        check_int(f->int_lhs());
        check_int(f->int_rhs());
        return Type::prop();
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        for (const auto& b : f->bounds()) check_int(b);
        with(f->symbol(), Type::integer());
        expect_prop(f->body(), f);
        without(f->symbol());
        return Type::prop();
      }
    }
    throw TypeError("unknown formula node");
  }

 private:
  void expect_prop(const FormulaPtr& child, const FormulaPtr& parent) {
    TypePtr t = check(child);
    if (!t->is_prop())
      throw TypeError("expected a proposition but found type " + t->str() + " in " + excerpt(parent));
  }

  void with(const Symbol& s, const TypePtr& t) {
    auto& slot = types_[s.id];
    saved_.push_back(slot);
    slot = t;
  }

  void without(const Symbol& s) {
    TypePtr prev = saved_.back();
    saved_.pop_back();
    if (prev) types_[s.id] = prev;
    else types_.erase(s.id);
  }

  std::unordered_map<std::uint64_t, TypePtr> types_;
  std::vector<TypePtr> saved_;
};

void collect_order(const FormulaPtr& f, unsigned& best) {
  if (f->binder_type()) best = std::max(best, order_of(*f->binder_type()));
  switch (f->kind()) {
    case Formula::Kind::Or:
    case Formula::Kind::And:
      collect_order(f->lhs(), best);
      collect_order(f->rhs(), best);
      break;
    case Formula::Kind::App:
      collect_order(f->fun(), best);
      if (!is_int_arg(f->arg())) collect_order(std::get<FormulaPtr>(f->arg()), best);
      break;
    case Formula::Kind::Diamond:
    case Formula::Kind::Box:
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
    case Formula::Kind::Lambda:
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: collect_order(f->body(), best); break;
    default: break;
  }
}

}  // namespace

TypePtr typecheck(const FormulaPtr& formula, const std::vector<TypedSymbol>& env) {
  Checker c(env);
  TypePtr t = c.check(formula);
  if (t->is_int()) throw TypeError("integer expression where a predicate is expected");
  return t;
}

void require_prop(const FormulaPtr& formula, const std::vector<TypedSymbol>& env) {
  TypePtr t = typecheck(formula, env);
  if (!t->is_prop()) throw TypeError("expected a formula of type prop, found " + t->str());
}

unsigned formula_order(const FormulaPtr& formula) {
  unsigned best = 0;
  collect_order(formula, best);
  return best;
}

}  // namespace hflz
