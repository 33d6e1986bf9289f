#include "hflz/formula.hpp"

#include <algorithm>
#include <atomic>
#include <iterator>

#include "hflz/error.hpp"

namespace hflz {

namespace {

std::atomic<std::uint64_t> next_symbol_id{1};

IdSet merge(const IdSet& a, const IdSet& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  IdSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IdSet without(IdSet set, std::uint64_t id) {
  auto it = std::lower_bound(set.begin(), set.end(), id);
  if (it != set.end() && *it == id) set.erase(it);
  return set;
}

bool is_prop(const TypePtr& t) { return t && t->is_prop(); }

}  // namespace

Symbol fresh_symbol(std::string name) { return Symbol{std::move(name), next_symbol_id.fetch_add(1)}; }

bool contains(const IdSet& set, std::uint64_t id) { return std::binary_search(set.begin(), set.end(), id); }

CmpOp complement(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Gt: return CmpOp::Le;
  }
  return op;
}

std::string_view cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

bool holds(CmpOp op, std::int64_t lhs, std::int64_t rhs) {
  switch (op) {
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Gt: return lhs > rhs;
  }
  return false;
}

// ---------------------------------------------------------------------------
// IntExpr

IntExprPtr IntExpr::constant(std::int64_t value) {
  auto e = std::shared_ptr<IntExpr>(new IntExpr());
  e->kind_ = Kind::Const;
  e->value_ = value;
  return e;
}

IntExprPtr IntExpr::var(Symbol symbol) {
  auto e = std::shared_ptr<IntExpr>(new IntExpr());
  e->kind_ = Kind::Var;
  e->free_ = {symbol.id};
  e->symbol_ = std::move(symbol);
  return e;
}

IntExprPtr IntExpr::add(IntExprPtr lhs, IntExprPtr rhs) {
  auto e = std::shared_ptr<IntExpr>(new IntExpr());
  e->kind_ = Kind::Add;
  e->free_ = merge(lhs->free_, rhs->free_);
  e->lhs_ = std::move(lhs);
  e->rhs_ = std::move(rhs);
  return e;
}

IntExprPtr IntExpr::sub(IntExprPtr lhs, IntExprPtr rhs) {
  auto e = std::shared_ptr<IntExpr>(new IntExpr());
  e->kind_ = Kind::Sub;
  e->free_ = merge(lhs->free_, rhs->free_);
  e->lhs_ = std::move(lhs);
  e->rhs_ = std::move(rhs);
  return e;
}

IntExprPtr IntExpr::neg(IntExprPtr body) {
  if (body->kind_ == Kind::Const) return constant(-body->value_);
  auto e = std::shared_ptr<IntExpr>(new IntExpr());
  e->kind_ = Kind::Neg;
  e->free_ = body->free_;
  e->lhs_ = std::move(body);
  return e;
}

// ---------------------------------------------------------------------------
// Formula

FormulaPtr Formula::tt() {
  static const FormulaPtr instance = [] {
    auto f = std::shared_ptr<Formula>(new Formula());
    f->kind_ = Kind::True;
    f->type_ = Type::prop();
    return f;
  }();
  return instance;
}

FormulaPtr Formula::ff() {
  static const FormulaPtr instance = [] {
    auto f = std::shared_ptr<Formula>(new Formula());
    f->kind_ = Kind::False;
    f->type_ = Type::prop();
    return f;
  }();
  return instance;
}

FormulaPtr Formula::var(Symbol symbol, TypePtr type) {
  if (!type) throw TypeError("variable '" + symbol.name + "' has no type");
  if (type->is_int()) throw TypeError("int variable '" + symbol.name + "' used as a formula");
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Var;
  f->free_ = {symbol.id};
  f->symbol_ = std::move(symbol);
  f->binder_type_ = type;
  f->type_ = std::move(type);
  return f;
}

FormulaPtr Formula::disj(FormulaPtr lhs, FormulaPtr rhs) { return binary(Kind::Or, std::move(lhs), std::move(rhs)); }

FormulaPtr Formula::conj(FormulaPtr lhs, FormulaPtr rhs) { return binary(Kind::And, std::move(lhs), std::move(rhs)); }

FormulaPtr Formula::binary(Kind kind, FormulaPtr lhs, FormulaPtr rhs) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = kind;
  f->free_ = merge(lhs->free_, rhs->free_);
  f->type_ = is_prop(lhs->type_) && is_prop(rhs->type_) ? Type::prop() : nullptr;
  f->lhs_ = std::move(lhs);
  f->rhs_ = std::move(rhs);
  return f;
}

FormulaPtr Formula::diamond(std::string label, FormulaPtr body) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Diamond;
  f->label_ = std::move(label);
  f->free_ = body->free_;
  f->type_ = is_prop(body->type_) ? Type::prop() : nullptr;
  f->body_ = std::move(body);
  return f;
}

FormulaPtr Formula::box(std::string label, FormulaPtr body) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Box;
  f->label_ = std::move(label);
  f->free_ = body->free_;
  f->type_ = is_prop(body->type_) ? Type::prop() : nullptr;
  f->body_ = std::move(body);
  return f;
}

FormulaPtr Formula::mu(Symbol binder, TypePtr type, FormulaPtr body) {
  return fixpoint(Kind::Mu, std::move(binder), std::move(type), std::move(body));
}

FormulaPtr Formula::nu(Symbol binder, TypePtr type, FormulaPtr body) {
  return fixpoint(Kind::Nu, std::move(binder), std::move(type), std::move(body));
}

FormulaPtr Formula::fixpoint(Kind kind, Symbol binder, TypePtr type, FormulaPtr body) {
  if (kind != Kind::Mu && kind != Kind::Nu) throw Error("fixpoint: kind must be Mu or Nu");
  if (!type || type->is_int()) throw TypeError("fixpoint binder '" + binder.name + "' must have a predicate type");
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = kind;
  f->free_ = without(body->free_, binder.id);
  f->symbol_ = std::move(binder);
  f->binder_type_ = type;
  f->type_ = same_type(body->type_, type) ? type : nullptr;
  f->body_ = std::move(body);
  return f;
}

FormulaPtr Formula::lambda(Symbol binder, TypePtr type, FormulaPtr body) {
  if (!type) throw TypeError("lambda binder '" + binder.name + "' has no type");
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Lambda;
  f->free_ = without(body->free_, binder.id);
  f->symbol_ = std::move(binder);
  f->binder_type_ = type;
  if (body->type_ && !body->type_->is_int()) f->type_ = Type::arrow(type, body->type_);
  f->body_ = std::move(body);
  return f;
}

FormulaPtr Formula::app(FormulaPtr fun, Arg arg) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::App;
  f->free_ = merge(fun->free_, hflz::free_ids(arg));
  const TypePtr& ft = fun->type_;
  if (ft && ft->is_arrow()) {
    if (is_int_arg(arg)) {
      if (ft->argument()->is_int()) f->type_ = ft->result();
    } else {
      const auto& a = std::get<FormulaPtr>(arg);
      if (same_type(a->type_, ft->argument())) f->type_ = ft->result();
    }
  }
  f->body_ = std::move(fun);
  f->arg_ = std::move(arg);
  return f;
}

FormulaPtr Formula::atom(CmpOp op, IntExprPtr lhs, IntExprPtr rhs) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Atom;
  f->op_ = op;
  f->free_ = merge(lhs->free_ids(), rhs->free_ids());
  f->int_lhs_ = std::move(lhs);
  f->int_rhs_ = std::move(rhs);
  f->type_ = Type::prop();
  return f;
}

FormulaPtr Formula::exists(Symbol binder, std::vector<IntExprPtr> bounds, FormulaPtr body) {
  return quantifier(Kind::Exists, std::move(binder), std::move(bounds), std::move(body));
}

FormulaPtr Formula::forall(Symbol binder, std::vector<IntExprPtr> bounds, FormulaPtr body) {
  return quantifier(Kind::Forall, std::move(binder), std::move(bounds), std::move(body));
}

FormulaPtr Formula::quantifier(Kind kind, Symbol binder, std::vector<IntExprPtr> bounds, FormulaPtr body) {
  if (kind != Kind::Exists && kind != Kind::Forall) throw Error("quantifier: kind must be Exists or Forall");
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = kind;
  IdSet free = without(body->free_, binder.id);
  for (const auto& b : bounds) free = merge(free, b->free_ids());
  f->free_ = std::move(free);
  f->symbol_ = std::move(binder);
  f->binder_type_ = Type::integer();
  f->bounds_ = std::move(bounds);
  f->type_ = is_prop(body->type_) ? Type::prop() : nullptr;
  f->body_ = std::move(body);
  return f;
}

// ---------------------------------------------------------------------------
// Helpers

bool is_int_arg(const Arg& arg) { return std::holds_alternative<IntExprPtr>(arg); }

const IdSet& free_ids(const Arg& arg) {
  if (is_int_arg(arg)) return std::get<IntExprPtr>(arg)->free_ids();
  return std::get<FormulaPtr>(arg)->free_ids();
}

Spine spine_of(const FormulaPtr& formula) {
  Spine s;
  FormulaPtr f = formula;
  while (f->is(Formula::Kind::App)) {
    s.args.push_back(f->arg());
    f = f->fun();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = f;
  return s;
}

FormulaPtr apply_all(FormulaPtr head, const std::vector<Arg>& args) {
  for (const auto& a : args) head = Formula::app(std::move(head), a);
  return head;
}

FormulaPtr conj_all(const std::vector<FormulaPtr>& items) {
  if (items.empty()) return Formula::tt();
  FormulaPtr acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) acc = Formula::conj(acc, items[i]);
  return acc;
}

FormulaPtr disj_all(const std::vector<FormulaPtr>& items) {
  if (items.empty()) return Formula::ff();
  FormulaPtr acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) acc = Formula::disj(acc, items[i]);
  return acc;
}

namespace {

template <typename Pred>
bool any_node(const FormulaPtr& f, const Pred& pred) {
  if (pred(*f)) return true;
  switch (f->kind()) {
    case Formula::Kind::Or:
    case Formula::Kind::And:
      return any_node(f->lhs(), pred) || any_node(f->rhs(), pred);
    case Formula::Kind::App:
      if (!is_int_arg(f->arg()) && any_node(std::get<FormulaPtr>(f->arg()), pred)) return true;
      return any_node(f->fun(), pred);
    case Formula::Kind::Diamond:
    case Formula::Kind::Box:
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
    case Formula::Kind::Lambda:
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return any_node(f->body(), pred);
    default:
      return false;
  }
}

}  // namespace

bool mentions_integers(const FormulaPtr& formula) {
  return any_node(formula, [](const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        return true;
      case Formula::Kind::App:
        return is_int_arg(f.arg());
      case Formula::Kind::Lambda:
        return f.binder_type()->is_int();
      default:
        return false;
    }
  });
}

bool has_modalities(const FormulaPtr& formula) {
  return any_node(formula, [](const Formula& f) {
    return f.is(Formula::Kind::Diamond) || f.is(Formula::Kind::Box);
  });
}

bool has_kind(const FormulaPtr& formula, Formula::Kind kind) {
  return any_node(formula, [kind](const Formula& f) { return f.is(kind); });
}

}  // namespace hflz
