#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hflz/type.hpp"

namespace hflz {

/// A variable. `id` is globally unique per binder; `name` is only for display.
struct Symbol {
  std::string name;
  std::uint64_t id = 0;

  friend bool operator==(const Symbol& a, const Symbol& b) { return a.id == b.id; }
};

Symbol fresh_symbol(std::string name);

/// Sorted, duplicate-free set of variable ids.
using IdSet = std::vector<std::uint64_t>;

bool contains(const IdSet& set, std::uint64_t id);

enum class CmpOp { Le, Lt, Eq, Ne, Ge, Gt };

/// The complementary comparison (<= becomes >, = becomes !=, ...).
CmpOp complement(CmpOp op);
std::string_view cmp_text(CmpOp op);
bool holds(CmpOp op, std::int64_t lhs, std::int64_t rhs);

class IntExpr;
using IntExprPtr = std::shared_ptr<const IntExpr>;

/// Linear integer expressions. There is no multiplication node.
class IntExpr {
 public:
  enum class Kind { Const, Var, Add, Sub, Neg };

  static IntExprPtr constant(std::int64_t value);
  static IntExprPtr var(Symbol symbol);
  static IntExprPtr add(IntExprPtr lhs, IntExprPtr rhs);
  static IntExprPtr sub(IntExprPtr lhs, IntExprPtr rhs);
  /// Negating a constant folds to a negative constant.
  static IntExprPtr neg(IntExprPtr body);

  Kind kind() const { return kind_; }
  std::int64_t value() const { return value_; }
  const Symbol& symbol() const { return symbol_; }
  const IntExprPtr& lhs() const { return lhs_; }
  const IntExprPtr& rhs() const { return rhs_; }
  const IdSet& free_ids() const { return free_; }

 private:
  IntExpr() = default;

  Kind kind_ = Kind::Const;
  std::int64_t value_ = 0;
  Symbol symbol_;
  IntExprPtr lhs_;
  IntExprPtr rhs_;
  IdSet free_;
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Application arguments are either formulas or integer expressions.
using Arg = std::variant<FormulaPtr, IntExprPtr>;

/// HFL(Z) formulas in negation normal form. Exists/Forall are integer
/// quantifier sugar kept until desugar_quantifiers runs; their optional lower
/// bounds denote `x >= max(bounds...)`.
class Formula {
 public:
  enum class Kind { True, False, Var, Or, And, Diamond, Box, Mu, Nu, Lambda, App, Atom, Exists, Forall };

  static FormulaPtr tt();
  static FormulaPtr ff();
  static FormulaPtr var(Symbol symbol, TypePtr type);
  static FormulaPtr disj(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr conj(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr diamond(std::string label, FormulaPtr body);
  static FormulaPtr box(std::string label, FormulaPtr body);
  static FormulaPtr mu(Symbol binder, TypePtr type, FormulaPtr body);
  static FormulaPtr nu(Symbol binder, TypePtr type, FormulaPtr body);
  static FormulaPtr fixpoint(Kind kind, Symbol binder, TypePtr type, FormulaPtr body);
  static FormulaPtr lambda(Symbol binder, TypePtr type, FormulaPtr body);
  static FormulaPtr app(FormulaPtr fun, Arg arg);
  static FormulaPtr atom(CmpOp op, IntExprPtr lhs, IntExprPtr rhs);
  static FormulaPtr exists(Symbol binder, std::vector<IntExprPtr> bounds, FormulaPtr body);
  static FormulaPtr forall(Symbol binder, std::vector<IntExprPtr> bounds, FormulaPtr body);
  static FormulaPtr quantifier(Kind kind, Symbol binder, std::vector<IntExprPtr> bounds, FormulaPtr body);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  bool is_fixpoint() const { return kind_ == Kind::Mu || kind_ == Kind::Nu; }
  bool is_quantifier() const { return kind_ == Kind::Exists || kind_ == Kind::Forall; }
  bool is_binder() const { return is_fixpoint() || is_quantifier() || kind_ == Kind::Lambda; }

  /// Var, Mu, Nu, Lambda, Exists, Forall.
  const Symbol& symbol() const { return symbol_; }
  /// Declared type of a Var or binder (int for quantifiers).
  const TypePtr& binder_type() const { return binder_type_; }
  const std::string& label() const { return label_; }
  const FormulaPtr& lhs() const { return lhs_; }
  const FormulaPtr& rhs() const { return rhs_; }
  /// Body of modalities and binders; function position of App.
  const FormulaPtr& body() const { return body_; }
  const FormulaPtr& fun() const { return body_; }
  const Arg& arg() const { return arg_; }
  CmpOp op() const { return op_; }
  const IntExprPtr& int_lhs() const { return int_lhs_; }
  const IntExprPtr& int_rhs() const { return int_rhs_; }
  const std::vector<IntExprPtr>& bounds() const { return bounds_; }

  /// Type synthesized bottom-up at construction; null when ill-typed.
  const TypePtr& type() const { return type_; }
  const IdSet& free_ids() const { return free_; }

 private:
  Formula() = default;
  static FormulaPtr binary(Kind kind, FormulaPtr lhs, FormulaPtr rhs);

  Kind kind_ = Kind::True;
  Symbol symbol_;
  TypePtr binder_type_;
  std::string label_;
  FormulaPtr lhs_;
  FormulaPtr rhs_;
  FormulaPtr body_;
  Arg arg_;
  CmpOp op_ = CmpOp::Le;
  IntExprPtr int_lhs_;
  IntExprPtr int_rhs_;
  std::vector<IntExprPtr> bounds_;
  TypePtr type_;
  IdSet free_;
};

/// Head and arguments of an application spine `h a1 ... an` (n may be 0).
struct Spine {
  FormulaPtr head;
  std::vector<Arg> args;
};

Spine spine_of(const FormulaPtr& formula);
FormulaPtr apply_all(FormulaPtr head, const std::vector<Arg>& args);

/// Left-nested conjunction/disjunction; empty lists yield true/false.
FormulaPtr conj_all(const std::vector<FormulaPtr>& items);
FormulaPtr disj_all(const std::vector<FormulaPtr>& items);

bool is_int_arg(const Arg& arg);
const IdSet& free_ids(const Arg& arg);

/// A variable in scope when parsing or typechecking open formulas.
struct TypedSymbol {
  Symbol symbol;
  TypePtr type;
};

/// True if the formula contains integer expressions, atoms, quantifiers or
/// int-typed binders.
bool mentions_integers(const FormulaPtr& formula);
bool has_modalities(const FormulaPtr& formula);
bool has_kind(const FormulaPtr& formula, Formula::Kind kind);

}  // namespace hflz
