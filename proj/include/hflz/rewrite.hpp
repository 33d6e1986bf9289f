#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hflz/formula.hpp"

namespace hflz {

/// Capture-avoiding substitution of `value` for the variable `x` (matched by
/// id). Binders whose ids are free in `value` are renamed on the way down.
/// Throws TypeError when a formula value's type differs from the type recorded
/// at an occurrence of `x`, or when an int value replaces a predicate variable.
FormulaPtr substitute(const FormulaPtr& formula, const Symbol& x, const Arg& value);
IntExprPtr substitute(const IntExprPtr& expr, const Symbol& x, const IntExprPtr& value);
/// Simultaneous substitution.
FormulaPtr substitute_many(const FormulaPtr& formula, const std::vector<std::pair<Symbol, Arg>>& bindings);

/// sigma x. phi  ->  phi[x := sigma x. phi]. Throws Error("not a fixpoint").
FormulaPtr unfold_fixpoint(const FormulaPtr& formula);

/// (\x. phi) a  ->  phi[x := a] at the root. Throws Error("no redex").
FormulaPtr beta_step(const FormulaPtr& formula);

/// Contracts the leftmost-outermost beta redex anywhere in the formula.
std::optional<FormulaPtr> beta_leftmost(const FormulaPtr& formula);

/// Unfolds the leftmost-outermost fixpoint node anywhere in the formula.
std::optional<FormulaPtr> unfold_leftmost(const FormulaPtr& formula);

/// De Morgan dual: swaps \/ and /\, mu and nu, <a> and [a], true and false,
/// exists and forall, and complements atoms. Variables are left in place.
FormulaPtr dualize(const FormulaPtr& formula);

/// Structural equality up to renaming of bound variables. Free variables are
/// compared by id.
bool alpha_equal(const FormulaPtr& a, const FormulaPtr& b);
bool alpha_equal(const IntExprPtr& a, const IntExprPtr& b);

/// Rewrites every integer expression to a canonical linear form: variables in
/// first-occurrence order, then the constant (so `y + 1 - 2` becomes `y - 1`
/// and `0 + 1` becomes `1`).
FormulaPtr normalize_arith(const FormulaPtr& formula);
IntExprPtr normalize_arith(const IntExprPtr& expr);

/// Evaluates a closed integer expression; throws Error if it has variables.
std::int64_t eval_constant(const IntExprPtr& expr);

}  // namespace hflz
