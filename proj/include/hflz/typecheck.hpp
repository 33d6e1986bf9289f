#pragma once

#include <vector>

#include "hflz/formula.hpp"

namespace hflz {

/// Simple typing. Free variables must appear in `env`; the formula itself
/// must have a predicate type. Throws TypeError describing the first offending
/// subformula.
TypePtr typecheck(const FormulaPtr& formula, const std::vector<TypedSymbol>& env = {});

/// typecheck() and additionally require type prop.
void require_prop(const FormulaPtr& formula, const std::vector<TypedSymbol>& env = {});

/// Largest order among the types of all binders and variables in the formula.
unsigned formula_order(const FormulaPtr& formula);

}  // namespace hflz
