#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "hflz/formula.hpp"

namespace hflz {

/// Parses concrete formula syntax. `env` lists the free variables the text may
/// mention; every binder gets a fresh symbol. Besides the core grammar this
/// accepts tuple binders `\(x: int, y: int).`, tuple arguments `f(a, b)`,
/// quantifiers `forall x, y.` / `exists u >= max(i + 1, 1).`, and `a => b`
/// (read as dual(a) \/ b). The result is typechecked against `env`.
FormulaPtr parse_formula(std::string_view text, const std::vector<TypedSymbol>& env = {});

IntExprPtr parse_int_expr(std::string_view text, const std::vector<TypedSymbol>& env = {});

TypePtr parse_type(std::string_view text);

}  // namespace hflz
