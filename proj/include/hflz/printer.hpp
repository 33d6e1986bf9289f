#pragma once

#include <string>

#include "hflz/formula.hpp"

namespace hflz {

/// Canonical concrete syntax, accepted back by parse_formula. Bound names are
/// regenerated from the symbols' display names, with a numeric suffix when a
/// name is already visible; applications print as `f(a, b)`.
std::string print(const FormulaPtr& formula);
std::string print(const IntExprPtr& expr);
std::string print(const Arg& arg);

}  // namespace hflz
