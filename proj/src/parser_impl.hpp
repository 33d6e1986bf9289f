#pragma once

#include <variant>
#include <vector>

#include "hflz/formula.hpp"
#include "lexer.hpp"

namespace hflz::detail {

using Term = std::variant<FormulaPtr, IntExprPtr>;

/// Recursive-descent parser for formulas, integer expressions and types over
/// a shared token stream, so other front ends can embed formula syntax.
class FormulaParser {
 public:
  FormulaParser(TokenStream& ts, std::vector<TypedSymbol> env) : ts_(ts), scope_(std::move(env)) {}

  Term term();
  FormulaPtr formula();
  /// Additive-level integer expression (no comparison).
  IntExprPtr int_expr();
  TypePtr type();

  void push(TypedSymbol s) { scope_.push_back(std::move(s)); }
  void pop() { scope_.pop_back(); }
  const TypedSymbol* lookup(const std::string& name) const;

 private:
  Term implies();
  Term disjunction();
  Term conjunction();
  Term comparison();
  Term additive();
  Term multiplicative();
  Term unary();
  Term application();
  Term primary();
  Term binder();
  bool starts_argument() const;
  void arguments(std::vector<Term>& out);
  std::vector<IntExprPtr> lower_bounds();
  TypePtr atomic_type();

  FormulaPtr as_formula(Term t, const Token& where) const;
  IntExprPtr as_int(Term t, const Token& where) const;

  TokenStream& ts_;
  std::vector<TypedSymbol> scope_;
};

}  // namespace hflz::detail
