#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hflz/formula.hpp"

namespace hflz {

struct ProgExpr;
using ProgExprPtr = std::shared_ptr<const ProgExpr>;
using ProgArg = std::variant<IntExprPtr, ProgExprPtr>;

struct ProgExpr {
  enum class Kind { Event, Call, If, Unit };
  Kind kind = Kind::Unit;
  /// Event label or called name (a definition or a continuation parameter).
  std::string name;
  /// Set (non-zero id) when a Call invokes a continuation parameter.
  Symbol parameter;
  ProgExprPtr continuation;
  std::vector<ProgArg> args;
  FormulaPtr condition;
  ProgExprPtr then_branch;
  ProgExprPtr else_branch;
};

struct ProgParam {
  enum class Kind { Int, Cont };
  Symbol symbol;
  Kind kind = Kind::Int;
};

struct Definition {
  std::string name;
  bool recursive = false;
  std::vector<ProgParam> params;
  ProgExprPtr body;
};

struct Program {
  std::vector<std::string> events;
  std::vector<Definition> definitions;
  ProgExprPtr main;
};

/// Accepts the let/in style
///   let x = open "foo" in
///   let rec f n k = if n <= 0 then close x k else read x (f (n - 1) x k) in
///   f 10 ()
/// as well as top-level definitions followed by `main = expr`. An optional
/// first line "events: read close end" fixes the alphabet (default: read,
/// write, close). Handles bound by `open` are dropped from argument lists; an
/// event without a continuation continues with the rest of a `;` sequence, or
/// terminates.
Program parse_program(std::string_view text);

enum class Polarity { Mu, Nu };

/// Events become diamonds, termination <end> true, conditionals
/// (dual(c) \/ then) /\ (c \/ else), recursive definitions fixpoints.
FormulaPtr translate_program(const Program& program, Polarity polarity = Polarity::Mu);

}  // namespace hflz
