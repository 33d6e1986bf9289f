#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hflz/formula.hpp"

namespace hflz {

struct PredApp {
  std::string predicate;
  std::vector<IntExprPtr> args;
};

/// A body literal is a linear atom (a Formula of kind Atom) or a predicate
/// application.
using Literal = std::variant<FormulaPtr, PredApp>;

/// forall vars. body => head, where a missing head means false.
struct Clause {
  std::vector<Symbol> vars;
  std::vector<Literal> body;
  std::optional<PredApp> head;

  bool is_goal() const { return !head.has_value(); }
};

struct ChcSystem {
  std::map<std::string, std::size_t> predicates;
  std::vector<Clause> clauses;

  /// Checks declarations, arities and that every variable is bound by its
  /// clause. Throws Error.
  void validate() const;
  std::size_t goal_count() const;
};

/// Structural equality up to renaming of clause variables.
bool same_system(const ChcSystem& a, const ChcSystem& b);

/// Least solutions as mu-formulas (mutual recursion nested per Bekic), goals
/// as forall vars. dual(l1) \/ ... \/ dual(ln). Valid iff the system is
/// satisfiable; True when there are no goals.
FormulaPtr chc_to_hfl(const ChcSystem& system);

/// The reverse direction for closed, first-order, nu-only formulas whose
/// fixpoints have types int -> ... -> int -> prop. The formula is dualized and
/// each mu becomes a predicate. Throws UnsupportedError outside that fragment.
ChcSystem hfl_to_chc(const FormulaPtr& formula);

/// Deterministic SMT-LIB script in the HORN logic.
std::string emit_smtlib_horn(const ChcSystem& system);

/// Reads scripts in the shape emit_smtlib_horn produces (plus constraint
/// heads, which become negated body literals). Throws ParseError.
ChcSystem parse_smtlib_horn(std::string_view text);

struct SolverConfig {
  std::string command;
  std::chrono::milliseconds timeout{std::chrono::seconds(10)};
};

struct SolverVerdict {
  enum class Kind { Sat, Unsat, Unknown };
  Kind kind = Kind::Unknown;
  /// Model text for Sat, raw output or "timeout" for Unknown.
  std::string detail;
};

std::string to_string(SolverVerdict::Kind kind);

/// Interprets a solver's output: the first line that is exactly sat, unsat or
/// unknown decides.
SolverVerdict parse_solver_output(const std::string& output);

SolverVerdict solve_external(const ChcSystem& system, const SolverConfig& config, std::stop_token stop = {});

/// The solver command from HFLMC_SOLVER, if set and non-empty.
std::optional<std::string> solver_from_environment();

}  // namespace hflz
