#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <stop_token>
#include <string>

#include "hflz/formula.hpp"
#include "hflz/lts.hpp"

namespace hflz {

/// Bit i set means state i (in Lts declaration order).
using StateSet = std::uint64_t;

struct Verdict {
  enum class Kind { Valid, Invalid, Unknown };
  Kind kind = Kind::Unknown;
  std::string reason;

  static Verdict valid() { return {Kind::Valid, ""}; }
  static Verdict invalid() { return {Kind::Invalid, ""}; }
  static Verdict unknown(std::string why) { return {Kind::Unknown, std::move(why)}; }
};

std::string to_string(Verdict::Kind kind);

/// How integers outside [-window, window] are treated.
///  Strict: every atom or application with an out-of-window integer is false,
///          and unbounded universal quantifiers are false. A true result then
///          implies M |= phi.
///  Window: atoms are exact; a fixpoint applied outside the window is unfolded
///          `lookahead` more times before falling back to false (mu) or true
///          (nu); quantifiers range over the window. Not an underapproximation.
enum class WindowPolicy { Strict, Window };

struct EvalOptions {
  std::int64_t window = 16;
  WindowPolicy policy = WindowPolicy::Strict;
  int lookahead = 1;
  /// Upper bound on any enumerated domain or fixpoint table.
  std::size_t table_cap = std::size_t{1} << 20;
  /// Evaluation throws ResourceError once either of these fires.
  std::stop_token stop;
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
};

struct EvalStats {
  std::size_t fixpoint_solves = 0;
  std::size_t iterations = 0;
  /// Iterations in which some table entry changed value.
  std::size_t productive_iterations = 0;
  std::size_t largest_table = 0;
  /// False if some solve needed more productive iterations than the height of
  /// its table lattice (entries x states). Would indicate a non-monotone body.
  bool within_height = true;
};

bool is_pure(const FormulaPtr& formula);

/// Exact model checking of a closed, pure formula of type prop.
bool check_pure(const Lts& model, const FormulaPtr& formula, EvalStats* stats = nullptr,
                std::size_t table_cap = EvalOptions{}.table_cap);

/// Bounded evaluation of a closed HFL(Z) formula of type prop.
bool eval_bounded(const FormulaPtr& formula, const EvalOptions& options, const Lts* model = nullptr,
                  EvalStats* stats = nullptr);

/// The set of states satisfying a closed prop formula.
StateSet denotation(const Lts& model, const FormulaPtr& formula, const EvalOptions& options,
                    EvalStats* stats = nullptr);

}  // namespace hflz
