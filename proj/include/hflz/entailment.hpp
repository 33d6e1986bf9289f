#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hflz/formula.hpp"

namespace hflz {

enum class Tri { Yes, No, Unknown };

/// Decides satisfiability of conjunctions of linear atoms.
class EntailmentOracle {
 public:
  virtual ~EntailmentOracle() = default;

  /// Every formula must be an Atom.
  virtual Tri satisfiable(const std::vector<FormulaPtr>& atoms) = 0;

  /// hypotheses |= goal
  Tri entails(const std::vector<FormulaPtr>& hypotheses, const FormulaPtr& goal);
  Tri valid(const FormulaPtr& atom) { return entails({}, atom); }

  /// True if answers may be wrong (the window oracle).
  virtual bool heuristic() const { return false; }
};

/// Searches assignments in [-window, window]. "Unsatisfiable" only means no
/// model was found in the window, so entailments it reports are heuristic.
class WindowOracle : public EntailmentOracle {
 public:
  explicit WindowOracle(std::int64_t window = 16, std::uint64_t budget = 2'000'000)
      : window_(window), budget_(budget) {}
  Tri satisfiable(const std::vector<FormulaPtr>& atoms) override;
  bool heuristic() const override { return true; }

 private:
  std::int64_t window_;
  std::uint64_t budget_;
};

/// Sends QF_LIA queries to an external SMT solver ("z3 {file}" style command).
class SmtOracle : public EntailmentOracle {
 public:
  SmtOracle(std::string command, std::chrono::milliseconds timeout) : command_(std::move(command)), timeout_(timeout) {}
  Tri satisfiable(const std::vector<FormulaPtr>& atoms) override;

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
  std::map<std::string, Tri> memo_;
};

/// QF_LIA script for the conjunction of `atoms`.
std::string smtlib_query(const std::vector<FormulaPtr>& atoms);

/// SMT-LIB rendering of a linear expression / atom; variables are printed
/// with `names` (quoted when not simple symbols).
std::string smtlib_term(const IntExprPtr& expr, const std::map<std::uint64_t, std::string>& names);
std::string smtlib_atom(const FormulaPtr& atom, const std::map<std::uint64_t, std::string>& names);
std::string smtlib_symbol(const std::string& name);

}  // namespace hflz
