#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "hflz/chc.hpp"
#include "hflz/formula.hpp"
#include "hflz/lts.hpp"
#include "hflz/semantics.hpp"
#include "hflz/transforms.hpp"

namespace hflz {

struct PipelineOptions {
  /// Window for the strict evaluation stage.
  EvalOptions eval;
  /// Tried in order; an empty list means bound_schedule(bound_cap).
  std::vector<BoundExpr> bounds;
  std::int64_t bound_cap = 8;
  /// CHC solver; the CHC path is skipped without one.
  std::optional<SolverConfig> solver;
  /// Enables the abstraction path.
  std::optional<PredicateSet> predicates;
  /// QF_LIA solver for the abstraction's entailment queries. Without one the
  /// window oracle is used and any verdict it produces is marked heuristic.
  std::optional<std::string> smt_command;
  /// Model for the pure and evaluation stages; the trivial model if null.
  const Lts* model = nullptr;
  bool race = true;
  std::chrono::milliseconds budget{std::chrono::seconds(60)};
};

struct StageRecord {
  /// "formula" or "dual".
  std::string side;
  std::string stage;
  std::string bound;
  /// valid, invalid, inconclusive, skipped, error or cancelled.
  std::string outcome;
  std::string detail;
  double millis = 0;
};

struct Report {
  Verdict::Kind verdict = Verdict::Kind::Unknown;
  std::string deciding_side;
  std::string deciding_stage;
  std::optional<std::string> bound;
  std::optional<SolverVerdict::Kind> solver;
  bool heuristic = false;
  std::vector<StageRecord> stages;
  std::vector<std::string> warnings;
  double millis = 0;
};

/// Runs the validity pipeline on phi and dual(phi); a Valid from the dual
/// side makes phi Invalid. Stages per side: exact check for pure formulas,
/// strict bounded evaluation, then for each bound mu-elimination followed by
/// the CHC path and the abstraction path. Aborts if both sides claim validity.
Report run_validity(const FormulaPtr& formula, const PipelineOptions& options);

}  // namespace hflz
