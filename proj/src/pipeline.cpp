#include "hflz/pipeline.hpp"

#include <condition_variable>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <mutex>
#include <thread>

#include "hflz/entailment.hpp"
#include "hflz/error.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/typecheck.hpp"

namespace hflz {

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct SideResult {
  Verdict::Kind kind = Verdict::Kind::Unknown;
  std::string stage;
  std::optional<std::string> bound;
  std::optional<SolverVerdict::Kind> solver;
  bool heuristic = false;
  std::vector<StageRecord> stages;
  std::vector<std::string> warnings;
};

class Side {
 public:
  Side(std::string name, FormulaPtr formula, const PipelineOptions& options, Clock::time_point deadline,
       std::stop_token stop)
      : name_(std::move(name)), formula_(std::move(formula)), options_(options), deadline_(deadline), stop_(stop) {}

  SideResult run() {
    const Lts& model = options_.model ? *options_.model : trivial_;
    if (is_pure(formula_)) {
      auto t = Clock::now();
      bool holds = check_pure(model, formula_, nullptr, options_.eval.table_cap);
      record("pure-check", "", holds ? "valid" : "invalid", "", t);
      return decide(holds ? Verdict::Kind::Valid : Verdict::Kind::Invalid, "pure-check");
    }

    if (!out_of_time()) {
      auto t = Clock::now();
      EvalOptions strict = options_.eval;
      strict.policy = WindowPolicy::Strict;
      strict.stop = stop_;
      strict.deadline = deadline_;
      try {
        bool holds = eval_bounded(formula_, strict, &model);
        record("strict-eval", "", holds ? "valid" : "inconclusive", "", t);
        if (holds) return decide(Verdict::Kind::Valid, "strict-eval");
      } catch (const Error& e) {
        record("strict-eval", "", "error", e.what(), t);
      }
    }

    bool exact = !has_kind(formula_, Formula::Kind::Mu);
    std::vector<BoundExpr> bounds = options_.bounds.empty() ? bound_schedule(options_.bound_cap) : options_.bounds;
    if (exact) bounds.assign(1, BoundExpr::constant(0));

    for (const auto& bound : bounds) {
      if (out_of_time()) break;
      std::string label = exact ? "" : bound.str();
      FormulaPtr g = formula_;
      if (!exact) {
        auto t = Clock::now();
        try {
          g = eliminate_mu(formula_, bound);
          record("eliminate-mu", label, "done", "", t);
        } catch (const Error& e) {
          record("eliminate-mu", label, "error", e.what(), t);
          // The fragment does not depend on the bound.
          if (dynamic_cast<const UnsupportedError*>(&e)) break;
          continue;
        }
      }
      if (auto r = chc_path(g, label, exact)) return *r;
      if (auto r = abstraction_path(g, label, model)) return *r;
    }
    if (stop_.stop_requested()) return result_;
    if (Clock::now() >= deadline_) record("budget", "", "inconclusive", "time budget exhausted", Clock::now());
    return result_;
  }

 private:
  std::optional<SideResult> chc_path(const FormulaPtr& g, const std::string& label, bool exact) {
    if (!options_.solver || has_modalities(g) || out_of_time()) return std::nullopt;
    auto t = Clock::now();
    ChcSystem system;
    try {
      system = hfl_to_chc(g);
    } catch (const Error& e) {
      record("to-chc", label, "error", e.what(), t);
      return std::nullopt;
    }
    SolverConfig cfg = *options_.solver;
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline_ - Clock::now());
    cfg.timeout = std::min(cfg.timeout, std::max(remaining, std::chrono::milliseconds(1)));
    SolverVerdict v;
    try {
      v = solve_external(system, cfg, stop_);
    } catch (const Error& e) {
      record("chc-solve", label, "error", e.what(), t);
      return std::nullopt;
    }
    result_.solver = v.kind;
    if (v.kind == SolverVerdict::Kind::Sat) {
      record("chc-solve", label, "valid", "sat", t);
      return decide(Verdict::Kind::Valid, "chc", label);
    }
    if (v.kind == SolverVerdict::Kind::Unsat && exact) {
      record("chc-solve", label, "invalid", "unsat", t);
      return decide(Verdict::Kind::Invalid, "chc", label);
    }
    std::string detail = to_string(v.kind);
    if (v.kind == SolverVerdict::Kind::Unknown && !v.detail.empty() && v.detail.size() < 80) detail += ": " + v.detail;
    record("chc-solve", label, stop_.stop_requested() ? "cancelled" : "inconclusive", detail, t);
    return std::nullopt;
  }

  std::optional<SideResult> abstraction_path(const FormulaPtr& g, const std::string& label, const Lts& model) {
    if (!options_.predicates || out_of_time()) return std::nullopt;
    auto t = Clock::now();
    std::unique_ptr<EntailmentOracle> oracle;
    if (options_.smt_command) {
      auto per_query = std::chrono::milliseconds(5000);
      oracle = std::make_unique<SmtOracle>(*options_.smt_command, per_query);
    } else {
      oracle = std::make_unique<WindowOracle>(options_.eval.window);
    }
    try {
      std::vector<std::string> warnings;
      FormulaPtr h = abstract_predicates(g, *options_.predicates, *oracle, &warnings);
      for (auto& w : warnings) result_.warnings.push_back(w);
      bool holds = check_pure(model, h, nullptr, options_.eval.table_cap);
      record("abstraction", label, holds ? "valid" : "inconclusive", oracle->heuristic() ? "window oracle" : "", t);
      if (holds) {
        result_.heuristic = oracle->heuristic();
        return decide(Verdict::Kind::Valid, "abstraction", label);
      }
    } catch (const Error& e) {
      record("abstraction", label, "error", e.what(), t);
    }
    return std::nullopt;
  }

  bool out_of_time() const { return stop_.stop_requested() || Clock::now() >= deadline_; }

  void record(std::string stage, std::string bound, std::string outcome, std::string detail, Clock::time_point start) {
    result_.stages.push_back(
        {name_, std::move(stage), std::move(bound), std::move(outcome), std::move(detail), millis_since(start)});
  }

  SideResult decide(Verdict::Kind kind, std::string stage, std::string bound = "") {
    result_.kind = kind;
    result_.stage = std::move(stage);
    if (!bound.empty()) result_.bound = std::move(bound);
    return result_;
  }

  std::string name_;
  FormulaPtr formula_;
  const PipelineOptions& options_;
  Clock::time_point deadline_;
  std::stop_token stop_;
  Lts trivial_ = trivial_model();
  SideResult result_;
};

// Verdict for phi implied by a side's verdict on its own formula.
Verdict::Kind for_phi(int side, Verdict::Kind k) {
  if (side == 0 || k == Verdict::Kind::Unknown) return k;
  return k == Verdict::Kind::Valid ? Verdict::Kind::Invalid : Verdict::Kind::Valid;
}

}  // namespace

Report run_validity(const FormulaPtr& formula, const PipelineOptions& options) {
  require_prop(formula);
  auto start = Clock::now();
  auto deadline = start + options.budget;
  FormulaPtr formulas[2] = {formula, dualize(formula)};
  const char* names[2] = {"formula", "dual"};
  std::optional<SideResult> results[2];

  if (!options.race) {
    for (int i = 0; i < 2; ++i) {
      results[i] = Side(names[i], formulas[i], options, deadline, {}).run();
      if (results[i]->kind != Verdict::Kind::Unknown) break;
    }
  } else {
    std::mutex mutex;
    std::condition_variable done;
    std::stop_source stop;
    std::exception_ptr failure;
    {
      std::jthread workers[2];
      for (int i = 0; i < 2; ++i) {
        workers[i] = std::jthread([&, i] {
          SideResult r;
          try {
            r = Side(names[i], formulas[i], options, deadline, stop.get_token()).run();
          } catch (...) {
            std::lock_guard lock(mutex);
            if (!failure) failure = std::current_exception();
          }
          std::lock_guard lock(mutex);
          results[i] = std::move(r);
          done.notify_all();
        });
      }
      std::unique_lock lock(mutex);
      auto settled = [&] {
        bool both = results[0] && results[1];
        bool definite = (results[0] && results[0]->kind != Verdict::Kind::Unknown) ||
                        (results[1] && results[1]->kind != Verdict::Kind::Unknown);
        return both || definite || failure;
      };
      // Stages poll the stop token; the small grace covers a stage that was
      // running when the budget ran out.
      if (!done.wait_until(lock, deadline, settled)) done.wait_for(lock, std::chrono::milliseconds(200), settled);
      stop.request_stop();
    }
    if (failure) std::rethrow_exception(failure);
  }

  Report report;
  for (int i = 0; i < 2; ++i) {
    if (!results[i]) continue;
    const SideResult& r = *results[i];
    report.stages.insert(report.stages.end(), r.stages.begin(), r.stages.end());
    report.warnings.insert(report.warnings.end(), r.warnings.begin(), r.warnings.end());
  }
  Verdict::Kind claims[2] = {Verdict::Kind::Unknown, Verdict::Kind::Unknown};
  for (int i = 0; i < 2; ++i)
    if (results[i]) claims[i] = for_phi(i, results[i]->kind);
  if (claims[0] != Verdict::Kind::Unknown && claims[1] != Verdict::Kind::Unknown && claims[0] != claims[1]) {
    std::cerr << "hflz: internal soundness violation: the formula and its dual were both found valid ("
              << results[0]->stage << " / " << results[1]->stage << ")\n";
    std::abort();
  }
  for (int i = 0; i < 2; ++i) {
    if (claims[i] == Verdict::Kind::Unknown) continue;
    const SideResult& r = *results[i];
    report.verdict = claims[i];
    report.deciding_side = names[i];
    report.deciding_stage = r.stage;
    report.bound = r.bound;
    report.solver = r.solver;
    report.heuristic = r.heuristic;
    break;
  }
  if (report.verdict == Verdict::Kind::Unknown) {
    for (int i = 0; i < 2; ++i)
      if (results[i] && results[i]->solver && !report.solver) report.solver = results[i]->solver;
  }
  report.millis = millis_since(start);
  return report;
}

}  // namespace hflz
