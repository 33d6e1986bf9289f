// hflmc: command-line driver for the HFL(Z) toolkit.
//
// Exit codes: 0 valid, 1 invalid, 2 unknown, 3 error. Commands that only
// transform or print exit 0 on success.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hflz/chc.hpp"
#include "hflz/entailment.hpp"
#include "hflz/error.hpp"
#include "hflz/lts.hpp"
#include "hflz/parser.hpp"
#include "hflz/pipeline.hpp"
#include "hflz/printer.hpp"
#include "hflz/program.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/semantics.hpp"
#include "hflz/transforms.hpp"
#include "hflz/typecheck.hpp"

namespace {

using json = nlohmann::json;
using namespace hflz;

constexpr int kExitError = 3;

struct Config {
  std::string input;
  std::string lts;
  std::int64_t window = 16;
  std::string window_policy = "strict";
  std::string bounds;
  std::string bound_expr;
  std::string solver;
  std::string smt;
  double timeout = 10;
  double budget = 60;
  std::size_t table_cap = EvalOptions{}.table_cap;
  std::string polarity = "mu";
  std::string format = "text";
  std::string preds;
  bool no_race = false;
};

std::string read_input(const std::string& path) {
  std::ostringstream out;
  if (path == "-") {
    out << std::cin.rdbuf();
    return out.str();
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  out << in.rdbuf();
  return out.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Polarity polarity_of(const Config& cfg) { return cfg.polarity == "nu" ? Polarity::Nu : Polarity::Mu; }

// .prog inputs are translated first; everything else is formula syntax.
FormulaPtr load_formula(const Config& cfg) {
  std::string text = read_input(cfg.input);
  if (ends_with(cfg.input, ".prog")) return translate_program(parse_program(text), polarity_of(cfg));
  return parse_formula(text);
}

EvalOptions eval_options(const Config& cfg) {
  EvalOptions o;
  o.window = cfg.window;
  o.policy = cfg.window_policy == "window" ? WindowPolicy::Window : WindowPolicy::Strict;
  o.table_cap = cfg.table_cap;
  return o;
}

std::chrono::milliseconds seconds(double s) {
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(s * 1000)));
}

std::optional<std::string> solver_command(const Config& cfg) {
  if (!cfg.solver.empty()) return cfg.solver;
  return solver_from_environment();
}

// Splits on commas outside parentheses, so "max(i + 1, 1), 4" is two items.
std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

PredicateSet load_predicates(const std::string& spec) {
  // Either a file or the inline text itself.
  std::ifstream in(spec);
  if (in) {
    std::ostringstream text;
    text << in.rdbuf();
    return parse_predicate_set(text.str());
  }
  return parse_predicate_set(spec);
}

std::unique_ptr<EntailmentOracle> make_oracle(const Config& cfg) {
  std::string smt = cfg.smt;
  if (smt.empty())
    if (auto s = solver_command(cfg)) smt = *s;
  if (!smt.empty()) return std::make_unique<SmtOracle>(smt, seconds(cfg.timeout));
  return std::make_unique<WindowOracle>(cfg.window);
}

int exit_code(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Valid: return 0;
    case Verdict::Kind::Invalid: return 1;
    case Verdict::Kind::Unknown: return 2;
  }
  return 2;
}

void emit(const Config& cfg, const json& j, const std::string& text) {
  if (cfg.format == "json") std::cout << j.dump(2) << "\n";
  else std::cout << text << "\n";
}

int emit_verdict(const Config& cfg, Verdict::Kind k, const std::string& method, json extra = json::object()) {
  json j = extra;
  j["verdict"] = to_string(k);
  j["method"] = method;
  emit(cfg, j, to_string(k) + " (" + method + ")");
  return exit_code(k);
}

int cmd_typecheck(const Config& cfg) {
  FormulaPtr f = load_formula(cfg);
  TypePtr t = typecheck(f);
  emit(cfg, {{"type", t->str()}, {"order", formula_order(f)}}, t->str());
  return 0;
}

int cmd_check(const Config& cfg) {
  Lts model = parse_lts(read_input(cfg.lts));
  FormulaPtr f = load_formula(cfg);
  require_prop(f);
  if (!is_pure(f)) throw UnsupportedError("check needs a pure formula; use 'eval --lts' for formulas with integers");
  EvalStats stats;
  bool holds = check_pure(model, f, &stats, cfg.table_cap);
  return emit_verdict(cfg, holds ? Verdict::Kind::Valid : Verdict::Kind::Invalid, "exact",
                      {{"fixpoint_solves", stats.fixpoint_solves}, {"iterations", stats.iterations}});
}

int cmd_eval(const Config& cfg) {
  FormulaPtr f = load_formula(cfg);
  require_prop(f);
  std::optional<Lts> model;
  if (!cfg.lts.empty()) model = parse_lts(read_input(cfg.lts));
  EvalOptions o = eval_options(cfg);
  bool holds = eval_bounded(f, o, model ? &*model : nullptr);
  // Only a strict true is a proof; everything else is the bounded answer.
  std::string method = o.policy == WindowPolicy::Strict ? "strict window " : "window ";
  method += std::to_string(o.window);
  Verdict::Kind k = holds ? Verdict::Kind::Valid : Verdict::Kind::Invalid;
  json extra = {{"bounded_value", holds}, {"window", o.window}, {"policy", cfg.window_policy}};
  return emit_verdict(cfg, k, method, extra);
}

int cmd_validity(const Config& cfg) {
  FormulaPtr f = load_formula(cfg);
  PipelineOptions o;
  o.eval = eval_options(cfg);
  o.eval.policy = WindowPolicy::Strict;
  std::optional<Lts> model;
  if (!cfg.lts.empty()) {
    model = parse_lts(read_input(cfg.lts));
    o.model = &*model;
  }
  if (!cfg.bound_expr.empty()) {
    for (const auto& item : split_top_level(cfg.bound_expr)) o.bounds.push_back(parse_bound_expr(item));
  }
  if (!cfg.bounds.empty()) {
    auto items = split_top_level(cfg.bounds);
    if (items.size() == 1 && o.bounds.empty()) {
      o.bound_cap = std::stoll(items[0]);
      if (o.bound_cap <= 0) throw Error("--bounds cap must be positive");
    } else {
      for (const auto& item : items) o.bounds.push_back(parse_bound_expr(item));
    }
  }
  if (auto s = solver_command(cfg)) o.solver = SolverConfig{*s, seconds(cfg.timeout)};
  if (!cfg.preds.empty()) o.predicates = load_predicates(cfg.preds);
  if (!cfg.smt.empty()) o.smt_command = cfg.smt;
  else if (o.solver) o.smt_command = o.solver->command;
  o.race = !cfg.no_race;
  o.budget = seconds(cfg.budget);

  Report r = run_validity(f, o);
  json j;
  j["verdict"] = to_string(r.verdict);
  j["deciding_side"] = r.deciding_side.empty() ? json(nullptr) : json(r.deciding_side);
  j["deciding_stage"] = r.deciding_stage.empty() ? json(nullptr) : json(r.deciding_stage);
  j["bound"] = r.bound ? json(*r.bound) : json(nullptr);
  j["solver"] = r.solver ? json(to_string(*r.solver)) : json(nullptr);
  j["heuristic"] = r.heuristic;
  j["millis"] = r.millis;
  j["warnings"] = r.warnings;
  j["stages"] = json::array();
  for (const auto& s : r.stages) {
    j["stages"].push_back({{"side", s.side},
                           {"stage", s.stage},
                           {"bound", s.bound},
                           {"outcome", s.outcome},
                           {"detail", s.detail},
                           {"millis", s.millis}});
  }
  if (cfg.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(r.verdict);
    if (!r.deciding_stage.empty()) {
      std::cout << " (" << r.deciding_stage;
      if (r.deciding_side == "dual") std::cout << " on the dual";
      if (r.bound) std::cout << ", bound " << *r.bound;
      if (r.heuristic) std::cout << ", heuristic entailment";
      std::cout << ")";
    }
    std::cout << "\n";
    for (const auto& s : r.stages) {
      std::cout << "  " << s.side << " " << s.stage;
      if (!s.bound.empty()) std::cout << " [" << s.bound << "]";
      std::cout << ": " << s.outcome;
      if (!s.detail.empty()) std::cout << " (" << s.detail << ")";
      std::printf(" %.1f ms\n", s.millis);
      std::cout.flush();
    }
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  }
  return exit_code(r.verdict);
}

int print_formula(const Config& cfg, const FormulaPtr& f) {
  emit(cfg, {{"formula", print(f)}}, print(f));
  return 0;
}

int cmd_dualize(const Config& cfg) { return print_formula(cfg, dualize(load_formula(cfg))); }

int cmd_elim_mu(const Config& cfg) {
  FormulaPtr f = load_formula(cfg);
  require_prop(f);
  BoundExpr b = parse_bound_expr(cfg.bound_expr.empty() ? "1" : cfg.bound_expr);
  return print_formula(cfg, eliminate_mu(f, b));
}

int cmd_abstract(const Config& cfg) {
  FormulaPtr f = load_formula(cfg);
  require_prop(f);
  PredicateSet preds = cfg.preds.empty() ? PredicateSet{} : load_predicates(cfg.preds);
  auto oracle = make_oracle(cfg);
  std::vector<std::string> warnings;
  FormulaPtr g = abstract_predicates(f, preds, *oracle, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return print_formula(cfg, g);
}

int cmd_to_chc(const Config& cfg) {
  ChcSystem sys = hfl_to_chc(load_formula(cfg));
  std::string text = emit_smtlib_horn(sys);
  if (cfg.format == "json") std::cout << json{{"smtlib", text}, {"clauses", sys.clauses.size()}}.dump(2) << "\n";
  else std::cout << text;
  return 0;
}

int cmd_from_chc(const Config& cfg) {
  ChcSystem sys = parse_smtlib_horn(read_input(cfg.input));
  return print_formula(cfg, chc_to_hfl(sys));
}

int cmd_translate(const Config& cfg) {
  Program p = parse_program(read_input(cfg.input));
  return print_formula(cfg, translate_program(p, polarity_of(cfg)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model checking and validity checking for HFL(Z)"};
  app.set_config("--config");
  app.require_subcommand(1);
  Config cfg;

  auto input = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("input", cfg.input, what + " ('-' for stdin)")->required();
  };
  auto formula_flags = [&](CLI::App* sub) {
    sub->add_option("--polarity", cfg.polarity, "fixpoint used for recursive .prog definitions")
        ->check(CLI::IsMember({"mu", "nu"}));
  };
  auto format_flag = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto window_flags = [&](CLI::App* sub) {
    sub->add_option("--window", cfg.window, "integers range over [-N, N]")->check(CLI::PositiveNumber);
    sub->add_option("--table-cap", cfg.table_cap, "largest enumerated domain or fixpoint table")
        ->check(CLI::PositiveNumber);
  };
  auto solver_flags = [&](CLI::App* sub) {
    sub->add_option("--solver", cfg.solver, "CHC solver command, e.g. \"z3 {file}\" (default: $HFLMC_SOLVER)");
    sub->add_option("--smt", cfg.smt, "QF_LIA solver command for entailment queries (default: the CHC solver)");
    sub->add_option("--timeout", cfg.timeout, "per solver call, seconds")->check(CLI::PositiveNumber);
  };

  std::map<CLI::App*, int (*)(const Config&)> handlers;
  auto add = [&](const std::string& name, const std::string& help, int (*fn)(const Config&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    handlers[sub] = fn;
    format_flag(sub);
    return sub;
  };

  auto* typecheck_cmd = add("typecheck", "print the type of a formula", cmd_typecheck);
  input(typecheck_cmd, "formula (.hfl) or program (.prog)");
  formula_flags(typecheck_cmd);

  auto* check_cmd = add("check", "exact model checking of a pure formula", cmd_check);
  check_cmd->add_option("lts", cfg.lts, "transition system (.lts)")->required();
  input(check_cmd, "formula (.hfl) or program (.prog)");
  formula_flags(check_cmd);
  check_cmd->add_option("--table-cap", cfg.table_cap, "largest fixpoint table")->check(CLI::PositiveNumber);

  auto* validity_cmd = add("validity", "validity by racing the formula against its dual", cmd_validity);
  input(validity_cmd, "formula (.hfl) or program (.prog)");
  formula_flags(validity_cmd);
  window_flags(validity_cmd);
  solver_flags(validity_cmd);
  validity_cmd->add_option("--lts", cfg.lts, "model instead of the trivial one");
  validity_cmd->add_option("--bounds", cfg.bounds, "bound list \"1,2,4,8\", or a single cap for 1,2,4,... up to it");
  validity_cmd->add_option("--bound-expr", cfg.bound_expr, "bounds tried first, e.g. \"max(i + 1, 1)\"");
  validity_cmd->add_option("--preds", cfg.preds, "predicate file or inline text (\"y: y > 0\")");
  validity_cmd->add_option("--budget", cfg.budget, "overall time budget, seconds")->check(CLI::PositiveNumber);
  validity_cmd->add_flag("--no-race", cfg.no_race, "run the formula, then the dual, sequentially");

  auto* dualize_cmd = add("dualize", "print the De Morgan dual", cmd_dualize);
  input(dualize_cmd, "formula (.hfl) or program (.prog)");
  formula_flags(dualize_cmd);

  auto* elim_cmd = add("elim-mu", "replace least fixpoints by bounded greatest fixpoints", cmd_elim_mu);
  input(elim_cmd, "formula (.hfl)");
  elim_cmd->add_option("--bound-expr", cfg.bound_expr, "bound, e.g. 4 or \"max(i + 1, 1)\" (default 1)");

  auto* abstract_cmd = add("abstract", "predicate abstraction to a pure formula", cmd_abstract);
  input(abstract_cmd, "formula (.hfl)");
  abstract_cmd->add_option("--preds", cfg.preds, "predicate file or inline text (\"y: y > 0\")");
  solver_flags(abstract_cmd);
  abstract_cmd->add_option("--window", cfg.window, "window of the fallback entailment oracle")
      ->check(CLI::PositiveNumber);

  auto* to_chc_cmd = add("to-chc", "emit the CHC system of a nu-only first-order formula", cmd_to_chc);
  input(to_chc_cmd, "formula (.hfl)");

  auto* from_chc_cmd = add("from-chc", "formula valid iff the CHC system is satisfiable", cmd_from_chc);
  input(from_chc_cmd, "CHC system (.smt2)");

  auto* translate_cmd = add("translate", "translate a program to a formula", cmd_translate);
  input(translate_cmd, "program (.prog)");
  formula_flags(translate_cmd);

  auto* eval_cmd = add("eval", "bounded evaluation", cmd_eval);
  input(eval_cmd, "formula (.hfl) or program (.prog)");
  formula_flags(eval_cmd);
  window_flags(eval_cmd);
  eval_cmd->add_option("--lts", cfg.lts, "model instead of the trivial one");
  eval_cmd->add_option("--window-policy", cfg.window_policy, "strict: out-of-window is false; window: exact atoms")
      ->check(CLI::IsMember({"strict", "window"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    for (auto& [sub, fn] : handlers)
      if (sub->parsed()) return fn(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
