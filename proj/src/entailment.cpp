#include "hflz/entailment.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "hflz/error.hpp"
#include "hflz/subprocess.hpp"

namespace hflz {

namespace {

std::int64_t eval_with(const IntExprPtr& e, const std::map<std::uint64_t, std::int64_t>& env) {
  switch (e->kind()) {
    case IntExpr::Kind::Const: return e->value();
    case IntExpr::Kind::Var: return env.at(e->symbol().id);
    case IntExpr::Kind::Add: return eval_with(e->lhs(), env) + eval_with(e->rhs(), env);
    case IntExpr::Kind::Sub: return eval_with(e->lhs(), env) - eval_with(e->rhs(), env);
    case IntExpr::Kind::Neg: return -eval_with(e->lhs(), env);
  }
  return 0;
}

void collect_vars(const IntExprPtr& e, std::vector<Symbol>& out) {
  switch (e->kind()) {
    case IntExpr::Kind::Var:
      if (std::none_of(out.begin(), out.end(), [&](const Symbol& s) { return s.id == e->symbol().id; }))
        out.push_back(e->symbol());
      break;
    case IntExpr::Kind::Add:
    case IntExpr::Kind::Sub:
      collect_vars(e->lhs(), out);
      collect_vars(e->rhs(), out);
      break;
    case IntExpr::Kind::Neg: collect_vars(e->lhs(), out); break;
    default: break;
  }
}

std::vector<Symbol> atom_vars(const std::vector<FormulaPtr>& atoms) {
  std::vector<Symbol> vars;
  for (const auto& a : atoms) {
    if (!a->is(Formula::Kind::Atom)) throw Error("entailment oracle expects atoms");
    collect_vars(a->int_lhs(), vars);
    collect_vars(a->int_rhs(), vars);
  }
  return vars;
}

bool simple_symbol(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  static const std::set<std::string> reserved = {"true", "false", "and", "or", "not", "let", "forall",
                                                 "exists", "assert", "distinct", "ite"};
  if (reserved.count(s)) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string cmp_smt(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "distinct";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

}  // namespace

Tri EntailmentOracle::entails(const std::vector<FormulaPtr>& hypotheses, const FormulaPtr& goal) {
  std::vector<FormulaPtr> query = hypotheses;
  query.push_back(Formula::atom(complement(goal->op()), goal->int_lhs(), goal->int_rhs()));
  switch (satisfiable(query)) {
    case Tri::Yes: return Tri::No;
    case Tri::No: return Tri::Yes;
    case Tri::Unknown: return Tri::Unknown;
  }
  return Tri::Unknown;
}

Tri WindowOracle::satisfiable(const std::vector<FormulaPtr>& atoms) {
  auto vars = atom_vars(atoms);
  std::map<std::uint64_t, std::int64_t> env;
  std::uint64_t steps = 0;
  bool exhausted = false;
  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == vars.size()) {
      if (++steps > budget_) {
        exhausted = true;
        return false;
      }
      return std::all_of(atoms.begin(), atoms.end(), [&](const FormulaPtr& a) {
        return holds(a->op(), eval_with(a->int_lhs(), env), eval_with(a->int_rhs(), env));
      });
    }
    for (std::int64_t v = -window_; v <= window_ && !exhausted; ++v) {
      env[vars[i].id] = v;
      if (search(i + 1)) return true;
    }
    return false;
  };
  if (search(0)) return Tri::Yes;
  if (exhausted) return Tri::Unknown;
  return Tri::No;
}

std::string smtlib_symbol(const std::string& name) { return simple_symbol(name) ? name : "|" + name + "|"; }

std::string smtlib_term(const IntExprPtr& e, const std::map<std::uint64_t, std::string>& names) {
  switch (e->kind()) {
    case IntExpr::Kind::Const:
      return e->value() < 0 ? "(- " + std::to_string(-e->value()) + ")" : std::to_string(e->value());
    case IntExpr::Kind::Var: {
      auto it = names.find(e->symbol().id);
      return smtlib_symbol(it == names.end() ? e->symbol().name : it->second);
    }
    case IntExpr::Kind::Add: return "(+ " + smtlib_term(e->lhs(), names) + " " + smtlib_term(e->rhs(), names) + ")";
    case IntExpr::Kind::Sub: return "(- " + smtlib_term(e->lhs(), names) + " " + smtlib_term(e->rhs(), names) + ")";
    case IntExpr::Kind::Neg: return "(- " + smtlib_term(e->lhs(), names) + ")";
  }
  return "?";
}

std::string smtlib_atom(const FormulaPtr& a, const std::map<std::uint64_t, std::string>& names) {
  return "(" + cmp_smt(a->op()) + " " + smtlib_term(a->int_lhs(), names) + " " + smtlib_term(a->int_rhs(), names) + ")";
}

std::string smtlib_query(const std::vector<FormulaPtr>& atoms) {
  auto vars = atom_vars(atoms);
  std::map<std::uint64_t, std::string> names;
  std::set<std::string> used;
  std::string out = "(set-logic QF_LIA)\n";
  for (const auto& v : vars) {
    std::string n = v.name;
    for (int k = 1; used.count(n); ++k) n = v.name + "_" + std::to_string(k);
    used.insert(n);
    names[v.id] = n;
    out += "(declare-const " + smtlib_symbol(n) + " Int)\n";
  }
  for (const auto& a : atoms) out += "(assert " + smtlib_atom(a, names) + ")\n";
  return out + "(check-sat)\n";
}

Tri SmtOracle::satisfiable(const std::vector<FormulaPtr>& atoms) {
  std::string script = smtlib_query(atoms);
  if (auto it = memo_.find(script); it != memo_.end()) return it->second;
  TempFile file(script, ".smt2");
  ProcessResult r = run_shell(instantiate_command(command_, file.path()), timeout_);
  Tri answer = Tri::Unknown;
  if (!r.timed_out) {
    // The first line that is exactly a verdict wins.
    std::size_t pos = 0;
    while (pos < r.output.size()) {
      std::size_t nl = r.output.find('\n', pos);
      if (nl == std::string::npos) nl = r.output.size();
      std::string line = r.output.substr(pos, nl - pos);
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
      pos = nl + 1;
      if (line == "sat") answer = Tri::Yes;
      else if (line == "unsat") answer = Tri::No;
      else continue;
      break;
    }
  }
  memo_.emplace(std::move(script), answer);
  return answer;
}

}  // namespace hflz
