#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hflz/chc.hpp"
#include "hflz/entailment.hpp"
#include "hflz/error.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/subprocess.hpp"

namespace hflz::test {

inline std::string data_path(const std::string& name) { return std::string(HFLZ_TEST_DATA) + "/" + name; }

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name));
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// HFLMC_SOLVER, else z3 from PATH, else nothing.
inline std::optional<std::string> external_solver() {
  if (auto s = solver_from_environment()) return s;
  static const bool have_z3 = run_shell("command -v z3", std::chrono::seconds(5)).exit_status == 0;
  if (have_z3) return std::string("z3 {file}");
  return std::nullopt;
}

/// An interpretation of a predicate: formal parameters and a quantifier-free
/// body over them.
using Interpretation = std::pair<std::vector<Symbol>, FormulaPtr>;

/// Disjunctive normal form of a formula built from atoms, constants, /\ and \/.
inline std::vector<std::vector<FormulaPtr>> dnf(const FormulaPtr& f) {
  switch (f->kind()) {
    case Formula::Kind::True: return {{}};
    case Formula::Kind::False: return {};
    case Formula::Kind::Atom: return {{f}};
    case Formula::Kind::Or: {
      auto a = dnf(f->lhs());
      auto b = dnf(f->rhs());
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case Formula::Kind::And: {
      std::vector<std::vector<FormulaPtr>> out;
      for (const auto& x : dnf(f->lhs()))
        for (const auto& y : dnf(f->rhs())) {
          auto c = x;
          c.insert(c.end(), y.begin(), y.end());
          out.push_back(c);
        }
      return out;
    }
    default: throw Error("dnf: unexpected formula");
  }
}

inline FormulaPtr instantiate(const Interpretation& interp, const PredApp& app) {
  std::vector<std::pair<Symbol, Arg>> bindings;
  for (std::size_t i = 0; i < interp.first.size(); ++i) bindings.emplace_back(interp.first[i], app.args[i]);
  return substitute_many(interp.second, bindings);
}

/// Whether the clause is a valid implication once every predicate is replaced
/// by its interpretation.
inline Tri clause_holds(const Clause& clause, const std::map<std::string, Interpretation>& model,
                        EntailmentOracle& oracle) {
  FormulaPtr body = Formula::tt();
  for (const auto& lit : clause.body) {
    if (const auto* atom = std::get_if<FormulaPtr>(&lit)) body = Formula::conj(body, *atom);
    else body = Formula::conj(body, instantiate(model.at(std::get<PredApp>(lit).predicate), std::get<PredApp>(lit)));
  }
  FormulaPtr head = clause.head ? instantiate(model.at(clause.head->predicate), *clause.head) : Formula::ff();
  // Valid iff body /\ not head is unsatisfiable.
  Tri result = Tri::Yes;
  for (const auto& cube : dnf(Formula::conj(body, dualize(head)))) {
    Tri sat = oracle.satisfiable(cube);
    if (sat == Tri::Yes) return Tri::No;
    if (sat == Tri::Unknown) result = Tri::Unknown;
  }
  return result;
}

}  // namespace hflz::test
