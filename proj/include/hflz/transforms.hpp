#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hflz/entailment.hpp"
#include "hflz/formula.hpp"

namespace hflz {

/// Replaces exists/forall sugar by fixpoints over a counter:
///   forall x. phi        ->  (nu q. \x. phi /\ q(x - 1) /\ q(x + 1))(0)
///   forall x >= e. phi   ->  (nu q. \x. phi /\ q(x + 1))(e)
/// and dually for exists. Several lower bounds are reduced to one by guarding
/// the body.
FormulaPtr desugar_quantifiers(const FormulaPtr& formula);

/// n = max_i (sum_j c_ij * x_j + d_i). Variables are referred to by name and
/// resolved against the integer binders in scope where a mu is eliminated.
struct BoundExpr {
  struct Piece {
    std::vector<std::pair<std::string, std::int64_t>> coefficients;
    std::int64_t constant = 0;
  };
  std::vector<Piece> pieces;

  static BoundExpr constant(std::int64_t n);
  std::string str() const;
  bool is_constant() const;
};

/// Accepts "4", "i + 1" or "max(i + 1, 1)".
BoundExpr parse_bound_expr(std::string_view text);

/// Constant bounds 1, 2, 4, ... up to and including `cap` (cap itself is
/// appended when it is not a power of two).
std::vector<BoundExpr> bound_schedule(std::int64_t cap);

/// Underapproximates every mu (innermost first) by a nu with an explicit
/// unfolding counter:
///   mu x. \y. psi  ~>  \y. forall u >= n. (nu x'. \(z, y). z > 0 /\ psi[x := x'(z - 1)])(u, y)
/// Argument types of eliminated binders must be int or prop.
FormulaPtr eliminate_mu(const FormulaPtr& formula, const BoundExpr& bound);

/// Predicates are linear atoms over the binder they belong to (and possibly
/// integer variables in scope). In text form `_` stands for the binder.
class PredicateSet {
 public:
  void add(const std::string& binder, const std::string& predicate);
  void add_default(const std::string& predicate);

  /// Predicate texts for a binder name, with `_` replaced by the name.
  std::vector<std::string> for_binder(const std::string& name) const;
  bool empty() const { return by_name_.empty() && defaults_.empty(); }

 private:
  std::map<std::string, std::vector<std::string>> by_name_;
  std::vector<std::string> defaults_;
};

/// One line per binder, "y: y > 0, y >= 10"; "*: _ > 0" applies to binders
/// without an entry of their own. `#` starts a comment.
PredicateSet parse_predicate_set(std::string_view text);

struct AbstractionOptions {
  /// Largest conjunction of in-scope predicates tried when entailing an atom.
  std::size_t max_conjunction = 3;
};

/// Boolean abstraction of integer data. Every integer binder with m predicates
/// becomes m prop binders b_i standing for "p_i holds"; atoms and integer
/// arguments become the weakest positive combinations of in-scope b_i that
/// entail them. Valid output implies valid input. Oracle failures make the
/// affected atom false and are reported in `warnings`.
FormulaPtr abstract_predicates(const FormulaPtr& formula, const PredicateSet& predicates,
                               EntailmentOracle& oracle, std::vector<std::string>* warnings = nullptr,
                               const AbstractionOptions& options = {});

}  // namespace hflz
