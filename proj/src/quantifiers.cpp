#include "formula_util.hpp"
#include "hflz/transforms.hpp"

namespace hflz {

namespace {

IntExprPtr same(const IntExprPtr& e) { return e; }

FormulaPtr desugar(const FormulaPtr& f) {
  FormulaPtr g = detail::map_children(f, desugar, same);
  if (!g->is_quantifier()) return g;

  bool forall = g->is(Formula::Kind::Forall);
  const Symbol& x = g->symbol();
  IntExprPtr xv = IntExpr::var(x);
  FormulaPtr body = g->body();
  const auto& bounds = g->bounds();
  // forall x >= max(e1, e2). phi  ==  forall x >= e1. (x < e2 \/ phi)
  for (std::size_t i = bounds.size(); i-- > 1;) {
    body = forall ? Formula::disj(Formula::atom(CmpOp::Lt, xv, bounds[i]), body)
                  : Formula::conj(Formula::atom(CmpOp::Ge, xv, bounds[i]), body);
  }

  Symbol q = fresh_symbol("q");
  TypePtr qt = Type::arrow(Type::integer(), Type::prop());
  FormulaPtr qv = Formula::var(q, qt);
  IntExprPtr one = IntExpr::constant(1);
  std::vector<FormulaPtr> parts{body};
  IntExprPtr start;
  if (bounds.empty()) {
    parts.push_back(Formula::app(qv, IntExpr::sub(xv, one)));
    start = IntExpr::constant(0);
  } else {
    start = bounds[0];
  }
  parts.push_back(Formula::app(qv, IntExpr::add(xv, one)));
  FormulaPtr step = forall ? conj_all(parts) : disj_all(parts);
  FormulaPtr fix = Formula::fixpoint(forall ? Formula::Kind::Nu : Formula::Kind::Mu, q, qt,
                                     Formula::lambda(x, Type::integer(), step));
  return Formula::app(fix, start);
}

}  // namespace

FormulaPtr desugar_quantifiers(const FormulaPtr& formula) { return desugar(formula); }

}  // namespace hflz
