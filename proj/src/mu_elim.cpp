#include "formula_util.hpp"
#include "hflz/error.hpp"
#include "hflz/printer.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/transforms.hpp"

namespace hflz {

namespace {

IntExprPtr same(const IntExprPtr& e) { return e; }

class MuEliminator {
 public:
  explicit MuEliminator(const BoundExpr& bound) : bound_(bound) {}

  FormulaPtr go(const FormulaPtr& f) {
    switch (f->kind()) {
      case Formula::Kind::App: {
        Spine sp = spine_of(f);
        if (!sp.head->is(Formula::Kind::Mu))
          return detail::map_children(f, [this](const FormulaPtr& c) { return go(c); }, same);
        std::vector<Arg> args;
        for (const auto& a : sp.args) args.push_back(is_int_arg(a) ? a : Arg(go(std::get<FormulaPtr>(a))));
        return eliminate(sp.head, args);
      }
      case Formula::Kind::Mu: return eliminate(f, {});
      case Formula::Kind::Lambda:
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        bool int_binder = f->is_quantifier() || f->binder_type()->is_int();
        if (int_binder) scope_.push_back(f->symbol());
        FormulaPtr out = detail::map_children(f, [this](const FormulaPtr& c) { return go(c); }, same);
        if (int_binder) scope_.pop_back();
        return out;
      }
      default: return detail::map_children(f, [this](const FormulaPtr& c) { return go(c); }, same);
    }
  }

 private:
  // forall u >= n. N(u, args), eta-expanded over any missing arguments.
  FormulaPtr eliminate(const FormulaPtr& mu, std::vector<Arg> args) {
    std::vector<TypePtr> arg_types = mu->binder_type()->arguments();
    for (const auto& t : arg_types)
      if (!t->is_int() && !t->is_prop())
        throw UnsupportedError("mu-elimination supports only int and prop arguments; '" + mu->symbol().name +
                               "' has type " + mu->binder_type()->str());
    FormulaPtr counted = counted_nu(mu, arg_types);

    std::vector<Symbol> extra;
    for (std::size_t i = args.size(); i < arg_types.size(); ++i) {
      Symbol p = fresh_symbol(arg_types[i]->is_int() ? "y" : "k");
      extra.push_back(p);
      args.push_back(detail::reference_to(p, arg_types[i]));
      if (arg_types[i]->is_int()) scope_.push_back(p);
    }
    Symbol u = fresh_symbol("u");
    std::vector<Arg> full{IntExpr::var(u)};
    full.insert(full.end(), args.begin(), args.end());
    FormulaPtr out = Formula::forall(u, instantiate_bound(), apply_all(counted, full));
    for (std::size_t i = extra.size(); i-- > 0;) {
      const TypePtr& t = arg_types[arg_types.size() - extra.size() + i];
      if (t->is_int()) scope_.pop_back();
      out = Formula::lambda(extra[i], t, out);
    }
    return out;
  }

  // nu x'. \z. \y. z > 0 /\ psi[x := x'(z - 1)]
  FormulaPtr counted_nu(const FormulaPtr& mu, const std::vector<TypePtr>& arg_types) {
    FormulaPtr body = mu->body();
    std::vector<Symbol> params;
    for (std::size_t i = 0; i < arg_types.size(); ++i) {
      if (body->is(Formula::Kind::Lambda)) {
        params.push_back(body->symbol());
        body = body->body();
      } else {
        Symbol p = fresh_symbol(arg_types[i]->is_int() ? "y" : "k");
        params.push_back(p);
        body = Formula::app(body, detail::reference_to(p, arg_types[i]));
      }
    }
    for (std::size_t i = 0; i < params.size(); ++i)
      if (arg_types[i]->is_int()) scope_.push_back(params[i]);
    body = go(body);
    for (std::size_t i = 0; i < params.size(); ++i)
      if (arg_types[i]->is_int()) scope_.pop_back();

    Symbol x2 = fresh_symbol(mu->symbol().name + "'");
    Symbol z = fresh_symbol("z");
    TypePtr t2 = Type::arrow(Type::integer(), mu->binder_type());
    FormulaPtr step = Formula::app(Formula::var(x2, t2), IntExpr::sub(IntExpr::var(z), IntExpr::constant(1)));
    body = substitute(body, mu->symbol(), step);
    body = Formula::conj(Formula::atom(CmpOp::Gt, IntExpr::var(z), IntExpr::constant(0)), body);
    for (std::size_t i = params.size(); i-- > 0;) body = Formula::lambda(params[i], arg_types[i], body);
    return Formula::nu(x2, t2, Formula::lambda(z, Type::integer(), body));
  }

  std::vector<IntExprPtr> instantiate_bound() const {
    std::vector<IntExprPtr> out;
    for (const auto& piece : bound_.pieces) {
      IntExprPtr acc;
      for (const auto& [name, c] : piece.coefficients) {
        const Symbol* s = resolve(name);
        if (!s)
          throw Error("bound " + bound_.str() + " mentions '" + name +
                      "', which is not an integer variable in scope at the mu");
        IntExprPtr v = IntExpr::var(*s);
        std::int64_t mag = c < 0 ? -c : c;
        for (std::int64_t k = 0; k < mag; ++k) {
          if (!acc) acc = c > 0 ? v : IntExpr::neg(v);
          else acc = c > 0 ? IntExpr::add(acc, v) : IntExpr::sub(acc, v);
        }
      }
      std::int64_t d = piece.constant;
      if (!acc) acc = IntExpr::constant(d);
      else if (d > 0) acc = IntExpr::add(acc, IntExpr::constant(d));
      else if (d < 0) acc = IntExpr::sub(acc, IntExpr::constant(-d));
      out.push_back(acc);
    }
    return out;
  }

  const Symbol* resolve(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  const BoundExpr& bound_;
  std::vector<Symbol> scope_;
};

}  // namespace

FormulaPtr eliminate_mu(const FormulaPtr& formula, const BoundExpr& bound) {
  if (bound.pieces.empty()) throw Error("empty bound expression");
  return MuEliminator(bound).go(formula);
}

}  // namespace hflz
