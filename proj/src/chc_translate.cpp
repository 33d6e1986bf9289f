#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "formula_util.hpp"
#include "hflz/chc.hpp"
#include "hflz/entailment.hpp"
#include "hflz/error.hpp"
#include "hflz/printer.hpp"
#include "hflz/rewrite.hpp"

namespace hflz {

// ---- CHC -> HFL -----------------------------------------------------------------

namespace {

class ChcToHfl {
 public:
  explicit ChcToHfl(const ChcSystem& s) : system_(s) {
    for (const auto& [name, arity] : s.predicates) {
      Info& info = info_[name];
      info.type = Type::arrows(std::vector<TypePtr>(arity, Type::integer()), Type::prop());
      for (const auto& c : s.clauses)
        if (c.head && c.head->predicate == name) info.defs.push_back(&c);
      info.param_names = param_names(name, arity, info.defs);
    }
  }

  FormulaPtr run() {
    std::vector<FormulaPtr> goals;
    for (const auto& c : system_.clauses) {
      if (!c.is_goal()) continue;
      std::vector<FormulaPtr> duals;
      for (const auto& lit : c.body) duals.push_back(dualize(literal(lit, {}, {})));
      FormulaPtr g = disj_all(duals);
      for (std::size_t i = c.vars.size(); i-- > 0;) g = Formula::forall(c.vars[i], {}, g);
      goals.push_back(g);
    }
    return conj_all(goals);
  }

 private:
  struct Info {
    TypePtr type;
    std::vector<const Clause*> defs;
    std::vector<std::string> param_names;
  };
  using Bound = std::map<std::string, Symbol>;
  using Subst = std::vector<std::pair<Symbol, Arg>>;

  static std::vector<std::string> param_names(const std::string& pred, std::size_t arity,
                                              const std::vector<const Clause*>& defs) {
    for (const Clause* c : defs) {
      std::vector<std::string> names;
      std::set<std::uint64_t> seen;
      for (const auto& a : c->head->args) {
        if (a->kind() != IntExpr::Kind::Var || !seen.insert(a->symbol().id).second) break;
        names.push_back(a->symbol().name);
      }
      if (names.size() == arity && std::set<std::string>(names.begin(), names.end()).size() == arity) return names;
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < arity; ++i) names.push_back(pred.substr(0, 1) + std::to_string(i + 1));
    return names;
  }

  static IntExprPtr subst_int(const IntExprPtr& e, const Subst& s) {
    IntExprPtr out = e;
    // Targets are fresh, so sequential substitution is simultaneous.
    for (const auto& [v, val] : s) out = substitute(out, v, std::get<IntExprPtr>(val));
    return out;
  }

  FormulaPtr literal(const Literal& lit, const Bound& bound, const Subst& s) {
    if (const auto* f = std::get_if<FormulaPtr>(&lit)) return s.empty() ? *f : substitute_many(*f, s);
    const PredApp& app = std::get<PredApp>(lit);
    std::vector<Arg> args;
    for (const auto& a : app.args) args.push_back(subst_int(a, s));
    return apply_all(reference(app.predicate, bound), args);
  }

  FormulaPtr reference(const std::string& pred, const Bound& bound) {
    auto it = bound.find(pred);
    if (it != bound.end()) return Formula::var(it->second, info_.at(pred).type);
    return least(pred, bound);
  }

  // mu P. \params. \/ clauses, with predicates outside `bound` nested inside.
  FormulaPtr least(const std::string& pred, Bound bound) {
    const Info& info = info_.at(pred);
    Symbol self = fresh_symbol(pred);
    bound[pred] = self;
    std::vector<Symbol> params;
    for (const auto& n : info.param_names) params.push_back(fresh_symbol(n));

    std::vector<FormulaPtr> disjuncts;
    for (const Clause* c : info.defs) {
      Subst s;
      std::set<std::uint64_t> mapped;
      std::vector<FormulaPtr> eqs;
      for (std::size_t j = 0; j < params.size(); ++j) {
        const auto& a = c->head->args[j];
        if (a->kind() == IntExpr::Kind::Var && !mapped.count(a->symbol().id)) {
          mapped.insert(a->symbol().id);
          s.push_back({a->symbol(), IntExpr::var(params[j])});
        }
      }
      std::vector<Symbol> locals;
      for (const auto& v : c->vars) {
        if (mapped.count(v.id)) continue;
        Symbol fresh = fresh_symbol(v.name);
        locals.push_back(fresh);
        s.push_back({v, IntExpr::var(fresh)});
      }
      for (std::size_t j = 0; j < params.size(); ++j) {
        const auto& a = c->head->args[j];
        bool is_param = a->kind() == IntExpr::Kind::Var && subst_int(a, s)->kind() == IntExpr::Kind::Var &&
                        subst_int(a, s)->symbol().id == params[j].id;
        if (!is_param) eqs.push_back(Formula::atom(CmpOp::Eq, IntExpr::var(params[j]), subst_int(a, s)));
      }
      std::vector<FormulaPtr> parts = eqs;
      for (const auto& lit : c->body) parts.push_back(literal(lit, bound, s));
      FormulaPtr d = conj_all(parts);
      for (std::size_t i = locals.size(); i-- > 0;) d = Formula::exists(locals[i], {}, d);
      disjuncts.push_back(d);
    }
    FormulaPtr body = disj_all(disjuncts);
    for (std::size_t i = params.size(); i-- > 0;) body = Formula::lambda(params[i], Type::integer(), body);
    return Formula::mu(self, info.type, body);
  }

  const ChcSystem& system_;
  std::map<std::string, Info> info_;
};

}  // namespace

FormulaPtr chc_to_hfl(const ChcSystem& system) {
  system.validate();
  return ChcToHfl(system).run();
}

// ---- HFL -> CHC -----------------------------------------------------------------

namespace {

constexpr std::size_t kMaxDisjuncts = 4096;

void int_symbols(const IntExprPtr& e, std::vector<Symbol>& out) {
  switch (e->kind()) {
    case IntExpr::Kind::Var:
      if (std::none_of(out.begin(), out.end(), [&](const Symbol& s) { return s.id == e->symbol().id; }))
        out.push_back(e->symbol());
      break;
    case IntExpr::Kind::Add:
    case IntExpr::Kind::Sub:
      int_symbols(e->lhs(), out);
      int_symbols(e->rhs(), out);
      break;
    case IntExpr::Kind::Neg: int_symbols(e->lhs(), out); break;
    default: break;
  }
}

void int_symbols(const FormulaPtr& f, std::vector<Symbol>& out) {
  detail::map_children(
      f,
      [&](const FormulaPtr& c) {
        int_symbols(c, out);
        return c;
      },
      [&](const IntExprPtr& e) {
        int_symbols(e, out);
        return e;
      });
}

class HflToChc {
 public:
  ChcSystem run(const FormulaPtr& formula) {
    if (!formula->free_ids().empty()) throw UnsupportedError("hfl_to_chc needs a closed formula");
    for (auto& part : dnf(dualize(formula))) system_.clauses.push_back(Clause{part.vars, part.lits, std::nullopt});
    merge_equivalent();
    system_.validate();
    return system_;
  }

 private:
  struct Partial {
    std::vector<Symbol> vars;
    std::vector<Literal> lits;
  };

  struct Def {
    FormulaPtr node;
    std::string name;
    std::vector<Symbol> lifted;
  };

  [[noreturn]] static void refuse(const FormulaPtr& f, const std::string& why) {
    throw UnsupportedError("cannot translate to CHC (" + why + "): " + print(f));
  }

  std::vector<Partial> dnf(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind()) {
      case K::True: return {Partial{}};
      case K::False: return {};
      case K::Atom: return {Partial{{}, {f}}};
      case K::Or: {
        auto l = dnf(f->lhs());
        auto r = dnf(f->rhs());
        l.insert(l.end(), r.begin(), r.end());
        if (l.size() > kMaxDisjuncts) throw ResourceError("disjunctive normal form too large");
        return l;
      }
      case K::And: {
        auto l = dnf(f->lhs());
        if (l.empty()) return {};
        auto r = dnf(f->rhs());
        if (l.size() * r.size() > kMaxDisjuncts) throw ResourceError("disjunctive normal form too large");
        std::vector<Partial> out;
        for (const auto& a : l)
          for (const auto& b : r) {
            Partial p = a;
            p.vars.insert(p.vars.end(), b.vars.begin(), b.vars.end());
            p.lits.insert(p.lits.end(), b.lits.begin(), b.lits.end());
            out.push_back(std::move(p));
          }
        return out;
      }
      case K::Exists: {
        Symbol x = fresh_symbol(f->symbol().name);
        FormulaPtr body = substitute(f->body(), f->symbol(), IntExpr::var(x));
        std::vector<Literal> guards;
        for (const auto& b : f->bounds()) guards.push_back(Formula::atom(CmpOp::Ge, IntExpr::var(x), b));
        auto parts = dnf(body);
        for (auto& p : parts) {
          p.vars.insert(p.vars.begin(), x);
          p.lits.insert(p.lits.begin(), guards.begin(), guards.end());
        }
        return parts;
      }
      case K::App:
      case K::Var:
      case K::Mu: return {Partial{{}, {pred_app(f)}}};
      case K::Nu: refuse(f, "greatest fixpoint in the refutation form");
      case K::Forall: refuse(f, "universal quantifier in the refutation form");
      case K::Diamond:
      case K::Box: refuse(f, "modal operator");
      case K::Lambda: refuse(f, "unapplied abstraction");
    }
    refuse(f, "unexpected node");
  }

  PredApp pred_app(const FormulaPtr& f) {
    Spine sp = spine_of(f);
    const Def* def = nullptr;
    if (sp.head->is(Formula::Kind::Mu)) {
      def = &define(sp.head);
    } else if (sp.head->is(Formula::Kind::Var)) {
      auto it = by_binder_.find(sp.head->symbol().id);
      if (it == by_binder_.end()) refuse(f, "free predicate variable");
      def = &defs_[it->second];
    } else {
      refuse(f, "application head is not a fixpoint");
    }
    PredApp app{def->name, {}};
    for (const auto& v : def->lifted) app.args.push_back(IntExpr::var(v));
    for (const auto& a : sp.args) {
      if (!is_int_arg(a)) refuse(f, "predicate argument");
      app.args.push_back(std::get<IntExprPtr>(a));
    }
    if (app.args.size() != system_.predicates.at(def->name)) refuse(f, "partial application");
    return app;
  }

  std::string fresh_name(const Symbol& binder) {
    std::string base = binder.name;
    while (!base.empty() && base.back() == '\'') base.pop_back();
    if (base.empty()) base = "P";
    if (base.size() == 1) base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
    std::string name = base;
    for (int k = 1; system_.predicates.count(name); ++k) name = base + std::to_string(k);
    return name;
  }

  const Def& define(const FormulaPtr& mu) {
    for (std::size_t i = 0; i < defs_.size(); ++i)
      if (alpha_equal(defs_[i].node, mu)) {
        by_binder_[mu->symbol().id] = i;
        return defs_[i];
      }
    std::vector<TypePtr> arg_types = mu->binder_type()->arguments();
    for (const auto& t : arg_types)
      if (!t->is_int()) refuse(mu, "fixpoint of type " + mu->binder_type()->str());

    Def def{mu, fresh_name(mu->symbol()), {}};
    std::vector<Symbol> ints;
    int_symbols(mu, ints);
    for (const auto& s : ints)
      if (contains(mu->free_ids(), s.id)) def.lifted.push_back(s);
    system_.predicates[def.name] = def.lifted.size() + arg_types.size();
    std::size_t index = defs_.size();
    defs_.push_back(def);
    by_binder_[mu->symbol().id] = index;

    FormulaPtr body = mu->body();
    std::vector<Symbol> params;
    for (std::size_t i = 0; i < arg_types.size(); ++i) {
      if (body->is(Formula::Kind::Lambda)) {
        params.push_back(body->symbol());
        body = body->body();
      } else {
        Symbol p = fresh_symbol("y");
        params.push_back(p);
        body = Formula::app(body, IntExpr::var(p));
      }
    }
    PredApp head{def.name, {}};
    std::vector<Symbol> vars = def.lifted;
    vars.insert(vars.end(), params.begin(), params.end());
    for (const auto& v : vars) head.args.push_back(IntExpr::var(v));
    for (auto& part : dnf(body)) {
      std::vector<Symbol> cv = vars;
      cv.insert(cv.end(), part.vars.begin(), part.vars.end());
      system_.clauses.push_back(Clause{cv, part.lits, head});
    }
    return defs_[index];
  }

  static std::string clause_key(const Clause& c, const std::map<std::string, std::string>& rename) {
    std::map<std::uint64_t, std::string> names;
    for (std::size_t i = 0; i < c.vars.size(); ++i) names[c.vars[i].id] = "v" + std::to_string(i);
    auto app = [&](const PredApp& a) {
      std::string out = "(" + rename.at(a.predicate);
      for (const auto& e : a.args) out += " " + smtlib_term(e, names);
      return out + ")";
    };
    std::string out = std::to_string(c.vars.size()) + ":";
    for (const auto& lit : c.body) {
      if (const auto* f = std::get_if<FormulaPtr>(&lit)) out += smtlib_atom(*f, names);
      else out += app(std::get<PredApp>(lit));
    }
    return out + "=>" + (c.head ? app(*c.head) : "false");
  }

  // Bekic-style nesting duplicates predicates; predicates whose definitions
  // coincide up to already-identified predicates have the same least model,
  // so they are merged (coarsest stable partition).
  void merge_equivalent() {
    std::vector<std::string> order;
    for (const auto& d : defs_) order.push_back(d.name);
    std::map<std::string, std::string> cls;
    for (const auto& n : order) cls[n] = "a" + std::to_string(system_.predicates.at(n));
    for (std::size_t classes = 0;;) {
      std::map<std::string, std::vector<std::string>> keys;
      for (const auto& c : system_.clauses)
        if (c.head) {
          std::map<std::string, std::string> r = cls;
          r[c.head->predicate] = "self";
          keys[c.head->predicate].push_back(clause_key(c, r));
        }
      std::map<std::string, std::string> sig_to_id;
      std::map<std::string, std::string> next;
      for (const auto& n : order) {
        auto& k = keys[n];
        std::sort(k.begin(), k.end());
        std::string sig = cls[n] + "|";
        for (const auto& x : k) sig += x + ";";
        auto [it, inserted] = sig_to_id.emplace(sig, "c" + std::to_string(sig_to_id.size()));
        next[n] = it->second;
      }
      std::size_t count = sig_to_id.size();
      cls = std::move(next);
      if (count == classes) break;
      classes = count;
    }
    std::map<std::string, std::string> rep;
    std::map<std::string, std::string> final_name;
    for (const auto& n : order) {
      auto [it, inserted] = rep.emplace(cls[n], n);
      final_name[n] = it->second;
    }
    std::vector<Clause> kept;
    std::set<std::string> seen;
    for (auto c : system_.clauses) {
      for (auto& lit : c.body)
        if (auto* a = std::get_if<PredApp>(&lit)) a->predicate = final_name.at(a->predicate);
      if (c.head) c.head->predicate = final_name.at(c.head->predicate);
      std::map<std::string, std::string> identity;
      for (const auto& [n, f] : final_name) identity[n] = n;
      if (seen.insert(clause_key(c, identity)).second) kept.push_back(std::move(c));
    }
    system_.clauses = std::move(kept);
    for (const auto& n : order)
      if (final_name[n] != n) system_.predicates.erase(n);
  }

  ChcSystem system_;
  std::vector<Def> defs_;
  std::map<std::uint64_t, std::size_t> by_binder_;
};

}  // namespace

ChcSystem hfl_to_chc(const FormulaPtr& formula) { return HflToChc().run(formula); }

}  // namespace hflz
