#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>

#include "formula_util.hpp"
#include "hflz/error.hpp"
#include "hflz/parser.hpp"
#include "hflz/printer.hpp"
#include "hflz/rewrite.hpp"
#include "hflz/transforms.hpp"

namespace hflz {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

bool mentions_int(const TypePtr& t) {
  if (t->is_int()) return true;
  if (t->is_prop()) return false;
  return mentions_int(t->argument()) || mentions_int(t->result());
}

struct ParamSig {
  Symbol param;
  TypePtr type;
  std::vector<FormulaPtr> preds;
};

/// b stands for "pred holds".
struct Known {
  Symbol b;
  FormulaPtr pred;
};

class Abstractor {
 public:
  Abstractor(const PredicateSet& preds, EntailmentOracle& oracle, std::vector<std::string>* warnings,
             const AbstractionOptions& options)
      : preds_(preds), oracle_(oracle), warnings_(warnings), options_(options) {
    if (oracle.heuristic()) warn("entailment checked by window search only; the abstraction is heuristic");
  }

  FormulaPtr go(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind()) {
      case K::True:
      case K::False: return f;
      case K::Var: {
        auto it = new_types_.find(f->symbol().id);
        if (it != new_types_.end()) {
          if (has_int_param(sigs_.at(f->symbol().id))) refuse(f);
          return Formula::var(f->symbol(), it->second);
        }
        if (mentions_int(f->type())) refuse(f);
        return f;
      }
      case K::Or:
      case K::And:
      case K::Diamond:
      case K::Box: return detail::map_children(f, [this](const FormulaPtr& c) { return go(c); }, no_int);
      case K::Atom: return weakest(f);
      case K::Mu:
      case K::Nu:
      case K::Lambda: {
        std::vector<ParamSig> sig;
        FormulaPtr out = function(f, sig);
        if (has_int_param(sig) && !f->is_fixpoint()) refuse(f);
        return out;
      }
      case K::App: return application(f);
      case K::Exists:
      case K::Forall: return quantifier(f);
    }
    return f;
  }

 private:
  static IntExprPtr no_int(const IntExprPtr&) { throw Error("unexpected integer expression"); }

  [[noreturn]] static void refuse(const FormulaPtr& f) {
    throw UnsupportedError("predicate abstraction does not support higher-order integer flow: " + print(f));
  }

  static bool has_int_param(const std::vector<ParamSig>& sig) {
    return std::any_of(sig.begin(), sig.end(), [](const ParamSig& p) { return p.type->is_int(); });
  }

  void warn(const std::string& msg) {
    if (!warnings_) return;
    if (std::find(warnings_->begin(), warnings_->end(), msg) == warnings_->end()) warnings_->push_back(msg);
  }

  std::vector<FormulaPtr> predicates_for(const Symbol& s) {
    std::vector<TypedSymbol> env;
    for (const auto& v : ints_) env.push_back({v, Type::integer()});
    env.push_back({s, Type::integer()});
    std::vector<FormulaPtr> out;
    for (const auto& text : preds_.for_binder(s.name)) {
      FormulaPtr p = parse_formula(text, env);
      if (!p->is(Formula::Kind::Atom)) throw Error("predicate for '" + s.name + "' is not a single atom: " + text);
      out.push_back(p);
    }
    return out;
  }

  // Abstracts a fixpoint or lambda chain; `sig` receives its parameters.
  FormulaPtr function(const FormulaPtr& f, std::vector<ParamSig>& sig) {
    bool fix = f->is_fixpoint();
    TypePtr type = fix ? f->binder_type() : f->type();
    std::vector<TypePtr> arg_types = type->arguments();
    for (const auto& t : arg_types)
      if (!t->is_int() && mentions_int(t)) refuse(f);

    FormulaPtr body = fix ? f->body() : f;
    std::vector<Symbol> params;
    for (const auto& t : arg_types) {
      if (body->is(Formula::Kind::Lambda)) {
        params.push_back(body->symbol());
        body = body->body();
      } else {
        Symbol p = fresh_symbol(t->is_int() ? "y" : "k");
        params.push_back(p);
        body = Formula::app(body, detail::reference_to(p, t));
      }
    }

    std::size_t known_mark = known_.size();
    std::size_t ints_mark = ints_.size();
    std::vector<std::vector<Symbol>> bools(params.size());
    std::vector<TypePtr> new_args;
    for (std::size_t i = 0; i < params.size(); ++i) {
      ParamSig ps{params[i], arg_types[i], {}};
      if (arg_types[i]->is_int()) {
        ps.preds = predicates_for(params[i]);
        for (std::size_t j = 0; j < ps.preds.size(); ++j) {
          bools[i].push_back(fresh_symbol("b"));
          new_args.push_back(Type::prop());
        }
        ints_.push_back(params[i]);
      } else {
        new_args.push_back(arg_types[i]);
      }
      sig.push_back(std::move(ps));
    }
    for (std::size_t i = 0; i < params.size(); ++i)
      for (std::size_t j = 0; j < bools[i].size(); ++j) known_.push_back({bools[i][j], sig[i].preds[j]});
    TypePtr new_type = Type::arrows(new_args, Type::prop());
    if (fix) {
      sigs_[f->symbol().id] = sig;
      new_types_[f->symbol().id] = new_type;
    }

    FormulaPtr out = go(body);
    known_.resize(known_mark);
    ints_.resize(ints_mark);

    for (std::size_t i = params.size(); i-- > 0;) {
      if (arg_types[i]->is_int()) {
        for (std::size_t j = bools[i].size(); j-- > 0;) out = Formula::lambda(bools[i][j], Type::prop(), out);
      } else {
        out = Formula::lambda(params[i], arg_types[i], out);
      }
    }
    if (fix) out = Formula::fixpoint(f->kind(), f->symbol(), new_type, out);
    return out;
  }

  FormulaPtr application(const FormulaPtr& f) {
    Spine sp = spine_of(f);
    std::vector<ParamSig> sig;
    FormulaPtr head;
    if (sp.head->is(Formula::Kind::Var)) {
      auto it = sigs_.find(sp.head->symbol().id);
      if (it != sigs_.end()) {
        sig = it->second;
        head = Formula::var(sp.head->symbol(), new_types_.at(sp.head->symbol().id));
      } else {
        if (mentions_int(sp.head->type())) refuse(f);
        head = sp.head;
        for (const auto& t : sp.head->type()->arguments()) sig.push_back({Symbol{}, t, {}});
      }
    } else if (sp.head->is_fixpoint() || sp.head->is(Formula::Kind::Lambda)) {
      head = function(sp.head, sig);
    } else {
      throw UnsupportedError("unexpected application head: " + print(sp.head));
    }

    std::vector<Arg> args;
    for (std::size_t i = 0; i < sp.args.size(); ++i) {
      const ParamSig& ps = sig.at(i);
      if (ps.type->is_int()) {
        const auto& e = std::get<IntExprPtr>(sp.args[i]);
        for (const auto& p : ps.preds) args.push_back(weakest(substitute(p, ps.param, e)));
      } else {
        args.push_back(go(std::get<FormulaPtr>(sp.args[i])));
      }
    }
    if (sp.args.size() < sig.size() && has_int_param({sig.begin() + static_cast<std::ptrdiff_t>(sp.args.size()), sig.end()}))
      refuse(f);
    return apply_all(head, args);
  }

  FormulaPtr quantifier(const FormulaPtr& f) {
    bool forall = f->is(Formula::Kind::Forall);
    const Symbol& x = f->symbol();
    IntExprPtr xv = IntExpr::var(x);
    FormulaPtr body = f->body();
    for (std::size_t i = f->bounds().size(); i-- > 0;) {
      const auto& e = f->bounds()[i];
      body = forall ? Formula::disj(Formula::atom(CmpOp::Lt, xv, e), body)
                    : Formula::conj(Formula::atom(CmpOp::Ge, xv, e), body);
    }

    std::vector<FormulaPtr> preds = predicates_for(x);
    std::vector<Symbol> bs;
    std::size_t mark = known_.size();
    for (const auto& p : preds) {
      bs.push_back(fresh_symbol("b"));
      known_.push_back({bs.back(), p});
    }
    ints_.push_back(x);
    FormulaPtr abs = go(body);
    ints_.pop_back();
    known_.resize(mark);

    std::vector<std::uint32_t> cells = forall ? realizable_minimal(x, preds) : satisfiable_maximal(x, preds);
    std::vector<FormulaPtr> parts;
    for (auto cell : cells) {
      std::vector<std::pair<Symbol, Arg>> binding;
      for (std::size_t i = 0; i < bs.size(); ++i)
        binding.push_back({bs[i], (cell >> i) & 1 ? Formula::tt() : Formula::ff()});
      parts.push_back(binding.empty() ? abs : substitute_many(abs, binding));
    }
    return forall ? conj_all(parts) : disj_all(parts);
  }

  static bool only_mentions(const std::vector<FormulaPtr>& preds, const Symbol& x) {
    for (const auto& p : preds)
      for (auto id : p->free_ids())
        if (id != x.id) return false;
    return true;
  }

  static FormulaPtr negate(const FormulaPtr& a) { return Formula::atom(complement(a->op()), a->int_lhs(), a->int_rhs()); }

  static constexpr std::size_t kMaxCellPreds = 10;

  // Minimal sets {i : p_i(x)} over all integers x; checking only these is
  // enough because the abstraction is monotone in every b.
  std::vector<std::uint32_t> realizable_minimal(const Symbol& x, const std::vector<FormulaPtr>& preds) {
    std::size_t m = preds.size();
    if (m == 0 || m > kMaxCellPreds || !only_mentions(preds, x)) return {0};
    std::vector<std::uint32_t> real;
    for (std::uint32_t c = 0; c < (1u << m); ++c) {
      std::vector<FormulaPtr> lits;
      for (std::size_t i = 0; i < m; ++i) lits.push_back((c >> i) & 1 ? preds[i] : negate(preds[i]));
      Tri t = oracle_.satisfiable(lits);
      if (t == Tri::Unknown) warn("could not decide a predicate cell; keeping it");
      if (t != Tri::No) real.push_back(c);
    }
    std::vector<std::uint32_t> out;
    for (auto c : real)
      if (std::none_of(real.begin(), real.end(), [&](std::uint32_t d) { return d != c && (d & c) == d; }))
        out.push_back(c);
    return out;
  }

  std::vector<std::uint32_t> satisfiable_maximal(const Symbol& x, const std::vector<FormulaPtr>& preds) {
    std::size_t m = preds.size();
    if (m == 0 || m > kMaxCellPreds || !only_mentions(preds, x)) return {0};
    std::vector<std::uint32_t> sat;
    for (std::uint32_t c = 0; c < (1u << m); ++c) {
      std::vector<FormulaPtr> lits;
      for (std::size_t i = 0; i < m; ++i)
        if ((c >> i) & 1) lits.push_back(preds[i]);
      if (lits.empty() || oracle_.satisfiable(lits) == Tri::Yes) sat.push_back(c);
    }
    std::vector<std::uint32_t> out;
    for (auto c : sat)
      if (std::none_of(sat.begin(), sat.end(), [&](std::uint32_t d) { return d != c && (d & c) == c; }))
        out.push_back(c);
    return out;
  }

  // Disjunction over the minimal sets of in-scope predicates entailing `goal`.
  FormulaPtr weakest(const FormulaPtr& goal) {
    if (goal->free_ids().empty()) {
      bool v = holds(goal->op(), eval_constant(goal->int_lhs()), eval_constant(goal->int_rhs()));
      return v ? Formula::tt() : Formula::ff();
    }
    // Only predicates connected to the goal's variables can help.
    std::set<std::uint64_t> vars(goal->free_ids().begin(), goal->free_ids().end());
    std::vector<const Known*> relevant;
    std::vector<bool> taken(known_.size(), false);
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t i = 0; i < known_.size(); ++i) {
        if (taken[i]) continue;
        const auto& ids = known_[i].pred->free_ids();
        if (std::any_of(ids.begin(), ids.end(), [&](std::uint64_t id) { return vars.count(id) > 0; })) {
          taken[i] = true;
          vars.insert(ids.begin(), ids.end());
          grew = true;
        }
      }
    }
    for (std::size_t i = 0; i < known_.size(); ++i)
      if (taken[i]) relevant.push_back(&known_[i]);

    std::vector<std::vector<std::size_t>> found;
    std::vector<std::size_t> pick;
    std::size_t limit = std::min(options_.max_conjunction, relevant.size());
    auto superset_of_found = [&] {
      for (const auto& s : found)
        if (std::includes(pick.begin(), pick.end(), s.begin(), s.end())) return true;
      return false;
    };
    std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t size) {
      if (pick.size() == size) {
        if (superset_of_found()) return;
        std::vector<FormulaPtr> hyps;
        for (auto i : pick) hyps.push_back(relevant[i]->pred);
        Tri t = oracle_.entails(hyps, goal);
        if (t == Tri::Yes) found.push_back(pick);
        if (t == Tri::Unknown) warn("entailment undecided for " + print(goal) + "; treated as not entailed");
        return;
      }
      for (std::size_t i = start; i < relevant.size(); ++i) {
        pick.push_back(i);
        choose(i + 1, size);
        pick.pop_back();
      }
    };
    for (std::size_t size = 0; size <= limit; ++size) {
      choose(0, size);
      if (size == 0 && !found.empty()) return Formula::tt();
    }
    std::vector<FormulaPtr> disjuncts;
    for (const auto& s : found) {
      std::vector<FormulaPtr> conj;
      for (auto i : s) conj.push_back(Formula::var(relevant[i]->b, Type::prop()));
      disjuncts.push_back(conj_all(conj));
    }
    return disj_all(disjuncts);
  }

  const PredicateSet& preds_;
  EntailmentOracle& oracle_;
  std::vector<std::string>* warnings_;
  AbstractionOptions options_;
  std::vector<Symbol> ints_;
  std::vector<Known> known_;
  std::unordered_map<std::uint64_t, std::vector<ParamSig>> sigs_;
  std::unordered_map<std::uint64_t, TypePtr> new_types_;
};

}  // namespace

void PredicateSet::add(const std::string& binder, const std::string& predicate) {
  by_name_[binder].push_back(predicate);
}

void PredicateSet::add_default(const std::string& predicate) { defaults_.push_back(predicate); }

std::vector<std::string> PredicateSet::for_binder(const std::string& name) const {
  auto it = by_name_.find(name);
  const auto& src = it != by_name_.end() ? it->second : defaults_;
  std::vector<std::string> out;
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
  for (const auto& text : src) {
    std::string t;
    for (std::size_t i = 0; i < text.size(); ++i) {
      bool lone = text[i] == '_' && (i == 0 || !ident(text[i - 1])) && (i + 1 == text.size() || !ident(text[i + 1]));
      if (lone) t += name;
      else t += text[i];
    }
    out.push_back(t);
  }
  return out;
}

PredicateSet parse_predicate_set(std::string_view text) {
  PredicateSet out;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string l = trim(line);
    if (l.empty()) continue;
    auto colon = l.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'binder: predicate, ...'", lineno, 1);
    std::string binder = trim(std::string_view(l).substr(0, colon));
    if (binder.empty()) throw ParseError("missing binder name", lineno, 1);
    std::string rest = l.substr(colon + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t comma = rest.find(',', start);
      if (comma == std::string::npos) comma = rest.size();
      std::string pred = trim(std::string_view(rest).substr(start, comma - start));
      start = comma + 1;
      if (pred.empty()) continue;
      if (binder == "*") out.add_default(pred);
      else out.add(binder, pred);
    }
  }
  return out;
}

FormulaPtr abstract_predicates(const FormulaPtr& formula, const PredicateSet& predicates, EntailmentOracle& oracle,
                               std::vector<std::string>* warnings, const AbstractionOptions& options) {
  if (!mentions_integers(formula)) return formula;
  return Abstractor(predicates, oracle, warnings, options).go(formula);
}

}  // namespace hflz
