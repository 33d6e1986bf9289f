#include "hflz/semantics.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "hflz/error.hpp"
#include "hflz/printer.hpp"
#include "hflz/typecheck.hpp"

namespace hflz {

std::string to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Valid: return "valid";
    case Verdict::Kind::Invalid: return "invalid";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

bool is_pure(const FormulaPtr& formula) { return !mentions_integers(formula); }

namespace {

using Key = std::vector<std::int64_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ k.size();
    for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ULL + (h >> 29);
    return h;
  }
};

struct FunObj;
struct Solver;

struct Value {
  enum class Kind : std::uint8_t { Prop, Int, Fun };
  Kind kind = Kind::Prop;
  StateSet mask = 0;
  std::int64_t num = 0;
  std::shared_ptr<const FunObj> fun;

  static Value prop(StateSet m) { return Value{Kind::Prop, m, 0, nullptr}; }
  static Value integer(std::int64_t n) { return Value{Kind::Int, 0, n, nullptr}; }
  static Value function(std::shared_ptr<const FunObj> f) { return Value{Kind::Fun, 0, 0, std::move(f)}; }
};

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::uint64_t id;
  Value value;
  Env next;
};

Env extend(Env env, std::uint64_t id, Value v) {
  return std::make_shared<const EnvNode>(EnvNode{id, std::move(v), std::move(env)});
}

using Table = std::unordered_map<Key, StateSet, KeyHash>;

struct FunObj {
  enum class Kind { Closure, Fix, Canon, Const };
  Kind kind = Kind::Closure;
  // Closure
  FormulaPtr lambda;
  Env env;
  // Fix: snapshot == nullptr means the solved (final) table.
  std::shared_ptr<Solver> solver;
  std::shared_ptr<const Table> snapshot;
  // Canon: extensional table over the full argument domain of `type`, plus
  // the value it was computed from (absent for enumerated elements).
  std::shared_ptr<const std::vector<StateSet>> canon;
  std::shared_ptr<const FunObj> origin;
  // Const: ignores `remaining` more arguments and yields `mask`.
  StateSet mask = 0;
  std::size_t remaining = 0;
  // Fix/Canon partial applications.
  TypePtr type;
  std::vector<Value> prefix;
};

struct Solver : std::enable_shared_from_this<Solver> {
  FormulaPtr node;
  Env env;
  bool least = true;
  std::vector<TypePtr> arg_types;
  std::shared_ptr<const Table> table = std::make_shared<Table>();
  std::vector<Key> domain;
  std::unordered_set<Key, KeyHash> in_domain;
  std::vector<Key> requests;
  bool solving = false;
  StateSet init = 0;
};

struct CacheKey {
  const Formula* node;
  std::vector<Value> values;
};

// Fixpoint values are recreated on every reference, so they are compared by
// solver and snapshot rather than by object identity.
bool same_value(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Prop: return a.mask == b.mask;
    case Value::Kind::Int: return a.num == b.num;
    case Value::Kind::Fun: {
      const FunObj& x = *a.fun;
      const FunObj& y = *b.fun;
      if (&x == &y) return true;
      if (x.kind != FunObj::Kind::Fix || y.kind != FunObj::Kind::Fix) return false;
      if (x.solver != y.solver || x.snapshot != y.snapshot || x.prefix.size() != y.prefix.size()) return false;
      for (std::size_t i = 0; i < x.prefix.size(); ++i)
        if (!same_value(x.prefix[i], y.prefix[i])) return false;
      return true;
    }
  }
  return false;
}

std::size_t value_hash(const Value& v) {
  if (v.kind != Value::Kind::Fun) return static_cast<std::size_t>(v.mask ^ static_cast<std::uint64_t>(v.num));
  if (v.fun->kind == FunObj::Kind::Fix)
    return std::hash<const void*>()(v.fun->solver.get()) ^ (std::hash<const void*>()(v.fun->snapshot.get()) << 1) ^
           v.fun->prefix.size();
  return std::hash<const void*>()(v.fun.get());
}

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const {
    std::size_t h = std::hash<const void*>()(k.node);
    for (const auto& v : k.values) h = (h ^ value_hash(v)) * 0x100000001b3ULL + (h >> 31);
    return h;
  }
};

struct CacheKeyEq {
  bool operator()(const CacheKey& a, const CacheKey& b) const {
    if (a.node != b.node || a.values.size() != b.values.size()) return false;
    for (std::size_t i = 0; i < a.values.size(); ++i)
      if (!same_value(a.values[i], b.values[i])) return false;
    return true;
  }
};

constexpr std::size_t kCacheLimit = 1 << 18;

class Evaluator {
 public:
  Evaluator(const Lts& model, const EvalOptions& options, bool exact, EvalStats* stats)
      : model_(model), options_(options), exact_(exact), stats_(stats) {
    if (model.states.size() > 64) throw ResourceError("models with more than 64 states are not supported");
    n_ = model.states.size();
    full_ = n_ == 64 ? ~StateSet{0} : (StateSet{1} << n_) - 1;
    for (std::size_t l = 0; l < model.labels.size(); ++l) succ_[model.labels[l]].assign(n_, 0);
    for (const auto& t : model.transitions) succ_[model.labels[t.label]][t.source] |= StateSet{1} << t.target;
    lookahead_ = options.lookahead;
  }

  StateSet run(const FormulaPtr& f) {
    Value v = eval(f, nullptr);
    if (v.kind != Value::Kind::Prop) throw TypeError("formula does not denote a proposition");
    return v.mask;
  }

 private:
  bool in_window(std::int64_t v) const { return exact_ || (v >= -options_.window && v <= options_.window); }
  bool strict() const { return !exact_ && options_.policy == WindowPolicy::Strict; }

  const Value& lookup(const Env& env, std::uint64_t id, const std::string& name) const {
    for (const EnvNode* n = env.get(); n; n = n->next.get())
      if (n->id == id) return n->value;
    throw Error("unbound variable '" + name + "' during evaluation");
  }

  std::int64_t eval_int(const IntExprPtr& e, const Env& env) const {
    switch (e->kind()) {
      case IntExpr::Kind::Const: return e->value();
      case IntExpr::Kind::Var: {
        const Value& v = lookup(env, e->symbol().id, e->symbol().name);
        if (v.kind != Value::Kind::Int) throw TypeError("'" + e->symbol().name + "' is not an integer");
        return v.num;
      }
      case IntExpr::Kind::Add: return eval_int(e->lhs(), env) + eval_int(e->rhs(), env);
      case IntExpr::Kind::Sub: return eval_int(e->lhs(), env) - eval_int(e->rhs(), env);
      case IntExpr::Kind::Neg: return -eval_int(e->lhs(), env);
    }
    return 0;
  }

  StateSet pre(const std::string& label, StateSet target, bool diamond) const {
    auto it = succ_.find(label);
    StateSet out = 0;
    for (std::size_t s = 0; s < n_; ++s) {
      StateSet succ = it == succ_.end() ? 0 : it->second[s];
      bool hit = diamond ? (succ & target) != 0 : (succ & ~target) == 0;
      if (hit) out |= StateSet{1} << s;
    }
    return out;
  }

  StateSet as_prop(const Value& v) const {
    if (v.kind != Value::Kind::Prop) throw TypeError("expected a proposition during evaluation");
    return v.mask;
  }

  Value eval(const FormulaPtr& f, const Env& env) {
    using K = Formula::Kind;
    switch (f->kind()) {
      case K::True: return Value::prop(full_);
      case K::False: return Value::prop(0);
      case K::Var: return lookup(env, f->symbol().id, f->symbol().name);
      case K::Or: {
        StateSet l = as_prop(eval(f->lhs(), env));
        if (l == full_) return Value::prop(l);
        return Value::prop(l | as_prop(eval(f->rhs(), env)));
      }
      case K::And: {
        StateSet l = as_prop(eval(f->lhs(), env));
        if (l == 0) return Value::prop(0);
        return Value::prop(l & as_prop(eval(f->rhs(), env)));
      }
      case K::Diamond: return Value::prop(pre(f->label(), as_prop(eval(f->body(), env)), true));
      case K::Box: return Value::prop(pre(f->label(), as_prop(eval(f->body(), env)), false));
      case K::Atom: {
        std::int64_t a = eval_int(f->int_lhs(), env);
        std::int64_t b = eval_int(f->int_rhs(), env);
        if (strict() && (!in_window(a) || !in_window(b))) return Value::prop(0);
        return Value::prop(holds(f->op(), a, b) ? full_ : 0);
      }
      case K::Exists:
      case K::Forall: return Value::prop(quantifier(f, env));
      case K::Lambda: {
        auto obj = std::make_shared<FunObj>();
        obj->kind = FunObj::Kind::Closure;
        obj->lambda = f;
        obj->env = env;
        return Value::function(std::move(obj));
      }
      case K::App: {
        Value fun = eval(f->fun(), env);
        Value arg = is_int_arg(f->arg()) ? Value::integer(eval_int(std::get<IntExprPtr>(f->arg()), env))
                                         : eval(std::get<FormulaPtr>(f->arg()), env);
        return apply(fun, arg);
      }
      case K::Mu:
      case K::Nu: return fixpoint(f, env);
    }
    throw Error("unknown formula node");
  }

  StateSet quantifier(const FormulaPtr& f, const Env& env) {
    if (exact_) throw UnsupportedError("quantifiers require bounded evaluation");
    bool forall = f->is(Formula::Kind::Forall);
    std::int64_t lo = -options_.window;
    for (const auto& b : f->bounds()) lo = std::max(lo, eval_int(b, env));
    if (forall && strict()) return 0;
    StateSet acc = forall ? full_ : 0;
    for (std::int64_t v = lo; v <= options_.window; ++v) {
      poll();
      StateSet r = as_prop(eval(f->body(), extend(env, f->symbol().id, Value::integer(v))));
      acc = forall ? (acc & r) : (acc | r);
      if (forall ? acc == 0 : acc == full_) break;
    }
    return acc;
  }

  void poll() {
    if (++polls_ % 256) return;
    if (options_.stop.stop_requested()) throw ResourceError("evaluation cancelled");
    if (std::chrono::steady_clock::now() >= options_.deadline) throw ResourceError("evaluation deadline passed");
  }

  static std::size_t arity_of(const TypePtr& t) { return t->arity(); }

  Value constant_function(StateSet mask, std::size_t remaining) {
    if (remaining == 0) return Value::prop(mask);
    auto obj = std::make_shared<FunObj>();
    obj->kind = FunObj::Kind::Const;
    obj->mask = mask;
    obj->remaining = remaining;
    return Value::function(std::move(obj));
  }

  Value apply(const Value& fun, const Value& arg) {
    if (fun.kind != Value::Kind::Fun) throw TypeError("applying a non-function during evaluation");
    const FunObj& f = *fun.fun;
    switch (f.kind) {
      case FunObj::Kind::Const: return constant_function(f.mask, f.remaining - 1);
      case FunObj::Kind::Closure: {
        if (arg.kind == Value::Kind::Int && strict() && !in_window(arg.num))
          return constant_function(0, arity_of(f.lambda->type()) - 1);
        return eval(f.lambda->body(), extend(f.env, f.lambda->symbol().id, arg));
      }
      case FunObj::Kind::Fix:
      case FunObj::Kind::Canon: {
        std::vector<Value> args = f.prefix;
        args.push_back(arg);
        if (args.size() < arity_of(f.type)) {
          auto obj = std::make_shared<FunObj>(f);
          obj->prefix = std::move(args);
          return Value::function(std::move(obj));
        }
        if (f.kind == FunObj::Kind::Fix) return Value::prop(fix_lookup(fun, f, args));
        return Value::prop(canon_lookup(f, args));
      }
    }
    throw Error("bad function value");
  }

  Value apply_all(Value fun, const std::vector<Value>& args) {
    for (const auto& a : args) fun = apply(fun, a);
    return fun;
  }

  // ---- finite domains -------------------------------------------------------

  const std::vector<Value>& domain_of(const TypePtr& t) {
    std::string key = t->str();
    auto it = domains_.find(key);
    if (it != domains_.end()) return it->second;
    std::vector<Value> out;
    if (t->is_int()) {
      for (std::int64_t v = -options_.window; v <= options_.window; ++v) out.push_back(Value::integer(v));
    } else if (t->is_prop()) {
      if (n_ > 20 || (std::size_t{1} << n_) > options_.table_cap)
        throw ResourceError("proposition domain 2^" + std::to_string(n_) + " exceeds the table cap");
      for (StateSet m = 0; m <= full_; ++m) {
        out.push_back(Value::prop(m));
        if (m == full_) break;
      }
    } else {
      out = enumerate_monotone(t);
    }
    return domains_.emplace(key, std::move(out)).first->second;
  }

  std::vector<std::vector<Value>> tuples_of(const std::vector<TypePtr>& types) {
    std::size_t total = 1;
    for (const auto& t : types) {
      total *= domain_of(t).size();
      if (total > options_.table_cap)
        throw ResourceError("argument domain of a function value exceeds the table cap (" +
                            std::to_string(options_.table_cap) + ")");
    }
    std::vector<std::vector<Value>> out;
    out.reserve(total);
    std::vector<Value> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == types.size()) {
        out.push_back(cur);
        return;
      }
      for (const auto& v : domain_of(types[i])) {
        cur.push_back(v);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    return out;
  }

  bool leq(const Value& a, const Value& b) {
    switch (a.kind) {
      case Value::Kind::Int: return a.num == b.num;
      case Value::Kind::Prop: return (a.mask & ~b.mask) == 0;
      case Value::Kind::Fun: {
        const auto& x = *a.fun->canon;
        const auto& y = *b.fun->canon;
        for (std::size_t i = 0; i < x.size(); ++i)
          if (x[i] & ~y[i]) return false;
        return true;
      }
    }
    return false;
  }

  std::vector<Value> enumerate_monotone(const TypePtr& t) {
    auto arg_types = t->arguments();
    auto tuples = tuples_of(arg_types);
    std::size_t m = tuples.size();
    std::vector<std::vector<std::size_t>> below(m), above(m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        bool ji = true, ij = true;
        for (std::size_t k = 0; k < arg_types.size(); ++k) {
          ji = ji && leq(tuples[j][k], tuples[i][k]);
          ij = ij && leq(tuples[i][k], tuples[j][k]);
        }
        if (ji) below[i].push_back(j);
        if (ij) above[i].push_back(j);
      }
    std::vector<Value> out;
    std::vector<StateSet> cur(m, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == m) {
        if (out.size() >= options_.table_cap)
          throw ResourceError("enumerating monotone functions of type " + t->str() + " exceeds the table cap");
        auto obj = std::make_shared<FunObj>();
        obj->kind = FunObj::Kind::Canon;
        obj->type = t;
        obj->canon = std::make_shared<const std::vector<StateSet>>(cur);
        out.push_back(Value::function(std::move(obj)));
        return;
      }
      for (StateSet v = 0;; ++v) {
        bool ok = true;
        for (auto j : below[i]) ok = ok && (cur[j] & ~v) == 0;
        for (auto j : above[i]) ok = ok && (v & ~cur[j]) == 0;
        if (ok) {
          cur[i] = v;
          rec(i + 1);
        }
        if (v == full_) break;
      }
    };
    rec(0);
    return out;
  }

  std::int64_t canonical_id(const Value& fun, const TypePtr& t) {
    auto tuples = tuples_of(t->arguments());
    std::vector<StateSet> table;
    table.reserve(tuples.size());
    for (const auto& tup : tuples) table.push_back(as_prop(apply_all(fun, tup)));
    auto& ids = canon_ids_[t->str()];
    auto it = ids.find(table);
    if (it != ids.end()) return it->second;
    std::int64_t id = static_cast<std::int64_t>(ids.size());
    auto obj = std::make_shared<FunObj>();
    obj->kind = FunObj::Kind::Canon;
    obj->type = t;
    obj->canon = std::make_shared<const std::vector<StateSet>>(table);
    obj->origin = fun.fun;
    canon_values_[t->str()].push_back(Value::function(obj));
    ids.emplace(std::move(table), id);
    return id;
  }

  std::int64_t key_part(const Value& v, const TypePtr& t) {
    switch (v.kind) {
      case Value::Kind::Int: return v.num;
      case Value::Kind::Prop: return static_cast<std::int64_t>(v.mask);
      case Value::Kind::Fun: return canonical_id(v, t);
    }
    return 0;
  }

  Value from_key_part(std::int64_t k, const TypePtr& t) {
    if (t->is_int()) return Value::integer(k);
    if (t->is_prop()) return Value::prop(static_cast<StateSet>(k));
    return canon_values_[t->str()].at(static_cast<std::size_t>(k));
  }

  std::size_t domain_index(const Value& v, const TypePtr& t) {
    switch (v.kind) {
      case Value::Kind::Int: return static_cast<std::size_t>(v.num + options_.window);
      case Value::Kind::Prop: return static_cast<std::size_t>(v.mask);
      case Value::Kind::Fun: {
        const auto& dom = domain_of(t);
        for (std::size_t i = 0; i < dom.size(); ++i)
          if (*dom[i].fun->canon == *v.fun->canon) return i;
        // Not monotone or outside the window; fall back to canonicalizing.
        auto tuples = tuples_of(t->arguments());
        std::vector<StateSet> table;
        for (const auto& tup : tuples) table.push_back(as_prop(apply_all(v, tup)));
        for (std::size_t i = 0; i < dom.size(); ++i)
          if (*dom[i].fun->canon == table) return i;
        throw Error("function argument is not monotone");
      }
    }
    return 0;
  }

  StateSet canon_lookup(const FunObj& f, const std::vector<Value>& args) {
    if (f.origin) return as_prop(apply_all(Value::function(f.origin), args));
    auto types = f.type->arguments();
    std::size_t index = 0;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].kind == Value::Kind::Int && (args[i].num < -options_.window || args[i].num > options_.window))
        return 0;
      index = index * domain_of(types[i]).size() + domain_index(args[i], types[i]);
    }
    return f.canon->at(index);
  }

  // ---- fixpoints --------------------------------------------------------------

  Value fixpoint(const FormulaPtr& f, const Env& env) {
    CacheKey key{f.get(), {}};
    for (auto id : f->free_ids()) key.values.push_back(lookup(env, id, "free variable"));
    auto it = cache_.find(key);
    std::shared_ptr<Solver> solver;
    if (it != cache_.end()) {
      solver = it->second;
    } else {
      if (cache_.size() > kCacheLimit) cache_.clear();
      solver = std::make_shared<Solver>();
      solver->node = f;
      solver->env = env;
      solver->least = f->is(Formula::Kind::Mu);
      solver->arg_types = f->binder_type()->arguments();
      solver->init = solver->least ? 0 : full_;
      seed_domain(*solver);
      solve(*solver);
      cache_.emplace(std::move(key), solver);
    }
    auto obj = std::make_shared<FunObj>();
    obj->kind = FunObj::Kind::Fix;
    obj->solver = solver;
    obj->type = f->binder_type();
    Value v = Value::function(std::move(obj));
    if (solver->arg_types.empty()) return Value::prop(fix_lookup(v, *v.fun, {}));
    return v;
  }

  // Small all-finite domains are seeded eagerly so the iteration count can be
  // compared with the full lattice height.
  void seed_domain(Solver& s) {
    std::size_t total = 1;
    for (const auto& t : s.arg_types) {
      if (t->is_int() || t->is_arrow()) return;
      total *= std::size_t{1} << n_;
      if (total > 4096) return;
    }
    for (auto& tup : tuples_of(s.arg_types)) {
      Key k;
      for (std::size_t i = 0; i < tup.size(); ++i) k.push_back(key_part(tup[i], s.arg_types[i]));
      if (s.in_domain.insert(k).second) s.domain.push_back(k);
    }
  }

  StateSet fix_lookup(const Value& self, const FunObj& f, const std::vector<Value>& args) {
    Solver& s = *f.solver;
    for (const auto& a : args) {
      if (a.kind == Value::Kind::Int && !in_window(a.num)) return out_of_window(self, s, args);
    }
    Key key;
    key.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) key.push_back(key_part(args[i], s.arg_types[i]));
    if (f.snapshot) {
      auto it = f.snapshot->find(key);
      if (it != f.snapshot->end()) return it->second;
      if (!s.in_domain.count(key)) s.requests.push_back(std::move(key));
      return s.init;
    }
    auto it = s.table->find(key);
    if (it != s.table->end()) return it->second;
    if (s.solving) throw Error("re-entrant fixpoint evaluation");
    if (s.in_domain.insert(key).second) s.domain.push_back(key);
    solve(s);
    return s.table->at(key);
  }

  StateSet out_of_window(const Value& self, Solver& s, const std::vector<Value>& args) {
    if (strict()) return 0;
    if (lookahead_ <= 0) return s.init;
    --lookahead_;
    Value body = eval(s.node->body(), extend(s.env, s.node->symbol().id, strip_prefix(self)));
    StateSet r = as_prop(apply_all(body, args));
    ++lookahead_;
    return r;
  }

  static Value strip_prefix(const Value& v) {
    if (v.fun->prefix.empty()) return v;
    auto obj = std::make_shared<FunObj>(*v.fun);
    obj->prefix.clear();
    return Value::function(std::move(obj));
  }

  void solve(Solver& s) {
    s.solving = true;
    if (s.domain.empty() && s.arg_types.empty()) {
      s.domain.push_back({});
      s.in_domain.insert({});
    }
    if (stats_) ++stats_->fixpoint_solves;
    std::size_t productive = 0;
    for (;;) {
      if (stats_) ++stats_->iterations;
      auto snap = std::make_shared<FunObj>();
      snap->kind = FunObj::Kind::Fix;
      snap->solver = s.shared_from_this();
      snap->snapshot = s.table;
      snap->type = s.node->binder_type();
      Value self = Value::function(snap);
      if (s.arg_types.empty()) {
        auto it = s.table->find(Key{});
        self = Value::prop(it == s.table->end() ? s.init : it->second);
      }
      Env env = extend(s.env, s.node->symbol().id, self);
      Value body = eval(s.node->body(), env);

      auto next = std::make_shared<Table>();
      bool changed = false;
      for (std::size_t i = 0; i < s.domain.size(); ++i) {
        const Key& k = s.domain[i];
        std::vector<Value> args;
        for (std::size_t j = 0; j < k.size(); ++j) args.push_back(from_key_part(k[j], s.arg_types[j]));
        poll();
        StateSet r = as_prop(apply_all(body, args));
        auto old = s.table->find(k);
        StateSet prev = old == s.table->end() ? s.init : old->second;
        if (r != prev) changed = true;
        (*next)[k] = r;
      }
      bool grew = false;
      for (auto& k : s.requests)
        if (s.in_domain.insert(k).second) {
          s.domain.push_back(std::move(k));
          grew = true;
        }
      s.requests.clear();
      if (s.domain.size() > options_.table_cap)
        throw ResourceError("fixpoint table for '" + s.node->symbol().name + "' exceeds the table cap (" +
                            std::to_string(options_.table_cap) + ")");
      s.table = std::move(next);
      if (changed) ++productive;
      if (!changed && !grew) break;
    }
    s.solving = false;
    if (stats_) {
      stats_->productive_iterations += productive;
      stats_->largest_table = std::max(stats_->largest_table, s.domain.size());
      if (productive > s.domain.size() * n_) stats_->within_height = false;
    }
  }

  const Lts& model_;
  EvalOptions options_;
  bool exact_;
  EvalStats* stats_;
  std::uint64_t polls_ = 0;
  std::size_t n_ = 0;
  StateSet full_ = 0;
  int lookahead_ = 0;
  std::unordered_map<std::string, std::vector<StateSet>> succ_;
  std::unordered_map<std::string, std::vector<Value>> domains_;
  std::unordered_map<std::string, std::map<std::vector<StateSet>, std::int64_t>> canon_ids_;
  std::unordered_map<std::string, std::vector<Value>> canon_values_;
  std::unordered_map<CacheKey, std::shared_ptr<Solver>, CacheKeyHash, CacheKeyEq> cache_;
};

void require_closed_prop(const FormulaPtr& formula) {
  if (!formula->free_ids().empty()) throw TypeError("formula has free variables: " + print(formula));
  require_prop(formula);
}

}  // namespace

bool check_pure(const Lts& model, const FormulaPtr& formula, EvalStats* stats, std::size_t table_cap) {
  require_closed_prop(formula);
  if (!is_pure(formula)) throw UnsupportedError("check_pure needs a pure formula (no integers)");
  EvalOptions opts;
  opts.table_cap = table_cap;
  Evaluator ev(model, opts, true, stats);
  return (ev.run(formula) >> model.initial) & 1;
}

StateSet denotation(const Lts& model, const FormulaPtr& formula, const EvalOptions& options, EvalStats* stats) {
  require_closed_prop(formula);
  if (options.window < 0) throw Error("window must be non-negative");
  Evaluator ev(model, options, false, stats);
  return ev.run(formula);
}

bool eval_bounded(const FormulaPtr& formula, const EvalOptions& options, const Lts* model, EvalStats* stats) {
  Lts trivial = trivial_model();
  const Lts& m = model ? *model : trivial;
  return (denotation(m, formula, options, stats) >> m.initial) & 1;
}

}  // namespace hflz
