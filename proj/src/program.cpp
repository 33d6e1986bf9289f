#include "hflz/program.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "hflz/error.hpp"
#include "lexer.hpp"

namespace hflz {

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

// Untyped syntax; parameter kinds are inferred afterwards.
struct Raw;
using RawPtr = std::shared_ptr<Raw>;
struct Raw {
  enum class Kind { Unit, Num, Name, Call, Add, Sub, Neg, If, Seq, Event };
  Kind kind = Kind::Unit;
  Token where;
  std::string name;
  std::int64_t value = 0;
  std::vector<RawPtr> items;
  CmpOp op = CmpOp::Le;
};

RawPtr make(Raw::Kind k, const Token& where, std::vector<RawPtr> items = {}) {
  auto r = std::make_shared<Raw>();
  r->kind = k;
  r->where = where;
  r->items = std::move(items);
  return r;
}

struct RawDef {
  Token where;
  std::string name;
  bool recursive = false;
  std::vector<Token> params;
  RawPtr body;
};

class ProgramParser {
 public:
  explicit ProgramParser(TokenStream& ts) : ts_(ts) {}

  std::vector<RawDef> defs;
  std::set<std::string> handles;
  RawPtr main;

  void program() {
    while (true) {
      if (ts_.at_keyword("let")) {
        definition();
        continue;
      }
      if (ts_.accept_keyword("main")) {
        ts_.expect(Tok::Eq, "'=' after main");
        if (ts_.at(Tok::End)) ts_.fail("main has an empty body");
        main = expr();
        break;
      }
      if (ts_.at(Tok::End)) ts_.fail(defs.empty() && handles.empty() ? "empty program" : "missing main expression");
      main = expr();
      break;
    }
    if (!ts_.at(Tok::End)) ts_.fail("unexpected " + detail::describe(ts_.peek()) + " after main expression");
  }

 private:
  void definition() {
    Token let = ts_.next();
    RawDef d;
    d.where = let;
    d.recursive = ts_.accept_keyword("rec");
    d.name = ts_.expect(Tok::Ident, "a name after let").text;
    if (detail::is_keyword(d.name)) ts_.fail_at(let, "'" + d.name + "' is a keyword");
    while (ts_.at(Tok::Ident)) d.params.push_back(ts_.next());
    ts_.expect(Tok::Eq, "'=' in definition");
    if (ts_.at(Tok::Ident) && ts_.peek().text == "open" && d.params.empty() && !d.recursive) {
      ts_.next();
      if (ts_.at(Tok::String) || ts_.at(Tok::Ident)) {
        ts_.next();
      } else if (ts_.accept(Tok::LParen)) {
        if (ts_.at(Tok::String) || ts_.at(Tok::Ident)) ts_.next();
        ts_.expect(Tok::RParen, "')'");
      }
      handles.insert(d.name);
    } else {
      d.body = expr();
      defs.push_back(std::move(d));
    }
    ts_.accept_keyword("in");
  }

  RawPtr expr() {
    if (ts_.at_keyword("if")) {
      Token t = ts_.next();
      RawPtr lhs = arith();
      const Token& optok = ts_.peek();
      CmpOp op;
      switch (optok.kind) {
        case Tok::Le: op = CmpOp::Le; break;
        case Tok::Lt: op = CmpOp::Lt; break;
        case Tok::Ge: op = CmpOp::Ge; break;
        case Tok::Gt: op = CmpOp::Gt; break;
        case Tok::Eq: op = CmpOp::Eq; break;
        case Tok::Ne: op = CmpOp::Ne; break;
        default: ts_.fail("expected a comparison in the condition");
      }
      ts_.next();
      RawPtr rhs = arith();
      ts_.expect_keyword("then");
      RawPtr th = expr();
      ts_.expect_keyword("else");
      RawPtr el = expr();
      RawPtr r = make(Raw::Kind::If, t, {lhs, rhs, th, el});
      r->op = op;
      return r;
    }
    if (ts_.at_keyword("event")) {
      Token t = ts_.next();
      Token label = ts_.expect(Tok::Ident, "an event name");
      RawPtr r = make(Raw::Kind::Event, t);
      r->name = label.text;
      if (ts_.accept(Tok::Semi)) r->items.push_back(expr());
      return r;
    }
    RawPtr first = arith();
    if (ts_.at(Tok::Semi)) {
      Token t = ts_.next();
      return make(Raw::Kind::Seq, t, {first, expr()});
    }
    return first;
  }

  RawPtr arith() {
    RawPtr acc = unary();
    while (ts_.at(Tok::Plus) || ts_.at(Tok::Minus)) {
      Token t = ts_.next();
      acc = make(t.kind == Tok::Plus ? Raw::Kind::Add : Raw::Kind::Sub, t, {acc, unary()});
    }
    return acc;
  }

  RawPtr unary() {
    if (ts_.at(Tok::Minus)) {
      Token t = ts_.next();
      return make(Raw::Kind::Neg, t, {unary()});
    }
    RawPtr head = primary();
    if (head->kind != Raw::Kind::Name) return head;
    std::vector<RawPtr> args;
    while (starts_primary()) args.push_back(primary());
    if (args.empty()) return head;
    RawPtr call = make(Raw::Kind::Call, head->where, std::move(args));
    call->name = head->name;
    return call;
  }

  bool starts_primary() const {
    if (ts_.at(Tok::Int) || ts_.at(Tok::LParen)) return true;
    return ts_.at(Tok::Ident) && !detail::is_keyword(ts_.peek().text);
  }

  RawPtr primary() {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Int) {
      RawPtr r = make(Raw::Kind::Num, ts_.next());
      r->value = r->where.value;
      return r;
    }
    if (t.kind == Tok::Ident && !detail::is_keyword(t.text)) {
      RawPtr r = make(Raw::Kind::Name, ts_.next());
      r->name = r->where.text;
      return r;
    }
    if (t.kind == Tok::LParen) {
      Token open = ts_.next();
      if (ts_.accept(Tok::RParen)) return make(Raw::Kind::Unit, open);
      RawPtr inner = expr();
      ts_.expect(Tok::RParen, "')'");
      return inner;
    }
    ts_.fail("expected an expression but found " + detail::describe(t));
  }

  TokenStream& ts_;
};

// ---- kinds and resolution ---------------------------------------------------

class Resolver {
 public:
  Resolver(ProgramParser& p, std::vector<std::string> events) : p_(p), events_(std::move(events)) {}

  Program run() {
    Program prog;
    prog.events = events_;
    for (const auto& d : p_.defs) {
      if (defs_.count(d.name) || is_event(d.name)) throw ParseError("'" + d.name + "' is defined twice", d.where.line, d.where.column);
      Sig sig;
      for (const auto& t : d.params) {
        if (p_.handles.count(t.text)) continue;
        sig.names.push_back(t.text);
        sig.kinds.push_back(std::nullopt);
      }
      defs_[d.name] = sig;
    }
    // Fixed point over the kind constraints.
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& d : p_.defs) {
        current_ = &d;
        changed |= infer(d.body, Want::Cont);
      }
      current_ = nullptr;
      changed |= infer(p_.main, Want::Cont);
    }
    for (const auto& d : p_.defs) {
      current_ = &d;
      Definition out;
      out.name = d.name;
      out.recursive = d.recursive;
      scope_.clear();
      const Sig& sig = defs_.at(d.name);
      for (std::size_t i = 0; i < sig.names.size(); ++i) {
        ProgParam param{fresh_symbol(sig.names[i]), sig.kinds[i].value_or(ProgParam::Kind::Int)};
        scope_[sig.names[i]] = param;
        out.params.push_back(param);
      }
      if (d.recursive) visible_.insert(d.name);
      out.body = to_expr(d.body);
      visible_.insert(d.name);
      prog.definitions.push_back(std::move(out));
    }
    current_ = nullptr;
    scope_.clear();
    prog.main = to_expr(p_.main);
    return prog;
  }

 private:
  enum class Want { Int, Cont };
  struct Sig {
    std::vector<std::string> names;
    std::vector<std::optional<ProgParam::Kind>> kinds;
  };

  [[noreturn]] static void fail(const Raw& r, const std::string& msg) { throw ParseError(msg, r.where.line, r.where.column); }

  bool is_event(const std::string& n) const { return std::find(events_.begin(), events_.end(), n) != events_.end(); }

  std::optional<ProgParam::Kind>* param_kind(const std::string& name) {
    if (!current_) return nullptr;
    Sig& sig = defs_.at(current_->name);
    for (std::size_t i = 0; i < sig.names.size(); ++i)
      if (sig.names[i] == name) return &sig.kinds[i];
    return nullptr;
  }

  bool set_kind(std::optional<ProgParam::Kind>* slot, ProgParam::Kind k, const Raw& where) {
    if (!*slot) {
      *slot = k;
      return true;
    }
    if (**slot != k) fail(where, "parameter used both as an integer and as a continuation");
    return false;
  }

  std::vector<RawPtr> call_args(const Raw& r) const {
    std::vector<RawPtr> out;
    for (const auto& a : r.items)
      if (!(a->kind == Raw::Kind::Name && p_.handles.count(a->name))) out.push_back(a);
    return out;
  }

  bool infer(const RawPtr& r, Want want) {
    using K = Raw::Kind;
    bool changed = false;
    switch (r->kind) {
      case K::Unit:
        if (want == Want::Int) fail(*r, "'()' used as an integer");
        return false;
      case K::Num:
        if (want == Want::Cont) fail(*r, "integer used as a continuation");
        return false;
      case K::Add:
      case K::Sub:
      case K::Neg:
        if (want == Want::Cont) fail(*r, "arithmetic used as a continuation");
        for (const auto& i : r->items) changed |= infer(i, Want::Int);
        return changed;
      case K::If:
        if (want == Want::Int) fail(*r, "conditional used as an integer");
        changed |= infer(r->items[0], Want::Int);
        changed |= infer(r->items[1], Want::Int);
        changed |= infer(r->items[2], Want::Cont);
        changed |= infer(r->items[3], Want::Cont);
        return changed;
      case K::Seq:
        if (want == Want::Int) fail(*r, "sequence used as an integer");
        changed |= infer(r->items[0], Want::Cont);
        changed |= infer(r->items[1], Want::Cont);
        return changed;
      case K::Event:
        if (want == Want::Int) fail(*r, "event used as an integer");
        for (const auto& i : r->items) changed |= infer(i, Want::Cont);
        return changed;
      case K::Name:
      case K::Call: {
        if (auto* slot = param_kind(r->name)) {
          if (r->kind == K::Call) fail(*r, "continuation parameter '" + r->name + "' cannot take arguments");
          return set_kind(slot, want == Want::Int ? ProgParam::Kind::Int : ProgParam::Kind::Cont, *r);
        }
        if (p_.handles.count(r->name)) fail(*r, "file handle '" + r->name + "' used as a value");
        auto args = r->kind == K::Call ? call_args(*r) : std::vector<RawPtr>{};
        if (want == Want::Int) fail(*r, "'" + r->name + "' used as an integer");
        if (is_event(r->name)) {
          if (args.size() > 1) fail(*r, "event '" + r->name + "' takes at most one continuation");
          for (const auto& a : args) changed |= infer(a, Want::Cont);
          return changed;
        }
        auto it = defs_.find(r->name);
        if (it == defs_.end()) fail(*r, "unknown function '" + r->name + "'");
        if (args.size() != it->second.names.size())
          fail(*r, "'" + r->name + "' expects " + std::to_string(it->second.names.size()) + " arguments, got " +
                       std::to_string(args.size()));
        for (std::size_t i = 0; i < args.size(); ++i) {
          auto& k = defs_.at(r->name).kinds[i];
          if (!k) {
            // Take the argument's obvious kind if it has one.
            auto guess = obvious_kind(*args[i]);
            if (guess) changed |= set_kind(&k, *guess, *args[i]);
          }
          if (k) changed |= infer(args[i], *k == ProgParam::Kind::Int ? Want::Int : Want::Cont);
        }
        return changed;
      }
    }
    return changed;
  }

  std::optional<ProgParam::Kind> obvious_kind(const Raw& r) {
    using K = Raw::Kind;
    switch (r.kind) {
      case K::Num:
      case K::Add:
      case K::Sub:
      case K::Neg: return ProgParam::Kind::Int;
      case K::Unit:
      case K::If:
      case K::Seq:
      case K::Event:
      case K::Call: return ProgParam::Kind::Cont;
      case K::Name:
        if (auto* slot = param_kind(r.name)) return *slot;
        if (is_event(r.name) || defs_.count(r.name)) return ProgParam::Kind::Cont;
        return std::nullopt;
    }
    return std::nullopt;
  }

  IntExprPtr to_int(const RawPtr& r) {
    using K = Raw::Kind;
    switch (r->kind) {
      case K::Num: return IntExpr::constant(r->value);
      case K::Add: return IntExpr::add(to_int(r->items[0]), to_int(r->items[1]));
      case K::Sub: return IntExpr::sub(to_int(r->items[0]), to_int(r->items[1]));
      case K::Neg: return IntExpr::neg(to_int(r->items[0]));
      case K::Name: {
        auto it = scope_.find(r->name);
        if (it == scope_.end() || it->second.kind != ProgParam::Kind::Int)
          fail(*r, "'" + r->name + "' is not an integer variable");
        return IntExpr::var(it->second.symbol);
      }
      default: fail(*r, "expected an integer expression");
    }
  }

  ProgExprPtr to_expr(const RawPtr& r) { return to_expr(r, nullptr); }

  // `rest` is the continuation supplied by an enclosing `;` sequence.
  ProgExprPtr to_expr(const RawPtr& r, ProgExprPtr rest) {
    using K = Raw::Kind;
    auto out = std::make_shared<ProgExpr>();
    auto unit = [] { return std::make_shared<ProgExpr>(); };
    switch (r->kind) {
      case K::Unit:
        if (rest) fail(*r, "'()' cannot be followed by more actions");
        return out;
      case K::If:
        if (rest) fail(*r, "a conditional must end a sequence");
        out->kind = ProgExpr::Kind::If;
        out->condition = Formula::atom(r->op, to_int(r->items[0]), to_int(r->items[1]));
        out->then_branch = to_expr(r->items[2]);
        out->else_branch = to_expr(r->items[3]);
        return out;
      case K::Seq: {
        ProgExprPtr tail = to_expr(r->items[1], rest);
        return to_expr(r->items[0], tail);
      }
      case K::Event:
        out->kind = ProgExpr::Kind::Event;
        out->name = r->name;
        if (!r->items.empty()) {
          if (rest) fail(*r, "event already has a continuation");
          out->continuation = to_expr(r->items[0]);
        } else {
          out->continuation = rest ? rest : unit();
        }
        return out;
      case K::Name:
      case K::Call: {
        auto args = r->kind == K::Call ? call_args(*r) : std::vector<RawPtr>{};
        if (is_event(r->name) && !scope_.count(r->name)) {
          out->kind = ProgExpr::Kind::Event;
          out->name = r->name;
          if (!args.empty()) {
            if (rest) fail(*r, "event already has a continuation");
            out->continuation = to_expr(args[0]);
          } else {
            out->continuation = rest ? rest : unit();
          }
          return out;
        }
        if (rest) fail(*r, "only events can be followed by ';'");
        out->kind = ProgExpr::Kind::Call;
        out->name = r->name;
        if (auto it = scope_.find(r->name); it != scope_.end()) {
          if (it->second.kind != ProgParam::Kind::Cont) fail(*r, "'" + r->name + "' is an integer, not a continuation");
          out->parameter = it->second.symbol;
          return out;
        }
        if (!visible_.count(r->name)) fail(*r, "'" + r->name + "' is not visible here (missing 'rec'?)");
        const Sig& sig = defs_.at(r->name);
        for (std::size_t i = 0; i < args.size(); ++i) {
          if (sig.kinds[i].value_or(ProgParam::Kind::Int) == ProgParam::Kind::Int) out->args.push_back(to_int(args[i]));
          else out->args.push_back(to_expr(args[i]));
        }
        return out;
      }
      default: fail(*r, "expected an action, call, conditional or ()");
    }
  }

  ProgramParser& p_;
  std::vector<std::string> events_;
  std::map<std::string, Sig> defs_;
  const RawDef* current_ = nullptr;
  std::map<std::string, ProgParam> scope_;
  std::set<std::string> visible_;
};

// ---- translation --------------------------------------------------------------

class Translator {
 public:
  Translator(const Program& p, Polarity polarity) : program_(p), polarity_(polarity) {}

  FormulaPtr run() {
    for (const auto& d : program_.definitions) terms_[d.name] = definition(d);
    return expr(*program_.main);
  }

 private:
  static TypePtr type_of(const Definition& d) {
    std::vector<TypePtr> args;
    for (const auto& p : d.params) args.push_back(p.kind == ProgParam::Kind::Int ? Type::integer() : Type::prop());
    return Type::arrows(args, Type::prop());
  }

  FormulaPtr definition(const Definition& d) {
    TypePtr type = type_of(d);
    Symbol self = fresh_symbol(d.name);
    if (d.recursive) self_[d.name] = {self, type};
    FormulaPtr body = expr(*d.body);
    self_.erase(d.name);
    for (std::size_t i = d.params.size(); i-- > 0;) {
      const auto& p = d.params[i];
      body = Formula::lambda(p.symbol, p.kind == ProgParam::Kind::Int ? Type::integer() : Type::prop(), body);
    }
    if (!d.recursive) return body;
    return Formula::fixpoint(polarity_ == Polarity::Mu ? Formula::Kind::Mu : Formula::Kind::Nu, self, type, body);
  }

  FormulaPtr expr(const ProgExpr& e) {
    switch (e.kind) {
      case ProgExpr::Kind::Unit: return Formula::diamond("end", Formula::tt());
      case ProgExpr::Kind::Event: return Formula::diamond(e.name, expr(*e.continuation));
      case ProgExpr::Kind::If: {
        const FormulaPtr& c = e.condition;
        FormulaPtr not_c = Formula::atom(complement(c->op()), c->int_lhs(), c->int_rhs());
        return Formula::conj(Formula::disj(not_c, expr(*e.then_branch)), Formula::disj(c, expr(*e.else_branch)));
      }
      case ProgExpr::Kind::Call: {
        if (e.parameter.id != 0) return Formula::var(e.parameter, Type::prop());
        FormulaPtr head;
        if (auto it = self_.find(e.name); it != self_.end()) {
          head = Formula::var(it->second.first, it->second.second);
        } else {
          head = terms_.at(e.name);
        }
        std::vector<Arg> args;
        for (const auto& a : e.args) {
          if (const auto* i = std::get_if<IntExprPtr>(&a)) args.push_back(*i);
          else args.push_back(expr(*std::get<ProgExprPtr>(a)));
        }
        return apply_all(head, args);
      }
    }
    throw Error("bad program expression");
  }

  const Program& program_;
  Polarity polarity_;
  std::map<std::string, FormulaPtr> terms_;
  std::map<std::string, std::pair<Symbol, TypePtr>> self_;
};

}  // namespace

Program parse_program(std::string_view text) {
  std::vector<std::string> events = {"read", "write", "close"};
  // The events header is line-oriented, so it is split off before tokenizing.
  std::size_t start = 0;
  std::string rest(text);
  int header_lines = 0;
  while (start < rest.size()) {
    std::size_t nl = rest.find('\n', start);
    std::string line = rest.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      if (nl == std::string::npos) break;
      start = nl + 1;
      ++header_lines;
      continue;
    }
    if (line.compare(first, 7, "events:") == 0) {
      auto toks = detail::tokenize(line.substr(first + 7));
      events.clear();
      for (const auto& t : toks) {
        if (t.kind == Tok::End) break;
        if (t.kind != Tok::Ident || detail::is_keyword(t.text))
          throw ParseError("event names must be identifiers", header_lines + 1, t.column + static_cast<int>(first) + 7);
        events.push_back(t.text);
      }
      // Blank the header but keep line numbers.
      rest.replace(start, line.size(), std::string(line.size(), ' '));
    }
    break;
  }
  TokenStream ts(detail::tokenize(rest));
  ProgramParser parser(ts);
  parser.program();
  return Resolver(parser, events).run();
}

FormulaPtr translate_program(const Program& program, Polarity polarity) {
  if (!program.main) throw Error("program has no main expression");
  return Translator(program, polarity).run();
}

}  // namespace hflz
