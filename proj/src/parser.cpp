#include "hflz/parser.hpp"
#include "hflz/typecheck.hpp"

#include <cstdlib>

#include "hflz/error.hpp"
#include "hflz/rewrite.hpp"
#include "parser_impl.hpp"

namespace hflz {

namespace detail {

namespace {

bool is_cmp(Tok k) {
  return k == Tok::Le || k == Tok::Lt || k == Tok::Eq || k == Tok::Ne || k == Tok::Ge || k == Tok::Gt;
}

CmpOp cmp_of(Tok k) {
  switch (k) {
    case Tok::Le: return CmpOp::Le;
    case Tok::Lt: return CmpOp::Lt;
    case Tok::Eq: return CmpOp::Eq;
    case Tok::Ne: return CmpOp::Ne;
    case Tok::Ge: return CmpOp::Ge;
    default: return CmpOp::Gt;
  }
}

constexpr std::int64_t kMaxCoefficient = 64;

IntExprPtr scale(const IntExprPtr& e, std::int64_t k) {
  if (k == 0) return IntExpr::constant(0);
  std::int64_t n = std::llabs(k);
  IntExprPtr acc = e;
  for (std::int64_t i = 1; i < n; ++i) acc = IntExpr::add(acc, e);
  return k < 0 ? IntExpr::neg(acc) : acc;
}

}  // namespace

const TypedSymbol* FormulaParser::lookup(const std::string& name) const {
  for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
    if (it->symbol.name == name) return &*it;
  return nullptr;
}

FormulaPtr FormulaParser::as_formula(Term t, const Token& where) const {
  if (auto* f = std::get_if<FormulaPtr>(&t)) return *f;
  ts_.fail_at(where, "expected a formula but found an integer expression");
}

IntExprPtr FormulaParser::as_int(Term t, const Token& where) const {
  if (auto* e = std::get_if<IntExprPtr>(&t)) return *e;
  ts_.fail_at(where, "expected an integer expression but found a formula");
}

Term FormulaParser::term() { return implies(); }

FormulaPtr FormulaParser::formula() {
  Token start = ts_.peek();
  return as_formula(term(), start);
}

IntExprPtr FormulaParser::int_expr() {
  Token start = ts_.peek();
  return as_int(additive(), start);
}

Term FormulaParser::implies() {
  Token start = ts_.peek();
  Term lhs = disjunction();
  if (!ts_.at(Tok::Implies)) return lhs;
  ts_.next();
  Token rstart = ts_.peek();
  Term rhs = implies();
  return Formula::disj(dualize(as_formula(lhs, start)), as_formula(rhs, rstart));
}

Term FormulaParser::disjunction() {
  Token start = ts_.peek();
  Term lhs = conjunction();
  while (ts_.at(Tok::Or)) {
    ts_.next();
    Token rstart = ts_.peek();
    Term rhs = conjunction();
    lhs = Formula::disj(as_formula(lhs, start), as_formula(rhs, rstart));
  }
  return lhs;
}

Term FormulaParser::conjunction() {
  Token start = ts_.peek();
  Term lhs = comparison();
  while (ts_.at(Tok::And)) {
    ts_.next();
    Token rstart = ts_.peek();
    Term rhs = comparison();
    lhs = Formula::conj(as_formula(lhs, start), as_formula(rhs, rstart));
  }
  return lhs;
}

Term FormulaParser::comparison() {
  Token start = ts_.peek();
  Term lhs = additive();
  if (!is_cmp(ts_.peek().kind)) return lhs;
  // Chains such as `y = z = 0` read as `y = z /\ z = 0`.
  IntExprPtr left = as_int(lhs, start);
  FormulaPtr result;
  while (is_cmp(ts_.peek().kind)) {
    CmpOp op = cmp_of(ts_.next().kind);
    Token rstart = ts_.peek();
    IntExprPtr right = as_int(additive(), rstart);
    FormulaPtr a = Formula::atom(op, left, right);
    result = result ? Formula::conj(result, a) : a;
    left = right;
  }
  return result;
}

Term FormulaParser::additive() {
  Token start = ts_.peek();
  Term lhs = multiplicative();
  while (ts_.at(Tok::Plus) || ts_.at(Tok::Minus)) {
    bool plus = ts_.next().kind == Tok::Plus;
    Token rstart = ts_.peek();
    Term rhs = multiplicative();
    IntExprPtr a = as_int(lhs, start);
    IntExprPtr b = as_int(rhs, rstart);
    lhs = plus ? IntExpr::add(a, b) : IntExpr::sub(a, b);
  }
  return lhs;
}

Term FormulaParser::multiplicative() {
  Token start = ts_.peek();
  Term lhs = unary();
  while (ts_.at(Tok::Star)) {
    Token op = ts_.next();
    Token rstart = ts_.peek();
    Term rhs = unary();
    IntExprPtr a = as_int(lhs, start);
    IntExprPtr b = as_int(rhs, rstart);
    bool ca = a->kind() == IntExpr::Kind::Const;
    bool cb = b->kind() == IntExpr::Kind::Const;
    if (!ca && !cb)
      ts_.fail_at(op,
                  "multiplication of two non-constant expressions is not linear; encode it with a "
                  "ternary predicate such as mult(x, y, z)");
    std::int64_t k = ca ? a->value() : b->value();
    if (ca && cb) {
      lhs = IntExpr::constant(a->value() * b->value());
      continue;
    }
    if (std::llabs(k) > kMaxCoefficient) ts_.fail_at(op, "coefficient too large (limit 64)");
    lhs = scale(ca ? b : a, k);
  }
  return lhs;
}

Term FormulaParser::unary() {
  const Token& t = ts_.peek();
  if (t.kind == Tok::Minus) {
    ts_.next();
    Token start = ts_.peek();
    return IntExpr::neg(as_int(unary(), start));
  }
  if (t.kind == Tok::Lt && ts_.at(Tok::Ident, 1) && ts_.at(Tok::Gt, 2)) {
    ts_.next();
    std::string label = ts_.next().text;
    ts_.next();
    Token start = ts_.peek();
    return Formula::diamond(label, as_formula(unary(), start));
  }
  if (t.kind == Tok::LBracket) {
    ts_.next();
    std::string label = ts_.expect(Tok::Ident, "action label").text;
    ts_.expect(Tok::RBracket, "']'");
    Token start = ts_.peek();
    return Formula::box(label, as_formula(unary(), start));
  }
  if (t.kind == Tok::Backslash || ts_.at_keyword("mu") || ts_.at_keyword("nu") || ts_.at_keyword("exists") ||
      ts_.at_keyword("forall"))
    return binder();
  return application();
}

bool FormulaParser::starts_argument() const {
  const Token& t = ts_.peek();
  if (t.kind == Tok::Int || t.kind == Tok::LParen) return true;
  if (t.kind != Tok::Ident) return false;
  if (t.text == "true" || t.text == "false") return true;
  return !is_keyword(t.text);
}

void FormulaParser::arguments(std::vector<Term>& out) {
  if (ts_.at(Tok::LParen)) {
    ts_.next();
    out.push_back(term());
    while (ts_.accept(Tok::Comma)) out.push_back(term());
    ts_.expect(Tok::RParen, "')'");
    return;
  }
  out.push_back(primary());
}

Term FormulaParser::application() {
  Token start = ts_.peek();
  Term head = primary();
  if (!std::holds_alternative<FormulaPtr>(head)) return head;
  FormulaPtr f = std::get<FormulaPtr>(head);
  while (starts_argument()) {
    std::vector<Term> args;
    arguments(args);
    for (auto& a : args) {
      if (auto* e = std::get_if<IntExprPtr>(&a)) f = Formula::app(f, *e);
      else f = Formula::app(f, std::get<FormulaPtr>(a));
    }
  }
  return f;
}

Term FormulaParser::primary() {
  const Token& t = ts_.peek();
  switch (t.kind) {
    case Tok::Int: {
      std::int64_t v = ts_.next().value;
      return IntExpr::constant(v);
    }
    case Tok::LParen: {
      ts_.next();
      Term inner = term();
      if (ts_.at(Tok::Comma)) ts_.fail("tuple is only allowed as an application argument");
      ts_.expect(Tok::RParen, "')'");
      return inner;
    }
    case Tok::Ident: {
      if (t.text == "true") {
        ts_.next();
        return Formula::tt();
      }
      if (t.text == "false") {
        ts_.next();
        return Formula::ff();
      }
      if (is_keyword(t.text)) ts_.fail("unexpected keyword '" + t.text + "'");
      const TypedSymbol* s = lookup(t.text);
      if (!s) ts_.fail("unbound variable '" + t.text + "'");
      Token tok = ts_.next();
      if (s->type->is_int()) return IntExpr::var(s->symbol);
      return Formula::var(s->symbol, s->type);
    }
    default:
      ts_.fail("unexpected " + describe(t));
  }
}

std::vector<IntExprPtr> FormulaParser::lower_bounds() {
  std::vector<IntExprPtr> out;
  if (ts_.at_keyword("max") && ts_.at(Tok::LParen, 1)) {
    ts_.next();
    ts_.next();
    out.push_back(int_expr());
    while (ts_.accept(Tok::Comma)) out.push_back(int_expr());
    ts_.expect(Tok::RParen, "')'");
    return out;
  }
  out.push_back(int_expr());
  return out;
}

Term FormulaParser::binder() {
  Token kw = ts_.next();
  if (kw.kind == Tok::Backslash) {
    std::vector<TypedSymbol> params;
    auto param = [&] {
      const Token& name = ts_.expect(Tok::Ident, "parameter name");
      if (!ts_.accept(Tok::Colon)) ts_.fail_at(name, "type annotation missing on binder '" + name.text + "'");
      TypePtr ty = type();
      params.push_back({fresh_symbol(name.text), ty});
    };
    if (ts_.accept(Tok::LParen)) {
      param();
      while (ts_.accept(Tok::Comma)) param();
      ts_.expect(Tok::RParen, "')'");
    } else {
      param();
    }
    ts_.expect(Tok::Dot, "'.'");
    for (auto& p : params) push(p);
    FormulaPtr body = formula();
    for (std::size_t i = 0; i < params.size(); ++i) pop();
    for (auto it = params.rbegin(); it != params.rend(); ++it) body = Formula::lambda(it->symbol, it->type, body);
    return body;
  }
  if (kw.text == "mu" || kw.text == "nu") {
    const Token& name = ts_.expect(Tok::Ident, "fixpoint variable");
    std::string n = name.text;
    if (!ts_.accept(Tok::Colon)) ts_.fail_at(name, "type annotation missing on binder '" + n + "'");
    TypePtr ty = type();
    if (ty->is_int()) ts_.fail_at(name, "fixpoint binder '" + n + "' must have a predicate type, not int");
    ts_.expect(Tok::Dot, "'.'");
    Symbol sym = fresh_symbol(n);
    push({sym, ty});
    FormulaPtr body = formula();
    pop();
    return Formula::fixpoint(kw.text == "mu" ? Formula::Kind::Mu : Formula::Kind::Nu, sym, ty, body);
  }
  // exists / forall
  std::vector<Symbol> vars;
  vars.push_back(fresh_symbol(ts_.expect(Tok::Ident, "quantified variable").text));
  while (ts_.accept(Tok::Comma)) vars.push_back(fresh_symbol(ts_.expect(Tok::Ident, "quantified variable").text));
  if (ts_.accept(Tok::Colon)) {
    TypePtr ty = type();
    if (!ty->is_int()) ts_.fail("quantifiers range over integers only");
  }
  std::vector<IntExprPtr> bounds;
  if (ts_.at(Tok::Ge)) {
    if (vars.size() != 1) ts_.fail("a lower bound needs a single quantified variable");
    ts_.next();
    bounds = lower_bounds();
  }
  ts_.expect(Tok::Dot, "'.'");
  for (auto& v : vars) push({v, Type::integer()});
  FormulaPtr body = formula();
  for (std::size_t i = 0; i < vars.size(); ++i) pop();
  auto kind = kw.text == "exists" ? Formula::Kind::Exists : Formula::Kind::Forall;
  for (std::size_t i = vars.size(); i-- > 0;)
    body = Formula::quantifier(kind, vars[i], i + 1 == vars.size() ? bounds : std::vector<IntExprPtr>{}, body);
  return body;
}

TypePtr FormulaParser::atomic_type() {
  if (ts_.accept_keyword("prop")) return Type::prop();
  if (ts_.accept_keyword("int")) return Type::integer();
  if (ts_.accept(Tok::LParen)) {
    TypePtr t = type();
    ts_.expect(Tok::RParen, "')'");
    return t;
  }
  ts_.fail("expected a type, found " + describe(ts_.peek()));
}

TypePtr FormulaParser::type() {
  Token start = ts_.peek();
  TypePtr lhs = atomic_type();
  if (!ts_.accept(Tok::Arrow)) return lhs;
  TypePtr rhs = type();
  if (rhs->is_int()) ts_.fail_at(start, "a predicate type cannot end in int");
  return Type::arrow(lhs, rhs);
}

}  // namespace detail

FormulaPtr parse_formula(std::string_view text, const std::vector<TypedSymbol>& env) {
  detail::TokenStream ts(detail::tokenize(text));
  detail::FormulaParser p(ts, env);
  FormulaPtr f = p.formula();
  if (!ts.at(detail::Tok::End)) ts.fail("unexpected " + detail::describe(ts.peek()) + " after formula");
  typecheck(f, env);
  return f;
}

IntExprPtr parse_int_expr(std::string_view text, const std::vector<TypedSymbol>& env) {
  detail::TokenStream ts(detail::tokenize(text));
  detail::FormulaParser p(ts, env);
  IntExprPtr e = p.int_expr();
  if (!ts.at(detail::Tok::End)) ts.fail("unexpected " + detail::describe(ts.peek()) + " after expression");
  return e;
}

TypePtr parse_type(std::string_view text) {
  detail::TokenStream ts(detail::tokenize(text));
  detail::FormulaParser p(ts, {});
  TypePtr t = p.type();
  if (!ts.at(detail::Tok::End)) ts.fail("unexpected " + detail::describe(ts.peek()) + " after type");
  return t;
}

}  // namespace hflz
