#include <algorithm>
#include <map>

#include "hflz/error.hpp"
#include "hflz/parser.hpp"
#include "hflz/transforms.hpp"
#include "lexer.hpp"

namespace hflz {

namespace {

void linearize(const IntExprPtr& e, std::int64_t sign, std::map<std::uint64_t, std::int64_t>& coeff,
               std::int64_t& constant) {
  switch (e->kind()) {
    case IntExpr::Kind::Const: constant += sign * e->value(); break;
    case IntExpr::Kind::Var: coeff[e->symbol().id] += sign; break;
    case IntExpr::Kind::Add:
      linearize(e->lhs(), sign, coeff, constant);
      linearize(e->rhs(), sign, coeff, constant);
      break;
    case IntExpr::Kind::Sub:
      linearize(e->lhs(), sign, coeff, constant);
      linearize(e->rhs(), -sign, coeff, constant);
      break;
    case IntExpr::Kind::Neg: linearize(e->lhs(), -sign, coeff, constant); break;
  }
}

BoundExpr::Piece parse_piece(const std::vector<detail::Token>& toks) {
  std::vector<TypedSymbol> env;
  std::string text;
  for (const auto& t : toks) {
    if (t.kind == detail::Tok::Ident &&
        std::none_of(env.begin(), env.end(), [&](const TypedSymbol& s) { return s.symbol.name == t.text; }))
      env.push_back({fresh_symbol(t.text), Type::integer()});
    text += (t.kind == detail::Tok::Int ? std::to_string(t.value) : t.text) + " ";
  }
  if (toks.empty()) throw ParseError("empty bound piece", 1, 1);
  IntExprPtr e = parse_int_expr(text, env);
  std::map<std::uint64_t, std::int64_t> coeff;
  BoundExpr::Piece piece;
  linearize(e, 1, coeff, piece.constant);
  for (const auto& s : env)
    if (auto c = coeff[s.symbol.id]; c != 0) piece.coefficients.emplace_back(s.symbol.name, c);
  return piece;
}

std::string piece_text(const BoundExpr::Piece& p) {
  std::string out;
  for (const auto& [name, c] : p.coefficients) {
    std::int64_t mag = c < 0 ? -c : c;
    std::string term = mag == 1 ? name : std::to_string(mag) + " * " + name;
    if (out.empty()) out = c < 0 ? "-" + term : term;
    else out += (c < 0 ? " - " : " + ") + term;
  }
  if (out.empty()) return std::to_string(p.constant);
  if (p.constant > 0) out += " + " + std::to_string(p.constant);
  if (p.constant < 0) out += " - " + std::to_string(-p.constant);
  return out;
}

}  // namespace

BoundExpr BoundExpr::constant(std::int64_t n) {
  BoundExpr b;
  b.pieces.push_back(Piece{{}, n});
  return b;
}

bool BoundExpr::is_constant() const {
  return std::all_of(pieces.begin(), pieces.end(), [](const Piece& p) { return p.coefficients.empty(); });
}

std::string BoundExpr::str() const {
  if (pieces.size() == 1) return piece_text(pieces[0]);
  std::string out = "max(";
  for (std::size_t i = 0; i < pieces.size(); ++i) out += (i ? ", " : "") + piece_text(pieces[i]);
  return out + ")";
}

BoundExpr parse_bound_expr(std::string_view text) {
  auto toks = detail::tokenize(text);
  if (!toks.empty() && toks.back().kind == detail::Tok::End) toks.pop_back();
  BoundExpr out;
  bool is_max = toks.size() >= 3 && toks[0].kind == detail::Tok::Ident && toks[0].text == "max" &&
                toks[1].kind == detail::Tok::LParen;
  if (!is_max) {
    out.pieces.push_back(parse_piece(toks));
    return out;
  }
  if (toks.back().kind != detail::Tok::RParen)
    throw ParseError("expected ')' at the end of max(...)", toks.back().line, toks.back().column);
  std::vector<detail::Token> cur;
  int depth = 0;
  for (std::size_t i = 2; i + 1 < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.kind == detail::Tok::LParen) ++depth;
    if (t.kind == detail::Tok::RParen) --depth;
    if (t.kind == detail::Tok::Comma && depth == 0) {
      out.pieces.push_back(parse_piece(cur));
      cur.clear();
      continue;
    }
    cur.push_back(t);
  }
  out.pieces.push_back(parse_piece(cur));
  return out;
}

std::vector<BoundExpr> bound_schedule(std::int64_t cap) {
  if (cap < 1) throw Error("bound cap must be positive");
  std::vector<BoundExpr> out;
  std::int64_t n = 1;
  for (; n <= cap; n *= 2) out.push_back(BoundExpr::constant(n));
  if (out.back().pieces[0].constant != cap) out.push_back(BoundExpr::constant(cap));
  return out;
}

}  // namespace hflz
