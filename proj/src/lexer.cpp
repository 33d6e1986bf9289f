#include "lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>

#include "hflz/error.hpp"

namespace hflz::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

bool is_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 16> keywords = {
      "true", "false", "mu", "nu", "exists", "forall", "prop", "int",
      "let",  "rec",   "in", "if", "then",   "else",   "event", "main"};
  for (auto k : keywords)
    if (k == word) return true;
  return false;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = column;
    std::size_t start = i;

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      while (j < text.size() && text[j] == '\'') ++j;
      tok.kind = Tok::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Tok::Int;
      tok.text = std::string(text.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + j, tok.value);
      if (ec != std::errc()) throw ParseError("integer literal out of range: " + tok.text, line, column);
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"') throw ParseError("unterminated string literal", line, column);
      tok.kind = Tok::String;
      tok.text = std::string(text.substr(i + 1, j - i - 1));
      advance(j + 1 - i);
      out.push_back(std::move(tok));
      continue;
    }

    auto two = text.substr(i, 2);
    std::size_t len = 2;
    if (two == "\\/") tok.kind = Tok::Or;
    else if (two == "/\\") tok.kind = Tok::And;
    else if (two == "<=") tok.kind = Tok::Le;
    else if (two == ">=") tok.kind = Tok::Ge;
    else if (two == "!=") tok.kind = Tok::Ne;
    else if (two == "=>") tok.kind = Tok::Implies;
    else if (two == "->") tok.kind = Tok::Arrow;
    else {
      len = 1;
      switch (c) {
        case '\\': tok.kind = Tok::Backslash; break;
        case '<': tok.kind = Tok::Lt; break;
        case '>': tok.kind = Tok::Gt; break;
        case '=': tok.kind = Tok::Eq; break;
        case '+': tok.kind = Tok::Plus; break;
        case '-': tok.kind = Tok::Minus; break;
        case '*': tok.kind = Tok::Star; break;
        case '(': tok.kind = Tok::LParen; break;
        case ')': tok.kind = Tok::RParen; break;
        case '[': tok.kind = Tok::LBracket; break;
        case ']': tok.kind = Tok::RBracket; break;
        case ',': tok.kind = Tok::Comma; break;
        case '.': tok.kind = Tok::Dot; break;
        case ':': tok.kind = Tok::Colon; break;
        case ';': tok.kind = Tok::Semi; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, column);
      }
    }
    tok.text = std::string(text.substr(start, len));
    advance(len);
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "'" + token.text + "'";
    case Tok::Int: return "integer " + token.text;
    case Tok::String: return "string \"" + token.text + "\"";
    default: return "'" + token.text + "'";
  }
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t k = pos_ + ahead;
  if (k >= tokens_.size()) return tokens_.back();
  return tokens_[k];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::at_keyword(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Tok::Ident && t.text == word;
}

bool TokenStream::accept(Tok kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

bool TokenStream::accept_keyword(std::string_view word) {
  if (!at_keyword(word)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(Tok kind, std::string_view what) {
  if (!at(kind)) fail("expected " + std::string(what) + ", found " + describe(peek()));
  return next();
}

void TokenStream::expect_keyword(std::string_view word) {
  if (!at_keyword(word)) fail("expected '" + std::string(word) + "', found " + describe(peek()));
  next();
}

void TokenStream::fail(const std::string& message) const { fail_at(peek(), message); }

void TokenStream::fail_at(const Token& token, const std::string& message) const {
  throw ParseError(message, token.line, token.column);
}

}  // namespace hflz::detail
