#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hflz::detail {

enum class Tok {
  Ident,
  Int,
  String,
  Or,
  And,
  Backslash,
  Le,
  Lt,
  Ge,
  Gt,
  Eq,
  Ne,
  Implies,  // =>
  Arrow,    // ->
  Plus,
  Minus,
  Star,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Colon,
  Semi,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int column = 1;
};

/// Splits `text` into tokens; '#' starts a comment that runs to end of line.
/// Identifiers are [A-Za-z_][A-Za-z0-9_]* followed by any number of primes.
std::vector<Token> tokenize(std::string_view text);

std::string describe(const Token& token);

/// Cursor over a token vector with error helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at(Tok kind, std::size_t ahead = 0) const { return peek(ahead).kind == kind; }
  bool at_keyword(std::string_view word, std::size_t ahead = 0) const;
  bool accept(Tok kind);
  bool accept_keyword(std::string_view word);
  const Token& expect(Tok kind, std::string_view what);
  void expect_keyword(std::string_view word);
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& token, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

bool is_keyword(std::string_view word);

}  // namespace hflz::detail
