#pragma once

// Shared tokenizer for the rule, problem and session formats.

#include <string>
#include <string_view>
#include <vector>

#include "geoproof/errors.hpp"

namespace geoproof::detail {

struct Token {
  enum class Kind { Name, Int, String, Punct, End };
  Kind kind;
  std::string text;  // unescaped for strings
  int line;
  int col;
};

std::vector<Token> tokenize(std::string_view text);

// Cursor over a token vector with the expect/accept helpers the parsers use.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool is_punct(char c, std::size_t ahead = 0) const;
  bool is_name(std::string_view word, std::size_t ahead = 0) const;
  // NAME followed by ':'
  bool is_label(std::string_view word) const { return is_name(word) && is_punct(':', 1); }

  void expect_punct(char c);
  void expect_name(std::string_view word);
  void expect_label(std::string_view word);
  std::string expect_identifier(std::string_view what);
  int expect_int(std::string_view what);
  std::string expect_string(std::string_view what);

  [[noreturn]] void fail(const Token& at, const std::string& msg) const;
  [[noreturn]] void fail(const std::string& msg) const { fail(peek(), msg); }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& t);

}  // namespace geoproof::detail
