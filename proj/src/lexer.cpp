#include "lexer.hpp"

#include "geoproof/model.hpp"

namespace geoproof::detail {

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    const int tl = line;
    const int tc = col;
    if (is_alpha(c) || c == '_') {
      std::string word;
      while (i < text.size() && (is_alpha(text[i]) || is_digit(text[i]) || text[i] == '_')) {
        word += text[i];
        advance();
      }
      out.push_back({Token::Kind::Name, std::move(word), tl, tc});
    } else if (is_digit(c)) {
      std::string num;
      while (i < text.size() && is_digit(text[i])) {
        num += text[i];
        advance();
      }
      out.push_back({Token::Kind::Int, std::move(num), tl, tc});
    } else if (c == '"') {
      advance();
      std::string s;
      bool closed = false;
      while (i < text.size()) {
        char d = text[i];
        if (d == '\n') break;
        if (d == '"') {
          advance();
          closed = true;
          break;
        }
        if (d == '\\' && i + 1 < text.size()) {
          advance();
          d = text[i];
          if (d == 'n') d = '\n';
        }
        s += d;
        advance();
      }
      if (!closed) throw SyntaxError(tl, tc, "unterminated string");
      out.push_back({Token::Kind::String, std::move(s), tl, tc});
    } else if (std::string_view("(){}[],;:/?=<>!.-").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), tl, tc});
      advance();
    } else {
      throw SyntaxError(tl, tc, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::End, "", line, col});
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::End:
      return "end of input";
    case Token::Kind::String:
      return "string \"" + t.text + "\"";
    default:
      return "'" + t.text + "'";
  }
}

const Token& TokenStream::peek(std::size_t ahead) const {
  const std::size_t at = pos_ + ahead;
  return at < tokens_.size() ? tokens_[at] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenStream::is_punct(char c, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Kind::Punct && t.text[0] == c;
}

bool TokenStream::is_name(std::string_view word, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Kind::Name && t.text == word;
}

void TokenStream::expect_punct(char c) {
  if (!is_punct(c)) fail(std::string("expected '") + c + "', found " + describe(peek()));
  next();
}

void TokenStream::expect_name(std::string_view word) {
  if (!is_name(word)) fail("expected '" + std::string(word) + "', found " + describe(peek()));
  next();
}

void TokenStream::expect_label(std::string_view word) {
  if (!is_label(word)) fail("expected '" + std::string(word) + ":', found " + describe(peek()));
  next();
  next();
}

std::string TokenStream::expect_identifier(std::string_view what) {
  const Token& t = peek();
  if (t.kind != Token::Kind::Name || !is_identifier(t.text)) {
    fail("expected " + std::string(what) + ", found " + describe(t));
  }
  return next().text;
}

int TokenStream::expect_int(std::string_view what) {
  const Token& t = peek();
  if (t.kind != Token::Kind::Int || t.text.size() > 9) {
    fail("expected " + std::string(what) + ", found " + describe(t));
  }
  return std::stoi(next().text);
}

std::string TokenStream::expect_string(std::string_view what) {
  const Token& t = peek();
  if (t.kind != Token::Kind::String) fail("expected " + std::string(what) + ", found " + describe(t));
  return next().text;
}

void TokenStream::fail(const Token& at, const std::string& msg) const {
  throw SyntaxError(at.line, at.col, msg);
}

}  // namespace geoproof::detail
