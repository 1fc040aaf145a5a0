#pragma once

// Tokenizer shared by the three text formats. Internal header.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mspe/errors.hpp"

namespace mspe::detail {

enum class TokenKind { identifier, number, symbol, arrow, end };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

struct Lexed {
  std::vector<Token> tokens;
  /// Bodies of `#@` comments, e.g. "origin termination".
  std::vector<std::string> pragmas;
};

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

inline Lexed tokenize(std::string_view text) {
  Lexed out;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k, ++i) {
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
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      std::size_t end = text.find('\n', i);
      if (end == std::string_view::npos) end = text.size();
      if (i + 1 < text.size() && text[i + 1] == '@') {
        std::string body(text.substr(i + 2, end - i - 2));
        while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
        out.pragmas.push_back(body);
      }
      advance(end - i);
      continue;
    }
    const std::size_t start_line = line;
    const std::size_t start_column = column;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      out.tokens.push_back({TokenKind::identifier, std::string(text.substr(i, j - i)), start_line, start_column});
      advance(j - i);
      continue;
    }
    if (c == '[') {
      std::size_t j = text.find(']', i);
      if (j == std::string_view::npos) throw ParseError("unterminated bracketed name", start_line, start_column);
      std::string_view name = text.substr(i, j - i + 1);
      if (name.find('\n') != std::string_view::npos) {
        throw ParseError("bracketed name spans a line break", start_line, start_column);
      }
      out.tokens.push_back({TokenKind::identifier, std::string(name), start_line, start_column});
      advance(j - i + 1);
      continue;
    }
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
      }
      out.tokens.push_back({TokenKind::number, std::string(text.substr(i, j - i)), start_line, start_column});
      advance(j - i);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.tokens.push_back({TokenKind::arrow, "->", start_line, start_column});
      advance(2);
      continue;
    }
    if (std::string_view("=+*/^;-").find(c) != std::string_view::npos) {
      out.tokens.push_back({TokenKind::symbol, std::string(1, c), start_line, start_column});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start_line, start_column);
  }
  out.tokens.push_back({TokenKind::end, "", line, column});
  return out;
}

/// Cursor over a token list with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(const std::vector<Token>& tokens) : tokens_(tokens) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::end; }

  bool accept_symbol(char c) {
    if (peek().kind == TokenKind::symbol && peek().text[0] == c) {
      next();
      return true;
    }
    return false;
  }

  const Token& expect_symbol(char c) {
    if (peek().kind != TokenKind::symbol || peek().text[0] != c) fail(std::string("expected '") + c + "'");
    return next();
  }

  const Token& expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(message + ", found " + found, t.line, t.column);
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

}  // namespace mspe::detail
