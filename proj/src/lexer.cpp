// Copyright 2026 The pqdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#include "pqdyn/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace pqdyn {

namespace {

const std::unordered_map<std::string, Tok>& keywords() {
  static const std::unordered_map<std::string, Tok> kw = {
      {"let", Tok::KwLet},         {"in", Tok::KwIn},
      {"if", Tok::KwIf},           {"then", Tok::KwThen},
      {"else", Tok::KwElse},       {"case", Tok::KwCase},
      {"of", Tok::KwOf},           {"box", Tok::KwBox},
      {"lift", Tok::KwLift},       {"force", Tok::KwForce},
      {"apply", Tok::KwApply},     {"dynlift", Tok::KwDynlift},
      {"True", Tok::KwTrue},       {"False", Tok::KwFalse},
      {"Nothing", Tok::KwNothing}, {"Just", Tok::KwJust},
      {"Z", Tok::KwZ},             {"S", Tok::KwS},
      {"Unit", Tok::KwUnit},       {"Qubit", Tok::KwQubit},
      {"Bit", Tok::KwBit},         {"Bool", Tok::KwBool},
      {"Nat", Tok::KwNat},         {"Circ", Tok::KwCirc},
      {"Maybe", Tok::KwMaybe},
  };
  return kw;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> lex(const std::string& source,
                       const std::string& filename) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1;
  int col = 1;
  int prev_line = 0;

  auto here = [&](int len) {
    Span sp;
    sp.file = filename;
    sp.line = line;
    sp.col = col;
    sp.end_line = line;
    sp.end_col = col + len;
    return sp;
  };
  auto push = [&](Tok k, std::string text, Span sp) {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.span = std::move(sp);
    t.first_on_line = line != prev_line;
    prev_line = line;
    out.push_back(std::move(t));
  };
  auto advance = [&](size_t n) {
    i += n;
    col += static_cast<int>(n);
  };

  while (i < source.size()) {
    char c = source[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '\t') {
      throw Error(ErrKind::Syntax, here(1),
                  "tab characters are not allowed; indent with spaces");
    }
    if (c == '-' && i + 1 < source.size() && source[i + 1] == '-') {
      while (i < source.size() && source[i] != '\n') ++i;
      continue;
    }
    if (ident_start(c)) {
      size_t j = i + 1;
      while (j < source.size() && ident_char(source[j])) ++j;
      std::string word = source.substr(i, j - i);
      Span sp = here(static_cast<int>(word.size()));
      auto kw = keywords().find(word);
      push(kw == keywords().end() ? Tok::Ident : kw->second, word, sp);
      advance(word.size());
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i + 1;
      while (j < source.size() &&
             std::isdigit(static_cast<unsigned char>(source[j]))) {
        ++j;
      }
      std::string digits = source.substr(i, j - i);
      push(Tok::Number, digits, here(static_cast<int>(digits.size())));
      advance(digits.size());
      continue;
    }

    auto two = [&](size_t off) {
      return i + off < source.size() ? source[i + off] : '\0';
    };
    // `!` and `-o` take an optional `_0`/`_1` suffix.
    auto suffixed = [&](size_t base, Tok plain, Tok zero, Tok one) {
      if (two(base) == '_' && (two(base + 1) == '0' || two(base + 1) == '1')) {
        bool is_one = two(base + 1) == '1';
        std::string text = source.substr(i, base + 2);
        push(is_one ? one : zero, text, here(static_cast<int>(base + 2)));
        advance(base + 2);
      } else {
        push(plain, source.substr(i, base), here(static_cast<int>(base)));
        advance(base);
      }
    };

    switch (c) {
      case '(':
        push(Tok::LParen, "(", here(1));
        advance(1);
        continue;
      case ')':
        push(Tok::RParen, ")", here(1));
        advance(1);
        continue;
      case ',':
        push(Tok::Comma, ",", here(1));
        advance(1);
        continue;
      case ':':
        push(Tok::Colon, ":", here(1));
        advance(1);
        continue;
      case '=':
        push(Tok::Equals, "=", here(1));
        advance(1);
        continue;
      case '_':
        push(Tok::Underscore, "_", here(1));
        advance(1);
        continue;
      case '\\':
        push(Tok::Backslash, "\\", here(1));
        advance(1);
        continue;
      case '*':
        push(Tok::Star, "*", here(1));
        advance(1);
        continue;
      case '!':
        suffixed(1, Tok::Bang, Tok::BangZero, Tok::BangOne);
        continue;
      case '-':
        if (two(1) == '>') {
          push(Tok::Arrow, "->", here(2));
          advance(2);
          continue;
        }
        if (two(1) == 'o') {
          suffixed(2, Tok::Lolli, Tok::LolliZero, Tok::LolliOne);
          continue;
        }
        throw Error(ErrKind::Syntax, here(1),
                    "expected '->', '-o', or a '--' comment after '-'");
      case '|':
        if (two(1) == '|') {
          push(Tok::OrOr, "||", here(2));
          advance(2);
          continue;
        }
        throw Error(ErrKind::Syntax, here(1), "single '|' is not a token");
      default:
        throw Error(ErrKind::Syntax, here(1),
                    std::string("unexpected character '") + c + "'");
    }
  }

  Token eof;
  eof.kind = Tok::Eof;
  eof.text = "";
  eof.span = here(0);
  eof.first_on_line = true;
  out.push_back(std::move(eof));
  return out;
}

}  // namespace pqdyn
