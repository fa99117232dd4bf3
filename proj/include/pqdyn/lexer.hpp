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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pqdyn/span.hpp"

namespace pqdyn {

enum class Tok : uint8_t {
  Ident,
  Number,
  // keywords
  KwLet,
  KwIn,
  KwIf,
  KwThen,
  KwElse,
  KwCase,
  KwOf,
  KwBox,
  KwLift,
  KwForce,
  KwApply,
  KwDynlift,
  KwTrue,
  KwFalse,
  KwNothing,
  KwJust,
  KwZ,
  KwS,
  KwUnit,
  KwQubit,
  KwBit,
  KwBool,
  KwNat,
  KwCirc,
  KwMaybe,
  // punctuation
  LParen,
  RParen,
  Comma,
  Colon,
  Equals,
  Underscore,
  Backslash,
  Star,
  Arrow,      // ->
  Lolli,      // -o
  LolliZero,  // -o_0
  LolliOne,   // -o_1
  Bang,       // !
  BangZero,   // !_0
  BangOne,    // !_1
  OrOr,       // ||
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
  bool first_on_line = false;
};

// Lexes a whole buffer. `--` starts a comment to end of line. Identifiers
// are [A-Za-z][A-Za-z0-9_']*. Throws Error(Syntax) on bad characters.
std::vector<Token> lex(const std::string& source, const std::string& filename);

}  // namespace pqdyn
