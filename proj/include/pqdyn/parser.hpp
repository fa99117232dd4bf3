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

#include <string>

#include "pqdyn/program.hpp"
#include "pqdyn/term.hpp"
#include "pqdyn/type.hpp"

namespace pqdyn {

// Parses a whole source file into surface declarations. Layout-sensitive:
// declarations start in column 1; the bindings of a `let` block and the
// branches of a `case` block align on the column of their first item, and an
// expression ends at the first line whose indentation falls back to an
// enclosing block. Stacked `let` bindings desugar to nested LetPair/LetUnit
// or `(\x -> body) rhs`; n-ary tuple patterns desugar to nested pairs.
Program parse_program(const std::string& source, const std::string& filename);

// Entry points for tests and tools: parse a single expression or type.
TermPtr parse_term(const std::string& source, const std::string& filename = "<term>");
TypePtr parse_type(const std::string& source, const std::string& filename = "<type>");

}  // namespace pqdyn
