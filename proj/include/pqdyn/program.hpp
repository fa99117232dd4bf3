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

#include <map>
#include <string>
#include <vector>

#include "pqdyn/term.hpp"
#include "pqdyn/type.hpp"

namespace pqdyn {

// Surface declaration as parsed: a signature line and a defining equation.
struct SurfaceDecl {
  std::string name;
  TypePtr declared;                 // may contain elided modalities
  std::vector<std::string> params;  // equation parameters, curried
  TermPtr body;
  Span span{};
};

struct Program {
  std::string source_name;
  std::vector<SurfaceDecl> decls;
};

// Checked declaration. Every declaration is stored as a lift-value: a
// declaration of declared `!`-type stores its lifted body at that type; any
// other declared type T is wrapped internally as !_m T and references
// elaborate to `force name` (wrapped == true).
struct Declaration {
  std::string name;
  TypePtr declared;   // frozen surface type (what cmd_check prints)
  TypePtr internal;   // frozen storage type, always a Bang
  TermPtr value;      // elaborated stored value, is_value() holds
  bool wrapped = false;
  bool recursive = false;   // body references its own name
  bool builtin = false;     // circuit constant seeded from the host
  Modality root_modality = Modality::One;
  Span span{};
};

// Name environment: prelude entries plus checked file declarations.
struct Env {
  std::map<std::string, Declaration> decls;
  std::vector<std::string> order;

  bool contains(const std::string& n) const { return decls.count(n) > 0; }
  const Declaration* find(const std::string& n) const {
    auto it = decls.find(n);
    return it == decls.end() ? nullptr : &it->second;
  }
  void insert(Declaration d);
};

}  // namespace pqdyn
