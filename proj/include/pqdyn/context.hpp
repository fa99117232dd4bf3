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

#include <optional>
#include <string>
#include <vector>

#include "pqdyn/circuit.hpp"
#include "pqdyn/span.hpp"
#include "pqdyn/type.hpp"

namespace pqdyn {

// One typing assumption: either a named variable or a wire label.
// `linear` is derived from the type (non-parameter types are linear).
struct Binding {
  bool is_label = false;
  std::string name;   // when !is_label
  LabelId label = 0;  // when is_label
  TypePtr type;
  bool linear = false;
  Span intro{};

  std::string display() const {
    return is_label ? ("\xE2\x84\x93" + std::to_string(label)) : name;
  }
};

// Ordered typing context. The parameter portion is shared on merge; the
// linear portions must be disjoint.
struct TypingContext {
  std::vector<Binding> bindings;

  void add_var(std::string name, TypePtr type, Span sp = {});
  void add_label(LabelId l, TypePtr type, Span sp = {});
  const Binding* find_var(const std::string& name) const;
  const Binding* find_label(LabelId l) const;
};

// Context merge from the typing rules with two premises: parameter bindings
// common to both sides are shared, linear bindings are concatenated, and a
// linear name or label present in both sides raises LinearOverlap.
TypingContext ctx_merge(const TypingContext& a, const TypingContext& b);

}  // namespace pqdyn
