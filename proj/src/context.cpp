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

#include "pqdyn/context.hpp"

namespace pqdyn {

void TypingContext::add_var(std::string name, TypePtr type, Span sp) {
  Binding b;
  b.is_label = false;
  b.name = std::move(name);
  b.type = type;
  b.linear = !is_parameter_type(type);
  b.intro = std::move(sp);
  bindings.push_back(std::move(b));
}

void TypingContext::add_label(LabelId l, TypePtr type, Span sp) {
  Binding b;
  b.is_label = true;
  b.label = l;
  b.type = type;
  b.linear = true;
  b.intro = std::move(sp);
  bindings.push_back(std::move(b));
}

const Binding* TypingContext::find_var(const std::string& name) const {
  for (auto it = bindings.rbegin(); it != bindings.rend(); ++it)
    if (!it->is_label && it->name == name) return &*it;
  return nullptr;
}

const Binding* TypingContext::find_label(LabelId l) const {
  for (auto it = bindings.rbegin(); it != bindings.rend(); ++it)
    if (it->is_label && it->label == l) return &*it;
  return nullptr;
}

namespace {
bool same_subject(const Binding& x, const Binding& y) {
  if (x.is_label != y.is_label) return false;
  return x.is_label ? x.label == y.label : x.name == y.name;
}
}  // namespace

TypingContext ctx_merge(const TypingContext& a, const TypingContext& b) {
  TypingContext out = a;
  for (const Binding& y : b.bindings) {
    const Binding* existing = nullptr;
    for (const Binding& x : out.bindings)
      if (same_subject(x, y)) {
        existing = &x;
        break;
      }
    if (!existing) {
      out.bindings.push_back(y);
      continue;
    }
    if (existing->linear || y.linear)
      throw Error(ErrKind::LinearOverlap, y.intro,
                  "linear binding '" + y.display() +
                      "' occurs in both contexts being merged");
    if (!type_equal(existing->type, y.type, nullptr))
      throw Error(ErrKind::TypeMismatch, y.intro,
                  "shared parameter binding '" + y.display() +
                      "' has conflicting types");
  }
  return out;
}

}  // namespace pqdyn
