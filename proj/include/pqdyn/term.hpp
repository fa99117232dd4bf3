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
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pqdyn/circuit.hpp"
#include "pqdyn/span.hpp"
#include "pqdyn/type.hpp"

namespace pqdyn {

// Child layout per kind:
//   Var        name
//   Label      label
//   Lambda     name, t1=body
//   App        t1=fn, t2=arg
//   UnitVal    -
//   BoolLit    flag
//   NatLit     nat
//   Succ       t1
//   Lift       t1
//   Force      t1
//   Box        ty=input simple type, t1=operand
//   Apply      t1=circuit term, t2=argument
//   BoxedCirc  circ=(a, C, b)
//   Pair       t1, t2
//   LetPair    name, name2, t1=rhs, t2=body
//   LetUnit    t1=rhs, t2=body
//   Dynlift    t1
//   If         t1=cond, t2=then, t3=else
//   NatCase    t1=scrutinee, t2=zero body, name=succ binder, t3=succ body
//   NothingC   -
//   JustC      t1
//   MaybeCase  t1=scrutinee, t2=nothing body, name=just binder, t3=just body
enum class TermKind : uint8_t {
  Var,
  Label,
  Lambda,
  App,
  UnitVal,
  BoolLit,
  NatLit,
  Succ,
  Lift,
  Force,
  Box,
  Apply,
  BoxedCirc,
  Pair,
  LetPair,
  LetUnit,
  Dynlift,
  If,
  NatCase,
  NothingC,
  JustC,
  MaybeCase,
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Boxed circuit value (a, C, b): interface simple terms over C's endpoints.
struct BoxedCircuitValue {
  TermPtr input_shape;
  Circuit circuit;
  TermPtr output_shape;
};

struct Term {
  TermKind kind{};
  Span span{};
  std::string name;
  std::string name2;
  LabelId label = 0;
  uint64_t nat = 0;
  bool flag = false;
  TypePtr ty;
  TermPtr t1, t2, t3;
  std::shared_ptr<const BoxedCircuitValue> circ;
};

namespace mk {
TermPtr var(std::string name, Span sp = {});
TermPtr label(LabelId l, Span sp = {});
TermPtr lambda(std::string param, TermPtr body, Span sp = {});
TermPtr app(TermPtr fn, TermPtr arg, Span sp = {});
TermPtr unit(Span sp = {});
TermPtr boolean(bool v, Span sp = {});
TermPtr natlit(uint64_t n, Span sp = {});
TermPtr succ(TermPtr t, Span sp = {});
TermPtr lift(TermPtr t, Span sp = {});
TermPtr force(TermPtr t, Span sp = {});
TermPtr box(TypePtr s, TermPtr t, Span sp = {});
TermPtr apply(TermPtr c, TermPtr arg, Span sp = {});
TermPtr boxed_circ(std::shared_ptr<const BoxedCircuitValue> v, Span sp = {});
TermPtr pair(TermPtr a, TermPtr b, Span sp = {});
TermPtr let_pair(std::string x, std::string y, TermPtr rhs, TermPtr body,
                 Span sp = {});
TermPtr let_unit(TermPtr rhs, TermPtr body, Span sp = {});
TermPtr dynlift(TermPtr t, Span sp = {});
TermPtr if_then_else(TermPtr c, TermPtr t, TermPtr e, Span sp = {});
TermPtr nat_case(TermPtr scrut, TermPtr zero, std::string binder, TermPtr succ,
                 Span sp = {});
TermPtr nothing(Span sp = {});
TermPtr just(TermPtr t, Span sp = {});
TermPtr maybe_case(TermPtr scrut, TermPtr none, std::string binder,
                   TermPtr some, Span sp = {});
}  // namespace mk

// Values: Var, Label, Lambda, Lift, BoxedCirc, UnitVal, BoolLit, NatLit,
// Nothing, Just of a value, pairs of values.
bool is_value(const TermPtr& t);

// Simple terms: labels, Unit, and pairs of simple terms (circuit interfaces).
bool is_simple_term(const TermPtr& t);

// Labels of a simple term, left to right.
std::vector<LabelId> simple_labels(const TermPtr& t);

// All labels occurring anywhere in a term.
void collect_labels(const TermPtr& t, std::set<LabelId>& out);

// Free variables (names not bound by lambda/let/case binders).
std::set<std::string> free_vars(const TermPtr& t);

// Capture-avoiding substitution [v/x]m. `v` must be a value.
TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& v);

// Renames every label through `map` (labels absent from the map are kept).
TermPtr relabel_term(const TermPtr& t, const std::map<LabelId, LabelId>& map);

// Alpha equivalence. Boxed circuits compare by canonical circuit equality
// plus interface shape.
bool alpha_equal(const TermPtr& x, const TermPtr& y);

// Structural equality with exact label identity (used for outcome merging).
bool term_equal(const TermPtr& x, const TermPtr& y);

}  // namespace pqdyn
