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
#include <memory>

#include "pqdyn/modality.hpp"

namespace pqdyn {

enum class TypeKind : uint8_t {
  Unit,
  Qubit,
  Bit,
  Bool,
  Nat,
  Bang,    // !_m a
  Arrow,   // a -o_m b
  Circ,    // Circ(a, b), a and b simple
  Tensor,  // a * b
  Maybe,   // Maybe a
  Hole,    // checker-internal metavariable for inferred lambda parameters
};

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind;
  ModTerm mod;   // Bang, Arrow
  TypePtr a, b;  // Bang(a) | Arrow(a,b) | Circ(a,b) | Tensor(a,b) | Maybe(a)
  uint32_t hole = 0;  // Hole id
};

namespace types {
TypePtr unit();
TypePtr qubit();
TypePtr bit();
TypePtr boolean();
TypePtr nat();
TypePtr bang(ModTerm m, TypePtr a);
TypePtr arrow(TypePtr a, ModTerm m, TypePtr b);
TypePtr circ(TypePtr s, TypePtr u);
TypePtr tensor(TypePtr a, TypePtr b);
TypePtr maybe(TypePtr a);
TypePtr hole(uint32_t id);
}  // namespace types

// Simple types: Unit, Qubit, Bit, and tensors of simple types. These are the
// circuit interface types (the wire bundles gen/append understand).
bool is_simple_type(const TypePtr& t);

// Parameter types are duplicable and droppable: Unit, Bool, Nat, !_m a,
// Circ(s,u), and tensors of parameter types. Qubit and Bit never are.
bool is_parameter_type(const TypePtr& t);

// Structural equality; modality occurrences are resolved through the solver
// when one is supplied, otherwise compared on resolved defaults.
bool type_equal(const TypePtr& x, const TypePtr& y, const ModalitySolver* s);

// Replaces every modality occurrence with its solved constant.
TypePtr freeze_type(const TypePtr& t, const ModalitySolver& s);

// True if the type contains a checker metavariable.
bool contains_type_hole(const TypePtr& t);

}  // namespace pqdyn
