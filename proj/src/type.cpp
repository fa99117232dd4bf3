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

#include "pqdyn/type.hpp"

#include "pqdyn/span.hpp"

namespace pqdyn {

const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::Syntax: return "Syntax";
    case ErrKind::UnboundVariable: return "UnboundVariable";
    case ErrKind::DuplicateDeclaration: return "DuplicateDeclaration";
    case ErrKind::LinearityViolation: return "LinearityViolation";
    case ErrKind::LinearOverlap: return "LinearOverlap";
    case ErrKind::TypeMismatch: return "TypeMismatch";
    case ErrKind::NotAFunction: return "NotAFunction";
    case ErrKind::CannotInfer: return "CannotInfer";
    case ErrKind::ModalityError: return "ModalityError";
    case ErrKind::ModalityAnnotationConflict: return "ModalityAnnotationConflict";
    case ErrKind::ShapeMismatch: return "ShapeMismatch";
    case ErrKind::WireTypeMismatch: return "WireTypeMismatch";
    case ErrKind::WireNotFound: return "WireNotFound";
    case ErrKind::NotABit: return "NotABit";
    case ErrKind::DanglingLabel: return "DanglingLabel";
    case ErrKind::AddressMismatch: return "AddressMismatch";
    case ErrKind::DynliftAtGenerationTime: return "DynliftAtGenerationTime";
    case ErrKind::StuckTerm: return "StuckTerm";
    case ErrKind::LimitExceeded: return "LimitExceeded";
    case ErrKind::Internal: return "Internal";
  }
  return "Unknown";
}

namespace types {

namespace {
TypePtr leaf(TypeKind k) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  return t;
}
}  // namespace

TypePtr unit() {
  static const TypePtr t = leaf(TypeKind::Unit);
  return t;
}
TypePtr qubit() {
  static const TypePtr t = leaf(TypeKind::Qubit);
  return t;
}
TypePtr bit() {
  static const TypePtr t = leaf(TypeKind::Bit);
  return t;
}
TypePtr boolean() {
  static const TypePtr t = leaf(TypeKind::Bool);
  return t;
}
TypePtr nat() {
  static const TypePtr t = leaf(TypeKind::Nat);
  return t;
}

TypePtr bang(ModTerm m, TypePtr a) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Bang;
  t->mod = m;
  t->a = std::move(a);
  return t;
}

TypePtr arrow(TypePtr a, ModTerm m, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Arrow;
  t->mod = m;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

TypePtr circ(TypePtr s, TypePtr u) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Circ;
  t->a = std::move(s);
  t->b = std::move(u);
  return t;
}

TypePtr tensor(TypePtr a, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Tensor;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

TypePtr maybe(TypePtr a) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Maybe;
  t->a = std::move(a);
  return t;
}

TypePtr hole(uint32_t id) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Hole;
  t->hole = id;
  return t;
}

}  // namespace types

bool is_simple_type(const TypePtr& t) {
  if (!t) return false;
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Qubit:
    case TypeKind::Bit:
      return true;
    case TypeKind::Tensor:
      return is_simple_type(t->a) && is_simple_type(t->b);
    default:
      return false;
  }
}

bool is_parameter_type(const TypePtr& t) {
  if (!t) return false;
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Bool:
    case TypeKind::Nat:
    case TypeKind::Bang:
    case TypeKind::Circ:
      return true;
    case TypeKind::Tensor:
      return is_parameter_type(t->a) && is_parameter_type(t->b);
    default:
      return false;
  }
}

namespace {
Modality resolve_mod(const ModTerm& m, const ModalitySolver* s) {
  if (s) return s->resolve(m);
  // Without a solver only constants are meaningful; elided/holes read as 1.
  return m.tag == ModTerm::Tag::Const ? m.value : Modality::One;
}
}  // namespace

bool type_equal(const TypePtr& x, const TypePtr& y, const ModalitySolver* s) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TypeKind::Unit:
    case TypeKind::Qubit:
    case TypeKind::Bit:
    case TypeKind::Bool:
    case TypeKind::Nat:
      return true;
    case TypeKind::Bang:
      return resolve_mod(x->mod, s) == resolve_mod(y->mod, s) &&
             type_equal(x->a, y->a, s);
    case TypeKind::Arrow:
      return resolve_mod(x->mod, s) == resolve_mod(y->mod, s) &&
             type_equal(x->a, y->a, s) && type_equal(x->b, y->b, s);
    case TypeKind::Circ:
    case TypeKind::Tensor:
      return type_equal(x->a, y->a, s) && type_equal(x->b, y->b, s);
    case TypeKind::Maybe:
      return type_equal(x->a, y->a, s);
    case TypeKind::Hole:
      return x->hole == y->hole;
  }
  return false;
}

TypePtr freeze_type(const TypePtr& t, const ModalitySolver& s) {
  if (!t) return t;
  switch (t->kind) {
    case TypeKind::Unit:
    case TypeKind::Qubit:
    case TypeKind::Bit:
    case TypeKind::Bool:
    case TypeKind::Nat:
    case TypeKind::Hole:
      return t;
    case TypeKind::Bang:
      return types::bang(ModTerm::constant(s.resolve(t->mod)),
                         freeze_type(t->a, s));
    case TypeKind::Arrow:
      return types::arrow(freeze_type(t->a, s),
                          ModTerm::constant(s.resolve(t->mod)),
                          freeze_type(t->b, s));
    case TypeKind::Circ:
      return types::circ(freeze_type(t->a, s), freeze_type(t->b, s));
    case TypeKind::Tensor:
      return types::tensor(freeze_type(t->a, s), freeze_type(t->b, s));
    case TypeKind::Maybe:
      return types::maybe(freeze_type(t->a, s));
  }
  return t;
}

bool contains_type_hole(const TypePtr& t) {
  if (!t) return false;
  if (t->kind == TypeKind::Hole) return true;
  return contains_type_hole(t->a) || contains_type_hole(t->b);
}

}  // namespace pqdyn
