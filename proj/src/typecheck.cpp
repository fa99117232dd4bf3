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

#include "pqdyn/typecheck.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

#include "pqdyn/pretty.hpp"

namespace pqdyn {

namespace {

// Replaces every elided/constant modality with a solver cell: elisions get
// defaulting holes, explicit annotations get pinned holes so that conflicting
// demands surface as errors instead of silent overrides.
TypePtr open_modalities(const TypePtr& t, ModalitySolver& s) {
  if (!t) return t;
  auto open_mod = [&s](const ModTerm& m) {
    switch (m.tag) {
      case ModTerm::Tag::Elided:
        return ModTerm::hole_ref(s.fresh());
      case ModTerm::Tag::Const:
        return ModTerm::hole_ref(s.pinned(m.value));
      case ModTerm::Tag::Hole:
        return m;
    }
    return m;
  };
  switch (t->kind) {
    case TypeKind::Bang:
      return types::bang(open_mod(t->mod), open_modalities(t->a, s));
    case TypeKind::Arrow:
      return types::arrow(open_modalities(t->a, s), open_mod(t->mod),
                          open_modalities(t->b, s));
    case TypeKind::Circ:
      return types::circ(open_modalities(t->a, s), open_modalities(t->b, s));
    case TypeKind::Tensor:
      return types::tensor(open_modalities(t->a, s),
                           open_modalities(t->b, s));
    case TypeKind::Maybe:
      return types::maybe(open_modalities(t->a, s));
    default:
      return t;
  }
}

bool is_bang(const TypePtr& t) { return t && t->kind == TypeKind::Bang; }

}  // namespace

//==============================================================================
// Scope and metavariables
//==============================================================================

Checker::Checker(const Env& env, ModalitySolver& solver)
    : env_(env), solver_(solver) {}

void Checker::bind_label(LabelId l, WireType w) {
  ScopeEntry e;
  e.b.is_label = true;
  e.b.label = l;
  e.b.type = w == WireType::Qubit ? types::qubit() : types::bit();
  e.b.linear = true;
  scope_.push_back(std::move(e));
}

void Checker::bind_var(const std::string& name, TypePtr type, Span sp) {
  push_var(name, std::move(type), sp);
}

TypePtr Checker::resolve(const TypePtr& t) const {
  if (!t) return t;
  if (t->kind == TypeKind::Hole) {
    const TypePtr& bound = type_holes_[t->hole];
    return bound ? resolve(bound) : t;
  }
  switch (t->kind) {
    case TypeKind::Bang: {
      TypePtr a = resolve(t->a);
      return a == t->a ? t : types::bang(t->mod, a);
    }
    case TypeKind::Arrow: {
      TypePtr a = resolve(t->a);
      TypePtr b = resolve(t->b);
      return (a == t->a && b == t->b) ? t : types::arrow(a, t->mod, b);
    }
    case TypeKind::Circ: {
      TypePtr a = resolve(t->a);
      TypePtr b = resolve(t->b);
      return (a == t->a && b == t->b) ? t : types::circ(a, b);
    }
    case TypeKind::Tensor: {
      TypePtr a = resolve(t->a);
      TypePtr b = resolve(t->b);
      return (a == t->a && b == t->b) ? t : types::tensor(a, b);
    }
    case TypeKind::Maybe: {
      TypePtr a = resolve(t->a);
      return a == t->a ? t : types::maybe(a);
    }
    default:
      return t;
  }
}

uint32_t Checker::fresh_type_hole() {
  type_holes_.push_back(nullptr);
  return static_cast<uint32_t>(type_holes_.size() - 1);
}

namespace {
bool mentions_hole(const TypePtr& t, uint32_t id) {
  if (!t) return false;
  if (t->kind == TypeKind::Hole) return t->hole == id;
  return mentions_hole(t->a, id) || mentions_hole(t->b, id);
}
}  // namespace

bool Checker::bind_type_hole(uint32_t id, const TypePtr& t) {
  TypePtr r = resolve(t);
  if (r->kind == TypeKind::Hole && r->hole == id) return true;
  if (mentions_hole(r, id)) return false;
  type_holes_[id] = r;
  return true;
}

size_t Checker::push_var(const std::string& name, TypePtr type, Span sp,
                         uint32_t hole) {
  ScopeEntry e;
  e.b.name = name;
  e.b.type = std::move(type);
  e.b.intro = sp;
  e.type_hole = hole;
  scope_.push_back(std::move(e));
  return scope_.size() - 1;
}

namespace {
// Whether an assumption of this (possibly still unresolved) type must be
// used exactly once. Unresolved metavariables are held to the linear
// discipline until a use fixes them.
bool entry_linear(const TypePtr& resolved) {
  return !is_parameter_type(resolved);
}
}  // namespace

void Checker::pop_binder(size_t idx, const Span& sp) {
  assert(idx == scope_.size() - 1 && "binders pop in LIFO order");
  const ScopeEntry& e = scope_[idx];
  if (!e.consumed) {
    TypePtr r = resolve(e.b.type);
    if (contains_type_hole(r)) {
      throw Error(ErrKind::CannotInfer, sp.known() ? sp : e.b.intro,
                  "cannot infer the type of unused binder '" + e.b.display() +
                      "'; add an annotation");
    }
    if (entry_linear(r)) {
      throw Error(ErrKind::LinearityViolation,
                  sp.known() ? sp : e.b.intro,
                  "unused linear binder '" + e.b.display() + "' of type '" +
                      pretty_type(r, &solver_) + "'");
    }
  }
  scope_.pop_back();
}

CheckOutput Checker::consume(size_t idx, const Term& at) {
  ScopeEntry& e = scope_[idx];
  TypePtr r = resolve(e.b.type);
  if (e.consumed && entry_linear(r)) {
    if (contains_type_hole(r)) {
      throw Error(ErrKind::CannotInfer, at.span,
                  "'" + e.b.display() +
                      "' is used more than once but its type is not known "
                      "yet; add an annotation");
    }
    throw Error(ErrKind::LinearityViolation, at.span,
                "linear " + std::string(e.b.is_label ? "wire" : "variable") +
                    " '" + e.b.display() + "' is used more than once");
  }
  e.consumed = true;
  CheckOutput out;
  out.term = e.b.is_label ? mk::label(e.b.label, at.span)
                          : mk::var(e.b.name, at.span);
  out.type = e.b.type;
  out.modality = Modality::One;
  return out;
}

std::vector<bool> Checker::consumed_snapshot() const {
  std::vector<bool> snap(scope_.size());
  for (size_t i = 0; i < scope_.size(); ++i) snap[i] = scope_[i].consumed;
  return snap;
}

void Checker::restore_consumed(const std::vector<bool>& snap) {
  assert(snap.size() <= scope_.size());
  for (size_t i = 0; i < snap.size(); ++i) scope_[i].consumed = snap[i];
}

std::vector<std::string> Checker::unconsumed() const {
  std::vector<std::string> out;
  for (const ScopeEntry& e : scope_) {
    if (e.consumed) continue;
    TypePtr r = resolve(e.b.type);
    if (entry_linear(r)) out.push_back(e.b.display());
  }
  return out;
}

//==============================================================================
// Modality and type matching
//==============================================================================

void Checker::require_mod(const ModTerm& site, Modality computed,
                          const Span& sp, const char* what) {
  auto fail = [&](bool pinned, Modality annotated) {
    std::string hint = computed == Modality::Zero
                           ? " (its body may perform dynamic lifting)"
                           : "";
    throw Error(pinned ? ErrKind::ModalityAnnotationConflict
                       : ErrKind::ModalityError,
                sp,
                std::string("the ") + what + " is annotated with modality " +
                    modality_name(annotated) + " but computes modality " +
                    modality_name(computed) + hint);
  };
  switch (site.tag) {
    case ModTerm::Tag::Const:
      if (site.value != computed) fail(true, site.value);
      return;
    case ModTerm::Tag::Elided:
      if (computed != Modality::One) fail(false, Modality::One);
      return;
    case ModTerm::Tag::Hole: {
      ModalitySolver::Solve r = solver_.require(site.hole, computed);
      if (r == ModalitySolver::Solve::Conflict) {
        fail(solver_.is_pinned(site.hole), solver_.value(site.hole));
      }
      return;
    }
  }
}

void Checker::mod_unify(const ModTerm& expected, const ModTerm& found,
                        const Span& sp) {
  auto conflict = [&](bool pinned, Modality e, Modality f) {
    throw Error(pinned ? ErrKind::ModalityAnnotationConflict
                       : ErrKind::ModalityError,
                sp,
                std::string("modality mismatch: expected ") +
                    modality_name(e) + ", found " + modality_name(f));
  };
  bool e_hole = expected.tag == ModTerm::Tag::Hole;
  bool f_hole = found.tag == ModTerm::Tag::Hole;
  Modality ev = solver_.resolve(expected);
  Modality fv = solver_.resolve(found);
  if (e_hole && f_hole && expected.hole == found.hole) return;
  if (!e_hole && !f_hole) {
    if (ev != fv) conflict(true, ev, fv);
    return;
  }
  if (e_hole) {
    if (solver_.require(expected.hole, fv) == ModalitySolver::Solve::Conflict) {
      conflict(solver_.is_pinned(expected.hole), ev, fv);
    }
  }
  if (f_hole) {
    ev = solver_.resolve(expected);
    if (solver_.require(found.hole, ev) == ModalitySolver::Solve::Conflict) {
      conflict(solver_.is_pinned(found.hole), ev, fv);
    }
  }
}

void Checker::match_types(const TypePtr& expected, const TypePtr& found,
                          const Span& sp) {
  TypePtr e = resolve(expected);
  TypePtr f = resolve(found);
  if (e->kind == TypeKind::Hole || f->kind == TypeKind::Hole) {
    if (e->kind == TypeKind::Hole && f->kind == TypeKind::Hole &&
        e->hole == f->hole) {
      return;
    }
    uint32_t id = e->kind == TypeKind::Hole ? e->hole : f->hole;
    const TypePtr& other = e->kind == TypeKind::Hole ? f : e;
    if (!bind_type_hole(id, other)) {
      throw Error(ErrKind::TypeMismatch, sp, "cannot construct a recursive type");
    }
    return;
  }
  if (e->kind != f->kind) {
    throw Error(ErrKind::TypeMismatch, sp,
                "expected '" + pretty_type(e, &solver_) + "', found '" +
                    pretty_type(f, &solver_) + "'");
  }
  switch (e->kind) {
    case TypeKind::Unit:
    case TypeKind::Qubit:
    case TypeKind::Bit:
    case TypeKind::Bool:
    case TypeKind::Nat:
      return;
    case TypeKind::Bang:
      mod_unify(e->mod, f->mod, sp);
      match_types(e->a, f->a, sp);
      return;
    case TypeKind::Arrow:
      mod_unify(e->mod, f->mod, sp);
      match_types(e->a, f->a, sp);
      match_types(e->b, f->b, sp);
      return;
    case TypeKind::Circ:
    case TypeKind::Tensor:
      match_types(e->a, f->a, sp);
      match_types(e->b, f->b, sp);
      return;
    case TypeKind::Maybe:
      match_types(e->a, f->a, sp);
      return;
    case TypeKind::Hole:
      return;  // handled above
  }
}

CheckOutput Checker::force_shell(CheckOutput got) {
  TypePtr t = resolve(got.type);
  while (is_bang(t)) {
    got.modality = got.modality & solver_.resolve(t->mod);
    got.term = mk::force(got.term, got.term->span);
    got.type = t->a;
    t = resolve(got.type);
  }
  return got;
}

CheckOutput Checker::coerce(CheckOutput got, const TypePtr& expected,
                            const Span& sp) {
  TypePtr e = resolve(expected);
  TypePtr f = resolve(got.type);
  // A '!'-typed term used at a non-'!' expectation is forced.
  while (is_bang(f) && !is_bang(e) && e->kind != TypeKind::Hole) {
    got.modality = got.modality & solver_.resolve(f->mod);
    got.term = mk::force(got.term, sp.known() ? sp : got.term->span);
    got.type = f->a;
    f = resolve(got.type);
  }
  // A value meeting a '!' expectation is lifted, provided it captures no
  // linear resources (a lifted term must live in a parameter-only context).
  if (is_bang(e) && !is_bang(f) && f->kind != TypeKind::Hole &&
      is_value(got.term)) {
    bool clean = true;
    std::set<LabelId> labels;
    collect_labels(got.term, labels);
    if (!labels.empty()) clean = false;
    if (clean) {
      for (const std::string& v : free_vars(got.term)) {
        for (size_t i = scope_.size(); i-- > 0;) {
          const ScopeEntry& se = scope_[i];
          if (se.b.is_label || se.b.name != v) continue;
          if (entry_linear(resolve(se.b.type))) clean = false;
          break;
        }
        if (!clean) break;
      }
    }
    if (clean) {
      require_mod(e->mod, got.modality, sp, "lifted value");
      match_types(e->a, got.type, sp);
      got.term = mk::lift(got.term, sp.known() ? sp : got.term->span);
      got.type = e;
      got.modality = Modality::One;
      return got;
    }
  }
  match_types(e, got.type, sp);
  got.type = e;
  return got;
}

//==============================================================================
// Inference
//==============================================================================

CheckOutput Checker::infer_var(const Term& t) {
  for (size_t i = scope_.size(); i-- > 0;) {
    const ScopeEntry& e = scope_[i];
    if (!e.b.is_label && e.b.name == t.name) return consume(i, t);
  }
  const Declaration* d = env_.find(t.name);
  if (!d) {
    throw Error(ErrKind::UnboundVariable, t.span,
                "unbound variable '" + t.name + "'");
  }
  if (!is_bang(d->internal)) {
    throw Error(ErrKind::Internal, t.span,
                "declaration '" + t.name + "' has a non-'!' storage type");
  }
  CheckOutput out;
  if (d->wrapped) {
    out.term = mk::force(mk::var(t.name, t.span), t.span);
    out.type = d->internal->a;
    out.modality = solver_.resolve(d->internal->mod);
  } else {
    out.term = mk::var(t.name, t.span);
    out.type = d->internal;
    out.modality = Modality::One;
  }
  return out;
}

// A beta redex `(\x -> body) rhs` is the elaboration of `let x = rhs in
// body`: the bound term's type flows into the binder, and in checking
// position the expected type flows on into the body.
CheckOutput Checker::let_redex(const Term& t, const TypePtr* expected) {
  const Term& fn = *t.t1;
  CheckOutput rhs = infer(t.t2);
  size_t idx = push_var(fn.name, rhs.type, fn.span);
  CheckOutput body = expected ? check(fn.t1, *expected) : infer(fn.t1);
  pop_binder(idx, t.span);
  CheckOutput out;
  out.term =
      mk::app(mk::lambda(fn.name, body.term, fn.span), rhs.term, t.span);
  out.type = body.type;
  out.modality = rhs.modality & body.modality;
  return out;
}

CheckOutput Checker::infer_app(const Term& t) {
  if (t.t1->kind == TermKind::Lambda) return let_redex(t, nullptr);
  CheckOutput fn = force_shell(infer(t.t1));
  TypePtr ft = resolve(fn.type);
  if (ft->kind == TypeKind::Hole) {
    throw Error(ErrKind::CannotInfer, t.t1->span,
                "cannot infer the type of this application head");
  }
  if (ft->kind != TypeKind::Arrow) {
    throw Error(ErrKind::NotAFunction, t.t1->span,
                "cannot apply a term of type '" + pretty_type(ft, &solver_) +
                    "'");
  }
  CheckOutput arg = check(t.t2, ft->a);
  CheckOutput out;
  out.term = mk::app(fn.term, arg.term, t.span);
  out.type = ft->b;
  out.modality = fn.modality & arg.modality & solver_.resolve(ft->mod);
  return out;
}

CheckOutput Checker::infer_boxed_circ(const Term& t) {
  const BoxedCircuitValue& v = *t.circ;
  validate(v.circuit);

  auto interface_type = [&](const TermPtr& shape, const LabelContext& ctx,
                            const char* side) {
    std::vector<LabelId> labs = simple_labels(shape);
    if (labs.size() != ctx.size()) {
      throw Error(ErrKind::DanglingLabel, t.span,
                  std::string("boxed circuit ") + side +
                      " interface does not cover its wires");
    }
    std::function<TypePtr(const TermPtr&)> go =
        [&](const TermPtr& s) -> TypePtr {
      switch (s->kind) {
        case TermKind::UnitVal:
          return types::unit();
        case TermKind::Label: {
          for (const auto& [l, w] : ctx) {
            if (l == s->label) {
              return w == WireType::Qubit ? types::qubit() : types::bit();
            }
          }
          throw Error(ErrKind::DanglingLabel, t.span,
                      std::string("label in the boxed circuit ") + side +
                          " interface is not one of its wires");
        }
        case TermKind::Pair:
          return types::tensor(go(s->t1), go(s->t2));
        default:
          throw Error(ErrKind::ShapeMismatch, t.span,
                      std::string("boxed circuit ") + side +
                          " interface is not a wire bundle");
      }
    };
    return go(shape);
  };

  CheckOutput out;
  out.term = mk::boxed_circ(t.circ, t.span);
  out.type = types::circ(interface_type(v.input_shape, v.circuit.inputs, "input"),
                         interface_type(v.output_shape, v.circuit.outputs,
                                        "output"));
  out.modality = Modality::One;
  return out;
}

CheckOutput Checker::box_operand(const Term& t) {
  if (!is_simple_type(t.ty)) {
    throw Error(ErrKind::ShapeMismatch, t.span,
                "box needs a wire-bundle interface type (Unit, Qubit, Bit, "
                "or tensors of them)");
  }
  CheckOutput op = infer(t.t1);
  TypePtr ot = resolve(op.type);
  auto reject = [&](Modality got) {
    throw Error(ErrKind::ModalityError, t.span,
                std::string("cannot box: the circuit builder may perform "
                            "dynamic lifting (modality ") +
                    modality_name(got) +
                    "); box needs a lifting-free builder of type !_1(S "
                    "-o_1 U)");
  };
  auto demand_one = [&](const ModTerm& m) {
    if (m.tag == ModTerm::Tag::Hole) {
      if (solver_.require(m.hole, Modality::One) ==
          ModalitySolver::Solve::Conflict) {
        reject(solver_.value(m.hole));
      }
      return;
    }
    if (solver_.resolve(m) != Modality::One) reject(solver_.resolve(m));
  };
  if (!is_bang(ot)) {
    throw Error(ErrKind::TypeMismatch, t.span,
                "box needs a '!_1' function, found '" +
                    pretty_type(ot, &solver_) +
                    "' (wrap the builder in lift)");
  }
  TypePtr inner = resolve(ot->a);
  if (inner->kind != TypeKind::Arrow) {
    throw Error(ErrKind::TypeMismatch, t.span,
                "box needs a function under '!', found '" +
                    pretty_type(inner, &solver_) + "'");
  }
  demand_one(ot->mod);
  demand_one(inner->mod);
  match_types(t.ty, inner->a, t.span);
  TypePtr u = resolve(inner->b);
  if (!is_simple_type(u)) {
    throw Error(ErrKind::ShapeMismatch, t.span,
                "box produced the non-wire output type '" +
                    pretty_type(u, &solver_) + "'");
  }
  CheckOutput out;
  out.term = mk::box(t.ty, op.term, t.span);
  out.type = types::circ(t.ty, u);
  out.modality = op.modality;
  return out;
}

CheckOutput Checker::infer_branches(const TermPtr& m, const TypePtr* expected) {
  const Term& t = *m;

  // Scrutinee (or bound right-hand side for the let forms).
  CheckOutput sc;
  TypePtr elem_a, elem_b;  // binder types
  switch (t.kind) {
    case TermKind::If:
      sc = check(t.t1, types::boolean());
      break;
    case TermKind::NatCase:
      sc = check(t.t1, types::nat());
      break;
    case TermKind::MaybeCase: {
      sc = force_shell(infer(t.t1));
      TypePtr st = resolve(sc.type);
      if (st->kind == TypeKind::Hole) {
        throw Error(ErrKind::CannotInfer, t.t1->span,
                    "cannot infer the type of this case scrutinee");
      }
      if (st->kind != TypeKind::Maybe) {
        throw Error(ErrKind::TypeMismatch, t.t1->span,
                    "case with Nothing/Just branches needs a Maybe "
                    "scrutinee, found '" +
                        pretty_type(st, &solver_) + "'");
      }
      elem_a = st->a;
      break;
    }
    case TermKind::LetPair: {
      sc = force_shell(infer(t.t1));
      TypePtr st = resolve(sc.type);
      if (st->kind == TypeKind::Hole) {
        throw Error(ErrKind::CannotInfer, t.t1->span,
                    "cannot infer the type of this pair");
      }
      if (st->kind != TypeKind::Tensor) {
        throw Error(ErrKind::TypeMismatch, t.t1->span,
                    "let (x, y) needs a pair, found '" +
                        pretty_type(st, &solver_) + "'");
      }
      elem_a = st->a;
      elem_b = st->b;
      break;
    }
    case TermKind::LetUnit:
      sc = check(t.t1, types::unit());
      break;
    default:
      throw Error(ErrKind::Internal, t.span, "not a branching term");
  }

  // Single-body let forms.
  if (t.kind == TermKind::LetPair || t.kind == TermKind::LetUnit) {
    CheckOutput body;
    if (t.kind == TermKind::LetPair) {
      size_t ix = push_var(t.name, elem_a, t.span);
      size_t iy = push_var(t.name2, elem_b, t.span);
      body = expected ? check(t.t2, *expected) : infer(t.t2);
      pop_binder(iy, t.span);
      pop_binder(ix, t.span);
    } else {
      body = expected ? check(t.t2, *expected) : infer(t.t2);
    }
    CheckOutput out;
    out.term = t.kind == TermKind::LetPair
                   ? mk::let_pair(t.name, t.name2, sc.term, body.term, t.span)
                   : mk::let_unit(sc.term, body.term, t.span);
    out.type = body.type;
    out.modality = sc.modality & body.modality;
    return out;
  }

  // Two-branch forms: If, NatCase, MaybeCase. The second branch of the case
  // forms binds a variable. Both branches must agree on the linear resources
  // they consume; the result modality conjoins the scrutinee and both
  // branches (they may disagree, e.g. one pure and one lifting branch).
  std::string binder = t.kind == TermKind::If ? std::string() : t.name;
  TypePtr binder_ty = t.kind == TermKind::NatCase ? types::nat() : elem_a;

  auto run1 = [&](const TypePtr* want) {
    return want ? check(t.t2, *want) : infer(t.t2);
  };
  auto run2 = [&](const TypePtr* want) {
    if (t.kind == TermKind::If) {
      return want ? check(t.t3, *want) : infer(t.t3);
    }
    size_t ib = push_var(binder, binder_ty, t.span);
    CheckOutput o = want ? check(t.t3, *want) : infer(t.t3);
    pop_binder(ib, t.span);
    return o;
  };

  std::vector<bool> pre = consumed_snapshot();
  CheckOutput o1, o2;
  std::vector<bool> s1, s2;
  if (expected) {
    o1 = run1(expected);
    s1 = consumed_snapshot();
    restore_consumed(pre);
    o2 = run2(expected);
    s2 = consumed_snapshot();
  } else {
    ModalitySolver::Snapshot msnap = solver_.save();
    std::vector<TypePtr> hsnap = type_holes_;
    size_t ssize = scope_.size();
    try {
      o1 = run1(nullptr);
      s1 = consumed_snapshot();
      restore_consumed(pre);
      TypePtr want = o1.type;
      o2 = run2(&want);
      s2 = consumed_snapshot();
    } catch (const Error& e) {
      if (e.kind() != ErrKind::CannotInfer) throw;
      solver_.restore(msnap);
      type_holes_ = hsnap;
      scope_.resize(ssize);
      restore_consumed(pre);
      o2 = run2(nullptr);
      s2 = consumed_snapshot();
      restore_consumed(pre);
      TypePtr want = o2.type;
      o1 = run1(&want);
      s1 = consumed_snapshot();
    }
  }

  // Branch agreement on linear usage.
  for (size_t i = 0; i < pre.size(); ++i) {
    if (s1[i] == s2[i]) continue;
    const ScopeEntry& e = scope_[i];
    if (!entry_linear(resolve(e.b.type))) continue;
    throw Error(ErrKind::LinearityViolation, t.span,
                "the branches disagree on the use of linear '" +
                    e.b.display() + "'");
  }
  for (size_t i = 0; i < pre.size(); ++i) {
    scope_[i].consumed = s1[i] || s2[i];
  }

  CheckOutput out;
  switch (t.kind) {
    case TermKind::If:
      out.term = mk::if_then_else(sc.term, o1.term, o2.term, t.span);
      break;
    case TermKind::NatCase:
      out.term = mk::nat_case(sc.term, o1.term, binder, o2.term, t.span);
      break;
    default:
      out.term = mk::maybe_case(sc.term, o1.term, binder, o2.term, t.span);
      break;
  }
  out.type = expected ? *expected : o1.type;
  out.modality = sc.modality & o1.modality & o2.modality;
  return out;
}

CheckOutput Checker::check_lambda(const TermPtr& m, const TypePtr& expected) {
  const Term& t = *m;
  TypePtr e = resolve(expected);
  if (e->kind == TypeKind::Arrow) {
    size_t idx = push_var(t.name, e->a, t.span);
    CheckOutput body = check(t.t1, e->b);
    pop_binder(idx, t.span);
    require_mod(e->mod, body.modality, t.span, "function");
    CheckOutput out;
    out.term = mk::lambda(t.name, body.term, t.span);
    out.type = e;
    out.modality = Modality::One;
    return out;
  }
  if (e->kind == TypeKind::Hole) {
    // Inference position: give the parameter a metavariable and let the
    // body's uses pin it down.
    uint32_t h = fresh_type_hole();
    size_t idx = push_var(t.name, types::hole(h), t.span, h);
    CheckOutput body = infer(t.t1);
    TypePtr param = resolve(types::hole(h));
    if (contains_type_hole(param)) {
      pop_binder(idx, t.span);  // raises for unused linear binders first
      throw Error(ErrKind::CannotInfer, t.span,
                  "cannot infer the type of parameter '" + t.name +
                      "'; annotate the function");
    }
    pop_binder(idx, t.span);
    CheckOutput out;
    out.term = mk::lambda(t.name, body.term, t.span);
    out.type = types::arrow(param, ModTerm::constant(body.modality),
                            resolve(body.type));
    out.modality = Modality::One;
    if (!bind_type_hole(e->hole, out.type)) {
      throw Error(ErrKind::TypeMismatch, t.span,
                  "cannot construct a recursive type");
    }
    return out;
  }
  throw Error(ErrKind::TypeMismatch, t.span,
              "a function cannot have type '" + pretty_type(e, &solver_) +
                  "'");
}

CheckOutput Checker::check_lift(const TermPtr& m, const TypePtr& expected) {
  const Term& t = *m;
  TypePtr e = resolve(expected);
  if (!is_bang(e)) {
    if (e->kind == TypeKind::Hole) {
      CheckOutput out = infer(m);
      match_types(e, out.type, t.span);
      return out;
    }
    throw Error(ErrKind::TypeMismatch, t.span,
                "lift produces a '!' type, expected '" +
                    pretty_type(e, &solver_) + "'");
  }
  std::vector<bool> pre = consumed_snapshot();
  CheckOutput body = check(t.t1, e->a);
  for (size_t i = 0; i < pre.size(); ++i) {
    if (pre[i] || !scope_[i].consumed) continue;
    if (!entry_linear(resolve(scope_[i].b.type))) continue;
    throw Error(ErrKind::LinearityViolation, t.span,
                "lift captures the linear " +
                    std::string(scope_[i].b.is_label ? "wire" : "variable") +
                    " '" + scope_[i].b.display() +
                    "'; lifted terms may only use parameters");
  }
  require_mod(e->mod, body.modality, t.span, "lifted term");
  CheckOutput out;
  out.term = mk::lift(body.term, t.span);
  out.type = e;
  out.modality = Modality::One;
  return out;
}

CheckOutput Checker::infer(const TermPtr& m) {
  const Term& t = *m;
  switch (t.kind) {
    case TermKind::Var:
      return infer_var(t);

    case TermKind::Label: {
      for (size_t i = scope_.size(); i-- > 0;) {
        const ScopeEntry& e = scope_[i];
        if (e.b.is_label && e.b.label == t.label) return consume(i, t);
      }
      throw Error(ErrKind::DanglingLabel, t.span,
                  "label \xE2\x84\x93" + std::to_string(t.label) +
                      " is not in the wire context");
    }

    case TermKind::Lambda: {
      TypePtr h = types::hole(fresh_type_hole());
      return check_lambda(m, h);
    }

    case TermKind::App:
      return infer_app(t);

    case TermKind::UnitVal:
      return {mk::unit(t.span), types::unit(), Modality::One};
    case TermKind::BoolLit:
      return {mk::boolean(t.flag, t.span), types::boolean(), Modality::One};
    case TermKind::NatLit:
      return {mk::natlit(t.nat, t.span), types::nat(), Modality::One};

    case TermKind::Succ: {
      CheckOutput n = check(t.t1, types::nat());
      return {mk::succ(n.term, t.span), types::nat(), n.modality};
    }

    case TermKind::Lift: {
      std::vector<bool> pre = consumed_snapshot();
      CheckOutput body = infer(t.t1);
      for (size_t i = 0; i < pre.size(); ++i) {
        if (pre[i] || !scope_[i].consumed) continue;
        if (!entry_linear(resolve(scope_[i].b.type))) continue;
        throw Error(
            ErrKind::LinearityViolation, t.span,
            "lift captures the linear " +
                std::string(scope_[i].b.is_label ? "wire" : "variable") +
                " '" + scope_[i].b.display() +
                "'; lifted terms may only use parameters");
      }
      return {mk::lift(body.term, t.span),
              types::bang(ModTerm::constant(body.modality),
                          resolve(body.type)),
              Modality::One};
    }

    case TermKind::Force: {
      CheckOutput body = infer(t.t1);
      TypePtr bt = resolve(body.type);
      if (bt->kind == TypeKind::Hole) {
        throw Error(ErrKind::CannotInfer, t.span,
                    "cannot infer the type under force");
      }
      if (!is_bang(bt)) {
        throw Error(ErrKind::TypeMismatch, t.span,
                    "force needs a '!' type, found '" +
                        pretty_type(bt, &solver_) + "'");
      }
      return {mk::force(body.term, t.span), bt->a,
              body.modality & solver_.resolve(bt->mod)};
    }

    case TermKind::Box:
      return box_operand(t);

    case TermKind::Apply: {
      CheckOutput c = force_shell(infer(t.t1));
      TypePtr ct = resolve(c.type);
      if (ct->kind == TypeKind::Hole) {
        throw Error(ErrKind::CannotInfer, t.t1->span,
                    "cannot infer the type of the applied circuit");
      }
      if (ct->kind != TypeKind::Circ) {
        throw Error(ErrKind::TypeMismatch, t.t1->span,
                    "apply needs a value of type Circ(S, U), found '" +
                        pretty_type(ct, &solver_) + "'");
      }
      CheckOutput arg = check(t.t2, ct->a);
      return {mk::apply(c.term, arg.term, t.span), ct->b,
              c.modality & arg.modality};
    }

    case TermKind::BoxedCirc:
      return infer_boxed_circ(t);

    case TermKind::Pair: {
      CheckOutput a = infer(t.t1);
      CheckOutput b = infer(t.t2);
      return {mk::pair(a.term, b.term, t.span),
              types::tensor(a.type, b.type), a.modality & b.modality};
    }

    case TermKind::LetPair:
    case TermKind::LetUnit:
    case TermKind::If:
    case TermKind::NatCase:
    case TermKind::MaybeCase:
      return infer_branches(m, nullptr);

    case TermKind::Dynlift: {
      CheckOutput b = force_shell(infer(t.t1));
      TypePtr bt = resolve(b.type);
      if (bt->kind != TypeKind::Bit) {
        throw Error(ErrKind::NotABit, t.span,
                    "dynlift reads a Bit wire, found '" +
                        pretty_type(bt, &solver_) + "'");
      }
      return {mk::dynlift(b.term, t.span), types::boolean(),
              b.modality & Modality::Zero};
    }

    case TermKind::NothingC:
      throw Error(ErrKind::CannotInfer, t.span,
                  "cannot infer the element type of Nothing");

    case TermKind::JustC: {
      CheckOutput a = infer(t.t1);
      return {mk::just(a.term, t.span), types::maybe(a.type), a.modality};
    }
  }
  throw Error(ErrKind::Internal, t.span, "unhandled term kind in infer");
}

CheckOutput Checker::check(const TermPtr& m, const TypePtr& expected) {
  const Term& t = *m;
  TypePtr e = resolve(expected);
  if (!e) throw Error(ErrKind::Internal, t.span, "null expected type");

  switch (t.kind) {
    case TermKind::Lambda:
      if (is_bang(e)) return check_lift(mk::lift(m, t.span), e);
      return check_lambda(m, e);

    case TermKind::Lift:
      return check_lift(m, e);

    case TermKind::Pair: {
      if (e->kind == TypeKind::Tensor) {
        CheckOutput a = check(t.t1, e->a);
        CheckOutput b = check(t.t2, e->b);
        CheckOutput out;
        out.term = mk::pair(a.term, b.term, t.span);
        out.type = e;
        out.modality = a.modality & b.modality;
        return out;
      }
      if (is_bang(e)) return check_lift(mk::lift(m, t.span), e);
      break;
    }

    case TermKind::NothingC: {
      if (e->kind == TypeKind::Maybe) {
        return {mk::nothing(t.span), e, Modality::One};
      }
      if (is_bang(e)) return check_lift(mk::lift(m, t.span), e);
      if (e->kind != TypeKind::Hole) {
        throw Error(ErrKind::TypeMismatch, t.span,
                    "Nothing has a Maybe type, expected '" +
                        pretty_type(e, &solver_) + "'");
      }
      break;
    }

    case TermKind::JustC: {
      if (e->kind == TypeKind::Maybe) {
        CheckOutput a = check(t.t1, e->a);
        return {mk::just(a.term, t.span), e, a.modality};
      }
      if (is_bang(e)) return check_lift(mk::lift(m, t.span), e);
      break;
    }

    case TermKind::App:
      if (t.t1->kind == TermKind::Lambda && e->kind != TypeKind::Hole) {
        return let_redex(t, &e);
      }
      break;

    case TermKind::LetPair:
    case TermKind::LetUnit:
    case TermKind::If:
    case TermKind::NatCase:
    case TermKind::MaybeCase:
      if (e->kind != TypeKind::Hole) return infer_branches(m, &e);
      break;

    default:
      break;
  }

  CheckOutput out = infer(m);
  return coerce(out, e, t.span);
}

CheckOutput Checker::check_at(const TermPtr& m, Modality current,
                              const TypePtr& expected) {
  CheckOutput out = check(m, expected);
  if (out.modality != current) {
    throw Error(ErrKind::ModalityError, m->span,
                std::string("the judgment has modality ") +
                    modality_name(out.modality) + ", required exactly " +
                    modality_name(current));
  }
  return out;
}

//==============================================================================
// Whole-program checking
//==============================================================================

namespace {

// One declaration, checked to a stable modality assignment.
Declaration check_declaration(const SurfaceDecl& d, const Env& env) {
  ModalitySolver solver;
  TypePtr declared_open = open_modalities(d.declared, solver);

  bool wrapped = declared_open->kind != TypeKind::Bang;
  HoleId root_hole = 0;
  TypePtr target;
  if (wrapped) {
    root_hole = solver.fresh();
    target = types::bang(ModTerm::hole_ref(root_hole), declared_open);
  } else {
    target = declared_open;
  }

  // The stored form is always a lift-value: the equation with parameters
  // denotes lift(\p1 ... pn -> body); a parameterless equation at a declared
  // '!' type must itself produce the banged value.
  TermPtr value_term = d.body;
  for (auto it = d.params.rbegin(); it != d.params.rend(); ++it) {
    value_term = mk::lambda(*it, value_term, d.span);
  }
  if (wrapped || !d.params.empty()) {
    value_term = mk::lift(value_term, d.span);
  }

  Env work = env;
  Declaration provisional;
  provisional.name = d.name;
  provisional.declared = declared_open;
  provisional.internal = target;
  provisional.wrapped = wrapped;
  provisional.span = d.span;
  work.insert(provisional);

  // Descending fixpoint: each pass may lower holes that later premises
  // depend on, so re-check until nothing moves. Lowering is one-way, so the
  // hole count bounds the number of passes.
  CheckOutput out;
  size_t limit = solver.size() + 2;
  for (size_t pass = 0;; ++pass) {
    if (pass >= limit) {
      throw Error(ErrKind::Internal, d.span,
                  "modality solving did not stabilize");
    }
    solver.clear_dirty();
    Checker checker(work, solver);
    out = checker.check(value_term, target);
    std::vector<std::string> left = checker.unconsumed();
    if (!left.empty()) {
      throw Error(ErrKind::LinearityViolation, d.span,
                  "unused linear binding '" + left.front() + "'");
    }
    if (!solver.dirty()) break;
  }

  if (!is_value(out.term)) {
    throw Error(ErrKind::TypeMismatch, d.span,
                "a top-level definition must be a value; wrap the body in a "
                "function or lift it");
  }

  Declaration decl;
  decl.name = d.name;
  decl.declared = freeze_type(declared_open, solver);
  decl.internal = freeze_type(target, solver);
  decl.value = out.term;
  decl.wrapped = wrapped;
  decl.recursive = free_vars(out.term).count(d.name) > 0;
  decl.builtin = false;
  decl.root_modality = wrapped ? solver.value(root_hole)
                               : decl.internal->mod.value;
  decl.span = d.span;
  return decl;
}

}  // namespace

CheckedProgram check_program(const Program& p, const Env& base) {
  CheckedProgram cp;
  cp.env = base;
  for (const SurfaceDecl& d : p.decls) {
    if (cp.env.contains(d.name)) {
      cp.errors.emplace_back(ErrKind::DuplicateDeclaration, d.span,
                             "duplicate declaration of '" + d.name + "'");
      continue;
    }
    try {
      Declaration decl = check_declaration(d, cp.env);
      cp.signatures.push_back(d.name + " : " + pretty_type(decl.declared));
      cp.env.insert(std::move(decl));
    } catch (const Error& e) {
      cp.errors.push_back(e);
    }
  }
  return cp;
}

void recheck_value(const Env& env, const LabelContext& labels,
                   const TermPtr& value, const TypePtr& type) {
  ModalitySolver solver;
  Checker checker(env, solver);
  for (const auto& [l, w] : labels) checker.bind_label(l, w);
  CheckOutput out = checker.check(value, type);
  if (out.modality != Modality::One) {
    throw Error(ErrKind::ModalityError, value->span,
                "a produced value must re-check at modality 1");
  }
  std::vector<std::string> left = checker.unconsumed();
  if (!left.empty()) {
    throw Error(ErrKind::LinearityViolation, value->span,
                "the produced value leaves wire '" + left.front() +
                    "' unconsumed");
  }
}

}  // namespace pqdyn
