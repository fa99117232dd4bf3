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

#include "pqdyn/pretty.hpp"

#include <sstream>

#include "pqdyn/circuit.hpp"

namespace pqdyn {

namespace {

// Type ranks: 1 arrow, 2 tensor, 3 prefix (!/Maybe), 4 atom.
std::string render_type(const TypePtr& t, int min_rank,
                        const ModalitySolver* solver);

std::string mod_suffix(const ModTerm& m, const ModalitySolver* solver) {
  if (m.tag == ModTerm::Tag::Const) {
    return std::string("_") + modality_name(m.value);
  }
  if (m.tag == ModTerm::Tag::Hole && solver) {
    return std::string("_") + modality_name(solver->value(m.hole));
  }
  return "";
}

std::string render_type(const TypePtr& t, int min_rank,
                        const ModalitySolver* solver) {
  std::string out;
  int rank = 4;
  if (!t) return "<null>";
  switch (t->kind) {
    case TypeKind::Unit:
      out = "Unit";
      break;
    case TypeKind::Qubit:
      out = "Qubit";
      break;
    case TypeKind::Bit:
      out = "Bit";
      break;
    case TypeKind::Bool:
      out = "Bool";
      break;
    case TypeKind::Nat:
      out = "Nat";
      break;
    case TypeKind::Bang:
      out = "!" + mod_suffix(t->mod, solver) + render_type(t->a, 3, solver);
      rank = 3;
      break;
    case TypeKind::Arrow: {
      std::string suffix = mod_suffix(t->mod, solver);
      std::string arrow = suffix.empty() ? "->" : "-o" + suffix;
      out = render_type(t->a, 2, solver) + " " + arrow + " " +
            render_type(t->b, 1, solver);
      rank = 1;
      break;
    }
    case TypeKind::Circ:
      out = "Circ(" + render_type(t->a, 1, solver) + ", " +
            render_type(t->b, 1, solver) + ")";
      break;
    case TypeKind::Tensor:
      out = render_type(t->a, 3, solver) + " * " +
            render_type(t->b, 2, solver);
      rank = 2;
      break;
    case TypeKind::Maybe:
      out = "Maybe " + render_type(t->a, 3, solver);
      rank = 3;
      break;
    case TypeKind::Hole:
      out = "?" + std::to_string(t->hole);
      break;
  }
  if (rank < min_rank) return "(" + out + ")";
  return out;
}

// Term ranks: 0 binder forms, 2 application, 3 atom.
std::string render_term(const TermPtr& t, int min_rank);

std::string render_nat(const TermPtr& t) {
  // Fold literal successor chains into one numeral.
  uint64_t add = 0;
  TermPtr cur = t;
  while (cur && cur->kind == TermKind::Succ) {
    ++add;
    cur = cur->t1;
  }
  if (cur && cur->kind == TermKind::NatLit) {
    return std::to_string(cur->nat + add);
  }
  return "";
}

std::string render_term(const TermPtr& t, int min_rank) {
  if (!t) return "<null>";
  std::string out;
  int rank = 3;
  switch (t->kind) {
    case TermKind::Var:
      out = t->name;
      break;
    case TermKind::Label:
      out = "\xE2\x84\x93" + std::to_string(t->label);
      break;
    case TermKind::Lambda:
      out = "\\" + t->name + " -> " + render_term(t->t1, 0);
      rank = 0;
      break;
    case TermKind::App:
      out = render_term(t->t1, 2) + " " + render_term(t->t2, 3);
      rank = 2;
      break;
    case TermKind::UnitVal:
      out = "()";
      break;
    case TermKind::BoolLit:
      out = t->flag ? "True" : "False";
      break;
    case TermKind::NatLit:
      out = std::to_string(t->nat);
      break;
    case TermKind::Succ: {
      std::string folded = render_nat(t);
      if (!folded.empty()) {
        out = folded;
      } else {
        out = "S " + render_term(t->t1, 3);
        rank = 2;
      }
      break;
    }
    case TermKind::Lift:
      out = "lift " + render_term(t->t1, 3);
      rank = 2;
      break;
    case TermKind::Force:
      out = "force " + render_term(t->t1, 3);
      rank = 2;
      break;
    case TermKind::Box:
      out = "box " + render_type(t->ty, 4, nullptr) + " " +
            render_term(t->t1, 3);
      rank = 2;
      break;
    case TermKind::Apply:
      out = "apply(" + render_term(t->t1, 0) + ", " + render_term(t->t2, 0) +
            ")";
      break;
    case TermKind::BoxedCirc: {
      std::ostringstream os;
      os << "<circ " << render_term(t->circ->input_shape, 0) << " => "
         << render_term(t->circ->output_shape, 0) << ", "
         << t->circ->circuit.gate_count() << " gate"
         << (t->circ->circuit.gate_count() == 1 ? "" : "s") << ">";
      out = os.str();
      break;
    }
    case TermKind::Pair: {
      out = "(" + render_term(t->t1, 0);
      TermPtr rest = t->t2;
      while (rest && rest->kind == TermKind::Pair) {
        out += ", " + render_term(rest->t1, 0);
        rest = rest->t2;
      }
      out += ", " + render_term(rest, 0) + ")";
      break;
    }
    case TermKind::LetPair:
      out = "let (" + t->name + ", " + t->name2 +
            ") = " + render_term(t->t1, 0) + " in " + render_term(t->t2, 0);
      rank = 0;
      break;
    case TermKind::LetUnit:
      out = "let () = " + render_term(t->t1, 0) + " in " +
            render_term(t->t2, 0);
      rank = 0;
      break;
    case TermKind::Dynlift:
      out = "dynlift " + render_term(t->t1, 3);
      rank = 2;
      break;
    case TermKind::If:
      out = "if " + render_term(t->t1, 0) + " then " + render_term(t->t2, 0) +
            " else " + render_term(t->t3, 0);
      rank = 0;
      break;
    case TermKind::NatCase:
      out = "case " + render_term(t->t1, 0) + " of { Z -> " +
            render_term(t->t2, 0) + "; S " + t->name + " -> " +
            render_term(t->t3, 0) + " }";
      break;
    case TermKind::NothingC:
      out = "Nothing";
      break;
    case TermKind::JustC:
      out = "Just " + render_term(t->t1, 3);
      rank = 2;
      break;
    case TermKind::MaybeCase:
      out = "case " + render_term(t->t1, 0) + " of { Nothing -> " +
            render_term(t->t2, 0) + "; Just " + t->name + " -> " +
            render_term(t->t3, 0) + " }";
      break;
  }
  if (rank < min_rank) return "(" + out + ")";
  return out;
}

}  // namespace

std::string pretty_type(const TypePtr& t, const ModalitySolver* solver) {
  return render_type(t, 0, solver);
}

std::string pretty_term(const TermPtr& t) { return render_term(t, 0); }

}  // namespace pqdyn
