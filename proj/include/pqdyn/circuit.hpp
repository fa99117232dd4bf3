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

//============================================================================
// Circuit builder: the deterministic target of circuit-generation evaluation.
//
// A circuit is a gate list between an input label context and a derived
// output label context. Labels are stable 64-bit wire names; gates consume
// and produce typed wires. Appending one circuit onto another relabels the
// appended circuit's inputs onto live wires of the host (a positional
// bijection between two shape-identical simple terms) and freshens every
// label the appended circuit creates.
//============================================================================

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqdyn/span.hpp"
#include "pqdyn/type.hpp"

namespace pqdyn {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

using LabelId = uint64_t;

enum class WireType : uint8_t { Qubit, Bit };

const char* wire_type_name(WireType w);

// Ordered list of live wires with their types.
using LabelContext = std::vector<std::pair<LabelId, WireType>>;

// Monotone fresh-label source. Boxing scopes a fresh supply so boxed
// circuits come out with canonical labels regardless of the host run.
class LabelSupply {
 public:
  explicit LabelSupply(LabelId start = 0) : next_(start) {}
  LabelId fresh() { return next_++; }
  LabelId peek() const { return next_; }

 private:
  LabelId next_;
};

enum class GateKind : uint8_t {
  H,
  QNot,
  ZGate,
  TGate,
  TGateInv,
  CNot,     // 2-qubit, first wire is the control
  C_X,      // (Qubit, Bit) -> (Qubit, Bit), X on the qubit when the bit is 1
  C_Z,      // (Qubit, Bit) -> (Qubit, Bit)
  Meas,     // Qubit -> Bit, label persists with its type converted in place
  Init0,    // () -> Qubit, produces a globally fresh label
  Init1,
  Discard,  // Bit -> ()
};

struct GateSignature {
  GateKind kind;
  const char* name;
  std::vector<WireType> in;   // consumed/through wires, in `wires` order
  std::vector<WireType> out;  // same arity as `in` => labels persist
  bool unitary;
};

const GateSignature& gate_signature(GateKind k);
std::optional<GateKind> gate_kind_by_name(const std::string& name);

struct Gate {
  GateKind kind;
  std::vector<LabelId> wires;     // existing wires, per signature `in`
  std::vector<LabelId> produced;  // fresh wires (Init0/Init1 only)
};

struct Circuit {
  LabelContext inputs;
  std::vector<Gate> gates;
  LabelContext outputs;  // derived; see compute_outputs

  size_t gate_count() const { return gates.size(); }
};

// Identity circuit on a context.
Circuit identity(const LabelContext& ctx);

// Recomputes the live output context: inputs in order, Init appends,
// Meas converts in place, Discard removes. Throws on wire-discipline
// violations (WireNotFound, WireTypeMismatch, DanglingLabel).
LabelContext compute_outputs(const LabelContext& inputs,
                             const std::vector<Gate>& gates);

// Re-derives outputs and validates the whole gate list.
void validate(const Circuit& c);

struct AppendResult {
  Circuit circuit;
  std::map<LabelId, LabelId> relabel;  // d-label -> host label
};

// Positional bijection v' -> v between two shape-identical simple terms.
// Throws ShapeMismatch on shape disagreement, DanglingLabel on repeats.
std::map<LabelId, LabelId> interface_bijection(const TermPtr& v_prime,
                                               const TermPtr& v);

// append(d, c, v', v): v' is d's input interface term, v a value over live
// wires of c with the same shape. d's gates are relabeled through the
// positional bijection v' -> v, every label d introduces is freshened from
// `supply`, and the result is c's gates followed by d's.
AppendResult append_full(const Circuit& d, const Circuit& c,
                         const TermPtr& v_prime, const TermPtr& v,
                         LabelSupply& supply);

Circuit append(const Circuit& d, const Circuit& c, const TermPtr& v_prime,
               const TermPtr& v, LabelSupply& supply);

// gen(S): fresh labels arranged in the shape of the simple type S, plus the
// label context enumerating them in order.
std::pair<TermPtr, LabelContext> gen(const TypePtr& simple, LabelSupply& supply,
                                     const Span& at = {});

// Canonical relabeling: inputs numbered first in order, then produced labels
// in gate order. Two circuits are equal up to relabeling iff their canonical
// forms compare equal.
Circuit canonical(const Circuit& c);
bool circuit_equal(const Circuit& x, const Circuit& y);

// JSON export/import (stable field order) and the one-gate-per-line text
// form. Init gates render their produced wire in the text form.
std::string export_circuit_json(const Circuit& c);
Circuit import_circuit_json(const std::string& text);
std::string export_circuit_text(const Circuit& c);

}  // namespace pqdyn
