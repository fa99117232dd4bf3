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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "pqdyn/circuit.hpp"
#include "pqdyn/term.hpp"

using namespace pqdyn;

namespace {

Gate g(GateKind k, std::vector<LabelId> wires, std::vector<LabelId> produced = {}) {
  Gate out;
  out.kind = k;
  out.wires = std::move(wires);
  out.produced = std::move(produced);
  return out;
}

}  // namespace

//============================================================================
// Gate signatures
//============================================================================

TEST_CASE("the signature table") {
  struct Row {
    GateKind k;
    const char* name;
    size_t in, out;
    bool unitary;
  };
  const Row rows[] = {
      {GateKind::H, "H", 1, 1, true},
      {GateKind::QNot, "QNot", 1, 1, true},
      {GateKind::ZGate, "ZGate", 1, 1, true},
      {GateKind::TGate, "TGate", 1, 1, true},
      {GateKind::TGateInv, "TGateInv", 1, 1, true},
      {GateKind::CNot, "CNot", 2, 2, true},
      {GateKind::C_X, "C_X", 2, 2, false},
      {GateKind::C_Z, "C_Z", 2, 2, false},
      {GateKind::Meas, "Meas", 1, 1, false},
      {GateKind::Init0, "Init0", 0, 1, false},
      {GateKind::Init1, "Init1", 0, 1, false},
      {GateKind::Discard, "Discard", 1, 0, false},
  };
  for (const Row& r : rows) {
    const GateSignature& sig = gate_signature(r.k);
    CHECK(sig.kind == r.k);
    CHECK(std::string(sig.name) == r.name);
    CHECK(sig.in.size() == r.in);
    CHECK(sig.out.size() == r.out);
    CHECK(sig.unitary == r.unitary);
    CHECK(gate_kind_by_name(r.name) == r.k);
  }
  CHECK_FALSE(gate_kind_by_name("Hadamard").has_value());

  // Wire types of the mixed gates.
  CHECK(gate_signature(GateKind::Meas).in[0] == WireType::Qubit);
  CHECK(gate_signature(GateKind::Meas).out[0] == WireType::Bit);
  CHECK(gate_signature(GateKind::C_X).in[1] == WireType::Bit);
  CHECK(gate_signature(GateKind::Discard).in[0] == WireType::Bit);
}

//============================================================================
// Output derivation and validation
//============================================================================

TEST_CASE("outputs thread inputs through init, meas, and discard") {
  LabelContext in = {{0, WireType::Qubit}, {1, WireType::Qubit}};
  std::vector<Gate> gates = {
      g(GateKind::H, {0}),
      g(GateKind::Init0, {}, {2}),
      g(GateKind::Meas, {1}),
      g(GateKind::CNot, {0, 2}),
  };
  LabelContext out = compute_outputs(in, gates);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == std::pair<LabelId, WireType>{0, WireType::Qubit});
  CHECK(out[1] == std::pair<LabelId, WireType>{1, WireType::Bit});  // in place
  CHECK(out[2] == std::pair<LabelId, WireType>{2, WireType::Qubit});

  gates.push_back(g(GateKind::Discard, {1}));
  out = compute_outputs(in, gates);
  REQUIRE(out.size() == 2);
  CHECK(out[0].first == 0);
  CHECK(out[1].first == 2);
}

TEST_CASE("wire discipline violations") {
  LabelContext in = {{0, WireType::Qubit}};

  // Unknown wire.
  CHECK_THROWS_AS(compute_outputs(in, {g(GateKind::H, {5})}), Error);
  try {
    compute_outputs(in, {g(GateKind::H, {5})});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::WireNotFound);
  }

  // Gate on a dead wire.
  try {
    compute_outputs(in, {g(GateKind::Meas, {0}), g(GateKind::Discard, {0}),
                         g(GateKind::H, {0})});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::WireNotFound);
  }

  // Qubit gate on a bit wire.
  try {
    compute_outputs(in, {g(GateKind::Meas, {0}), g(GateKind::H, {0})});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::WireTypeMismatch);
  }

  // Init reusing a live label.
  try {
    compute_outputs(in, {g(GateKind::Init0, {}, {0})});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::DanglingLabel);
  }

  // A control and target may not coincide.
  LabelContext two = {{0, WireType::Qubit}, {1, WireType::Qubit}};
  CHECK_THROWS_AS(compute_outputs(two, {g(GateKind::CNot, {0, 0})}), Error);
}

TEST_CASE("identity and validate") {
  LabelContext ctx = {{3, WireType::Qubit}, {7, WireType::Bit}};
  Circuit id = identity(ctx);
  CHECK(id.inputs == ctx);
  CHECK(id.gates.empty());
  CHECK(id.outputs == ctx);
  validate(id);

  Circuit broken = id;
  broken.outputs.pop_back();
  CHECK_THROWS_AS(validate(broken), Error);
}

//============================================================================
// Interface bijections and append
//============================================================================

TEST_CASE("interface bijection matches positionally, by shape") {
  TermPtr vp = mk::pair(mk::label(0), mk::pair(mk::label(1), mk::unit()));
  TermPtr v = mk::pair(mk::label(10), mk::pair(mk::label(20), mk::unit()));
  auto bij = interface_bijection(vp, v);
  CHECK(bij == std::map<LabelId, LabelId>{{0, 10}, {1, 20}});

  // Shape mismatch.
  CHECK_THROWS_AS(interface_bijection(mk::pair(mk::label(0), mk::label(1)),
                                      mk::label(10)),
                  Error);
  // Repeated label on one side.
  CHECK_THROWS_AS(interface_bijection(mk::pair(mk::label(0), mk::label(0)),
                                      mk::pair(mk::label(1), mk::label(2))),
                  Error);
}

TEST_CASE("append relabels the appended circuit onto live host wires") {
  // Host: one qubit 0, already has an H.
  Circuit host = identity({{0, WireType::Qubit}});
  host.gates.push_back(g(GateKind::H, {0}));
  host.outputs = compute_outputs(host.inputs, host.gates);

  // Appended: canonical one-qubit circuit that inits an ancilla and
  // crosses it with its input.
  Circuit d = identity({{0, WireType::Qubit}});
  d.gates.push_back(g(GateKind::Init0, {}, {1}));
  d.gates.push_back(g(GateKind::CNot, {0, 1}));
  d.outputs = compute_outputs(d.inputs, d.gates);

  LabelSupply supply(100);
  AppendResult r = append_full(d, host, mk::label(0), mk::label(0), supply);

  REQUIRE(r.circuit.gates.size() == 3);
  CHECK(r.circuit.gates[0].kind == GateKind::H);
  CHECK(r.circuit.gates[1].kind == GateKind::Init0);
  // The ancilla was freshened from the host supply, not copied.
  LabelId ancilla = r.circuit.gates[1].produced[0];
  CHECK(ancilla == 100);
  CHECK(r.circuit.gates[2].wires == std::vector<LabelId>{0, ancilla});
  CHECK(r.relabel.at(1) == ancilla);
  CHECK(r.relabel.at(0) == 0);

  REQUIRE(r.circuit.outputs.size() == 2);
  validate(r.circuit);
}

TEST_CASE("append rejects shape and wire-type disagreement") {
  Circuit host = identity({{0, WireType::Qubit}, {1, WireType::Bit}});
  Circuit d = identity({{0, WireType::Qubit}});
  LabelSupply supply(10);

  // d expects one qubit; handing it the bit wire is a type mismatch.
  CHECK_THROWS_AS(
      append_full(d, host, mk::label(0), mk::label(1), supply), Error);
  // Pair shape against single label.
  CHECK_THROWS_AS(append_full(d, host, mk::label(0),
                              mk::pair(mk::label(0), mk::label(1)), supply),
                  Error);
  // A live host wire, but the shapes must still be simple terms.
  CHECK_THROWS_AS(
      append_full(d, host, mk::var("x"), mk::label(0), supply), Error);
}

TEST_CASE("gen lays labels out in type shape") {
  LabelSupply supply(0);
  auto [shape, ctx] = gen(
      types::tensor(types::qubit(), types::tensor(types::bit(), types::unit())),
      supply);
  CHECK(simple_labels(shape) == std::vector<LabelId>{0, 1});
  REQUIRE(ctx.size() == 2);
  CHECK(ctx[0] == std::pair<LabelId, WireType>{0, WireType::Qubit});
  CHECK(ctx[1] == std::pair<LabelId, WireType>{1, WireType::Bit});

  auto [ushape, uctx] = gen(types::unit(), supply);
  CHECK(ushape->kind == TermKind::UnitVal);
  CHECK(uctx.empty());

  CHECK_THROWS_AS(gen(types::boolean(), supply), Error);
}

//============================================================================
// Canonical form and equality
//============================================================================

TEST_CASE("canonical renumbers inputs first, then produced labels") {
  Circuit c;
  c.inputs = {{42, WireType::Qubit}};
  c.gates = {g(GateKind::Init0, {}, {99}), g(GateKind::CNot, {42, 99}),
             g(GateKind::Meas, {99})};
  c.outputs = compute_outputs(c.inputs, c.gates);

  Circuit k = canonical(c);
  CHECK(k.inputs == LabelContext{{0, WireType::Qubit}});
  CHECK(k.gates[0].produced == std::vector<LabelId>{1});
  CHECK(k.gates[1].wires == std::vector<LabelId>{0, 1});
  CHECK(k.outputs == LabelContext{{0, WireType::Qubit}, {1, WireType::Bit}});

  // Idempotent.
  CHECK(circuit_equal(canonical(k), k));
}

TEST_CASE("circuit equality is equality up to relabeling") {
  Circuit a;
  a.inputs = {{5, WireType::Qubit}};
  a.gates = {g(GateKind::H, {5})};
  a.outputs = compute_outputs(a.inputs, a.gates);

  Circuit b;
  b.inputs = {{9, WireType::Qubit}};
  b.gates = {g(GateKind::H, {9})};
  b.outputs = compute_outputs(b.inputs, b.gates);

  CHECK(circuit_equal(a, b));

  b.gates[0].kind = GateKind::QNot;
  CHECK_FALSE(circuit_equal(a, b));
}

//============================================================================
// Serialization
//============================================================================

TEST_CASE("json round-trip preserves the circuit exactly") {
  Circuit c;
  c.inputs = {{0, WireType::Qubit}, {1, WireType::Bit}};
  c.gates = {g(GateKind::H, {0}), g(GateKind::Init1, {}, {2}),
             g(GateKind::C_X, {2, 1}), g(GateKind::Meas, {0})};
  c.outputs = compute_outputs(c.inputs, c.gates);

  std::string text = export_circuit_json(c);
  Circuit back = import_circuit_json(text);
  CHECK(back.inputs == c.inputs);
  CHECK(back.outputs == c.outputs);
  REQUIRE(back.gates.size() == c.gates.size());
  for (size_t i = 0; i < c.gates.size(); ++i) {
    CHECK(back.gates[i].kind == c.gates[i].kind);
    CHECK(back.gates[i].wires == c.gates[i].wires);
    CHECK(back.gates[i].produced == c.gates[i].produced);
  }

  // Export is stable.
  CHECK(export_circuit_json(c) == text);
}

TEST_CASE("json import rejects malformed circuits") {
  CHECK_THROWS_AS(import_circuit_json("not json"), Error);
  CHECK_THROWS_AS(import_circuit_json("{}"), Error);
  CHECK_THROWS_AS(import_circuit_json(
                      R"({"inputs":[],"gates":[{"name":"Bogus","wires":[]}],"outputs":[]})"),
                  Error);
}

TEST_CASE("text export, one gate per line") {
  Circuit c;
  c.inputs = {{0, WireType::Qubit}};
  c.gates = {g(GateKind::Init0, {}, {1}), g(GateKind::CNot, {0, 1}),
             g(GateKind::Meas, {1}), g(GateKind::Discard, {1})};
  c.outputs = compute_outputs(c.inputs, c.gates);

  CHECK(export_circuit_text(c) ==
        "inputs: 0:Qubit\n"
        "  Init0 -> 1\n"
        "  CNot 0 1\n"
        "  Meas 1\n"
        "  Discard 1\n"
        "outputs: 0:Qubit\n");
}
