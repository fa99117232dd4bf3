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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "pqdyn/eval.hpp"
#include "pqdyn/prelude.hpp"
#include "pqdyn/pretty.hpp"

using namespace pqdyn;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

QuantumState random_state(size_t qubits, uint64_t seed) {
  LabelContext ctx;
  for (size_t i = 0; i < qubits; ++i) ctx.push_back({LabelId(i), WireType::Qubit});
  QuantumState q = init_state(ctx);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  double norm = 0;
  for (auto& a : q.branches[0].second.amps) {
    a = cd(n(rng), n(rng));
    norm += std::norm(a);
  }
  for (auto& a : q.branches[0].second.amps) a /= std::sqrt(norm);
  return q;
}

// Executes a term over the prelude env; requires a single sure outcome.
ExecOutcome exec1(const QuantumState& q, const TermPtr& m) {
  static Env env = load_prelude();
  LabelSupply supply(100);
  Evaluator ev(env, supply);
  Distribution<ExecOutcome> d = ev.eval_exec(q, m, EvalLimits{});
  REQUIRE(d.entries.size() == 1);
  CHECK(d.entries[0].first == doctest::Approx(1.0));
  CHECK(d.deficit == doctest::Approx(0.0));
  return d.entries[0].second;
}

TermPtr call(const std::string& name, const TermPtr& a) {
  return mk::app(mk::force(mk::var(name)), a);
}

TermPtr call(const std::string& name, const TermPtr& a, const TermPtr& b) {
  return mk::app(call(name, a), b);
}

}  // namespace

//============================================================================
// Built-in circuit constants
//============================================================================

TEST_CASE("there is one boxed constant per gate, typed by its signature") {
  Env env = builtin_constants();
  struct Row {
    const char* name;
    const char* type;
  };
  const Row rows[] = {
      {"H_circ", "Circ(Qubit, Qubit)"},
      {"QNot_circ", "Circ(Qubit, Qubit)"},
      {"ZGate_circ", "Circ(Qubit, Qubit)"},
      {"TGate_circ", "Circ(Qubit, Qubit)"},
      {"TGateInv_circ", "Circ(Qubit, Qubit)"},
      {"CNot_circ", "Circ(Qubit * Qubit, Qubit * Qubit)"},
      {"C_X_circ", "Circ(Qubit * Bit, Qubit * Bit)"},
      {"C_Z_circ", "Circ(Qubit * Bit, Qubit * Bit)"},
      {"Meas_circ", "Circ(Qubit, Bit)"},
      {"Init0_circ", "Circ(Unit, Qubit)"},
      {"Init1_circ", "Circ(Unit, Qubit)"},
      {"Discard_circ", "Circ(Bit, Unit)"},
  };
  CHECK(env.order.size() == 12);
  for (const Row& r : rows) {
    CAPTURE(r.name);
    const Declaration* d = env.find(r.name);
    REQUIRE(d != nullptr);
    CHECK(pretty_type(d->declared) == r.type);
    CHECK(d->builtin);
    CHECK(d->root_modality == Modality::One);
    REQUIRE(d->value->kind == TermKind::Lift);
    REQUIRE(d->value->t1->kind == TermKind::BoxedCirc);
  }
}

TEST_CASE("each constant holds a canonical single-gate circuit") {
  Env env = builtin_constants();
  for (const std::string& name : env.order) {
    CAPTURE(name);
    const Declaration* d = env.find(name);
    const Circuit& c = d->value->t1->circ->circuit;
    REQUIRE(c.gates.size() == 1);
    CHECK_NOTHROW(validate(c));
    CHECK(circuit_equal(c, canonical(c)));

    const Gate& g = c.gates[0];
    const GateSignature& sig = gate_signature(g.kind);
    CHECK(name == std::string(sig.name) + "_circ");
    // Operand wires are the inputs in order; Init produces wire 0.
    REQUIRE(c.inputs.size() == sig.in.size());
    for (size_t i = 0; i < c.inputs.size(); ++i) {
      CHECK(c.inputs[i].first == LabelId(i));
      CHECK(c.inputs[i].second == sig.in[i]);
      CHECK(g.wires[i] == LabelId(i));
    }
    if (sig.in.empty()) {
      CHECK(g.produced == std::vector<LabelId>{0});
      CHECK(c.outputs == LabelContext{{0, WireType::Qubit}});
    }
  }
}

//============================================================================
// The checked prelude
//============================================================================

TEST_CASE("the prelude provides typed wrappers over every constant") {
  Env env = load_prelude();
  struct Row {
    const char* name;
    const char* type;
  };
  const Row rows[] = {
      {"H", "!_1(Qubit -o_1 Qubit)"},
      {"QNot", "!_1(Qubit -o_1 Qubit)"},
      {"ZGate", "!_1(Qubit -o_1 Qubit)"},
      {"TGate", "!_1(Qubit -o_1 Qubit)"},
      {"tgate_inv", "!_1(Qubit -o_1 Qubit)"},
      {"CNot", "!_1(Qubit -o_1 Qubit -o_1 Qubit * Qubit)"},
      {"C_X", "!_1(Qubit -o_1 Bit -o_1 Qubit * Bit)"},
      {"C_Z", "!_1(Qubit -o_1 Bit -o_1 Qubit * Bit)"},
      {"Meas", "!_1(Qubit -o_1 Bit)"},
      {"Init0", "!_1(Unit -o_1 Qubit)"},
      {"Init1", "!_1(Unit -o_1 Qubit)"},
      {"Discard", "!_1(Bit -o_1 Unit)"},
      {"not", "!_1(Bool -o_1 Bool)"},
      {"or", "!_1(Bool -o_1 Bool -o_1 Bool)"},
      {"and", "!_1(Bool -o_1 Bool -o_1 Bool)"},
  };
  CHECK(env.order.size() == 12 + 15);
  for (const Row& r : rows) {
    CAPTURE(r.name);
    const Declaration* d = env.find(r.name);
    REQUIRE(d != nullptr);
    CHECK(pretty_type(d->internal) == r.type);
    CHECK_FALSE(d->builtin);
    CHECK_FALSE(d->recursive);
    CHECK(d->root_modality == Modality::One);
  }
}

TEST_CASE("single-qubit wrappers act exactly like their gate") {
  const GateKind kinds[] = {GateKind::H, GateKind::QNot, GateKind::ZGate,
                            GateKind::TGate, GateKind::TGateInv};
  const char* names[] = {"H", "QNot", "ZGate", "TGate", "tgate_inv"};
  for (size_t i = 0; i < 5; ++i) {
    CAPTURE(names[i]);
    QuantumState in = random_state(2, 40 + i);
    ExecOutcome out = exec1(in, call(names[i], mk::label(1)));
    QuantumState expect = apply_gate(in, kinds[i], {1}, {});
    CHECK(state_distance(out.state, expect) < 1e-9);
    // The wrapper hands the same wire back.
    REQUIRE(out.value->kind == TermKind::Label);
    CHECK(out.value->label == 1);
  }
}

TEST_CASE("the T wrappers invert each other") {
  QuantumState in = random_state(1, 7);
  ExecOutcome out = exec1(in, call("tgate_inv", call("TGate", mk::label(0))));
  CHECK(state_distance(out.state, in) < 1e-9);
}

TEST_CASE("CNot takes target-control and records control first") {
  QuantumState in = random_state(2, 8);
  // t = wire 0, c = wire 1.
  ExecOutcome out = exec1(in, call("CNot", mk::label(0), mk::label(1)));
  QuantumState expect = apply_gate(in, GateKind::CNot, {1, 0}, {});
  CHECK(state_distance(out.state, expect) < 1e-9);
  // Result is (target, control), in that order.
  REQUIRE(out.value->kind == TermKind::Pair);
  CHECK(out.value->t1->label == 0);
  CHECK(out.value->t2->label == 1);
}

TEST_CASE("classically controlled wrappers thread wire order through") {
  // A fair measured bit controlling X on a definite qubit.
  QuantumState q = init_state({{0, WireType::Qubit}, {1, WireType::Qubit}});
  q = apply_gate(q, GateKind::H, {1}, {});
  q = apply_gate(q, GateKind::Meas, {1}, {});
  ExecOutcome out = exec1(q, call("C_X", mk::label(0), mk::label(1)));
  QuantumState expect = apply_gate(q, GateKind::C_X, {0, 1}, {});
  CHECK(state_distance(out.state, expect) < 1e-9);
  REQUIRE(out.value->kind == TermKind::Pair);
}

TEST_CASE("Init, Meas and Discard wrappers manage the address") {
  ExecOutcome fresh = exec1(init_state({}), call("Init1", mk::unit()));
  REQUIRE(fresh.value->kind == TermKind::Label);
  REQUIRE(fresh.state.addr.size() == 1);
  CHECK(fresh.state.addr[0].first == fresh.value->label);
  CHECK(fresh.state.addr[0].second == WireType::Qubit);
  CHECK(fresh.state.branches[0].second.amps[1] == cd(1.0));

  QuantumState one = init_state({{0, WireType::Qubit}});
  one = apply_gate(one, GateKind::QNot, {0}, {});
  ExecOutcome measured = exec1(one, call("Meas", mk::label(0)));
  REQUIRE(measured.state.addr.size() == 1);
  CHECK(measured.state.addr[0].second == WireType::Bit);
  CHECK(measured.state.branches[0].second.bits == std::vector<uint8_t>{1});

  ExecOutcome gone =
      exec1(measured.state, call("Discard", mk::label(0)));
  CHECK(gone.value->kind == TermKind::UnitVal);
  CHECK(gone.state.addr.empty());
}

TEST_CASE("the Bool helpers compute the usual tables") {
  QuantumState q = init_state({});
  auto b = [](bool v) { return mk::boolean(v); };
  CHECK(pretty_term(exec1(q, call("not", b(true))).value) == "False");
  CHECK(pretty_term(exec1(q, call("not", b(false))).value) == "True");
  CHECK(pretty_term(exec1(q, call("or", b(false), b(true))).value) == "True");
  CHECK(pretty_term(exec1(q, call("or", b(false), b(false))).value) ==
        "False");
  CHECK(pretty_term(exec1(q, call("and", b(true), b(false))).value) ==
        "False");
  CHECK(pretty_term(exec1(q, call("and", b(true), b(true))).value) == "True");
}

//============================================================================
// Prelude overrides and embedded assets
//============================================================================

TEST_CASE("an override prelude extends the constants, not the default") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path();
  fs::path good = dir / "pqdyn_prelude_good.pqd";
  {
    std::ofstream out(good);
    out << "myGate : !(Qubit -> Qubit)\n"
           "myGate q = apply(H_circ, q)\n";
  }
  Env env = load_prelude(good.string());
  CHECK(env.find("myGate") != nullptr);
  CHECK(env.find("H_circ") != nullptr);
  CHECK(env.find("H") == nullptr);
  fs::remove(good);
}

TEST_CASE("unreadable or ill-typed preludes are configuration errors") {
  CHECK_THROWS_AS(load_prelude(std::string("/nonexistent/prelude.pqd")),
                  Error);
  namespace fs = std::filesystem;
  fs::path bad = fs::temp_directory_path() / "pqdyn_prelude_bad.pqd";
  {
    std::ofstream out(bad);
    out << "dup : !(Qubit -> Qubit * Qubit)\n"
           "dup q = (q, q)\n";
  }
  try {
    load_prelude(bad.string());
    FAIL("expected a configuration error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::Internal);
    CHECK(e.message().find("does not typecheck") != std::string::npos);
  }
  fs::remove(bad);
}

TEST_CASE("the embedded assets mirror the files on disk") {
  const auto& table = embedded_assets();
  CHECK(table.size() == 8);
  CHECK(embedded_asset("prelude.pqd") ==
        read_file(PQDYN_SOURCE_DIR "/lib/prelude.pqd"));
  for (const char* prog :
       {"coin.pqd", "rus.pqd", "teleport_circ.pqd", "teleport_dyn.pqd",
        "distillation.pqd", "distillation_allzero.pqd",
        "distillation_someone.pqd"}) {
    CAPTURE(prog);
    CHECK(embedded_asset(prog) ==
          read_file(std::string(PQDYN_SOURCE_DIR "/programs/") + prog));
  }
  CHECK_THROWS_AS(embedded_asset("no_such_asset.pqd"), Error);
}
