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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "pqdyn/eval.hpp"
#include "pqdyn/parser.hpp"
#include "pqdyn/prelude.hpp"
#include "pqdyn/pretty.hpp"
#include "pqdyn/typecheck.hpp"

using namespace pqdyn;

namespace {

Env load_program(const std::string& name) {
  std::ifstream in(std::string(PQDYN_SOURCE_DIR "/programs/") + name);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  CheckedProgram p =
      check_program(parse_program(buf.str(), name), load_prelude());
  for (const Error& e : p.errors) {
    // teleport_dyn.pqd deliberately ships one failing declaration.
    CHECK(e.kind() == ErrKind::ModalityError);
  }
  return p.env;
}

Env check_snippet(const std::string& src) {
  CheckedProgram p =
      check_program(parse_program(src, "<test>"), load_prelude());
  for (const Error& e : p.errors) FAIL(e.render());
  return p.env;
}

Distribution<ExecOutcome> exec_entry(const Env& env, const std::string& entry,
                                     EvalLimits limits = {}) {
  LabelSupply supply(0);
  Evaluator ev(env, supply);
  return ev.eval_exec(init_state({}), mk::force(mk::var(entry)), limits);
}

// Mass of the entries whose rendered value matches.
double mass_of(const Distribution<ExecOutcome>& d, const std::string& shown) {
  double m = 0;
  for (const auto& [p, oc] : d.entries)
    if (pretty_term(oc.value) == shown) m += p;
  return m;
}

const Gate* nth(const Circuit& c, size_t i) { return &c.gates[i]; }

}  // namespace

//============================================================================
// Circuit generation
//============================================================================

TEST_CASE("the boxed teleport circuit, gate by gate") {
  Env env = load_program("teleport_circ.pqd");
  Circuit c = box_declaration(env, "boxTele");

  CHECK(c.inputs == LabelContext{{0, WireType::Qubit}});
  CHECK(c.outputs == LabelContext{{2, WireType::Qubit}});
  REQUIRE(c.gates.size() == 12);

  struct Expect {
    GateKind k;
    std::vector<LabelId> wires;
    std::vector<LabelId> produced;
  };
  const Expect golden[12] = {
      {GateKind::Init0, {}, {1}},  {GateKind::Init0, {}, {2}},
      {GateKind::H, {1}, {}},      {GateKind::CNot, {1, 2}, {}},
      {GateKind::CNot, {0, 1}, {}}, {GateKind::H, {0}, {}},
      {GateKind::Meas, {1}, {}},   {GateKind::Meas, {0}, {}},
      {GateKind::C_X, {2, 1}, {}}, {GateKind::C_Z, {2, 0}, {}},
      {GateKind::Discard, {1}, {}}, {GateKind::Discard, {0}, {}},
  };
  for (size_t i = 0; i < 12; ++i) {
    CAPTURE(i);
    CHECK(nth(c, i)->kind == golden[i].k);
    CHECK(nth(c, i)->wires == golden[i].wires);
    CHECK(nth(c, i)->produced == golden[i].produced);
  }
}

TEST_CASE("boxing the builder and boxing its Circ declaration agree") {
  Env env = load_program("teleport_circ.pqd");
  Circuit via_circ = box_declaration(env, "boxTele");
  Circuit via_bang = box_declaration(env, "tele1");
  CHECK(circuit_equal(via_circ, via_bang));
}

TEST_CASE("generation is reproducible") {
  Env env = load_program("teleport_circ.pqd");
  Circuit a = box_declaration(env, "boxTele");
  Circuit b = box_declaration(env, "boxTele");
  CHECK(export_circuit_json(a) == export_circuit_json(b));
}

TEST_CASE("box_declaration rejects unboxable declarations") {
  Env env = load_program("teleport_dyn.pqd");
  // tele2 may lift dynamically.
  CHECK_THROWS_AS(box_declaration(env, "tele2"), Error);
  try {
    box_declaration(env, "tele2");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::ModalityError);
    CHECK(e.message().find("dynamic lifting") != std::string::npos);
  }
  // test : Bool is not a circuit builder at all.
  CHECK_THROWS_AS(box_declaration(env, "test"), Error);
  CHECK_THROWS_AS(box_declaration(env, "nonexistent"), Error);
}

TEST_CASE("nested boxing starts from canonical labels") {
  // A block that boxes inside a larger generation still produces labels
  // counted from zero in the inner circuit.
  Env env = check_snippet(
      "flip : !(Qubit -> Qubit)\n"
      "flip q = QNot q\n"
      "outer : Circ(Qubit, Qubit)\n"
      "outer =\n"
      "  let u = Init0 ()\n"
      "      b = Meas u\n"
      "      _ = Discard b\n"
      "  in box Qubit flip\n");
  Circuit c = box_declaration(env, "outer");
  REQUIRE(c.gates.size() == 1);
  CHECK(c.inputs == LabelContext{{0, WireType::Qubit}});
  CHECK(c.gates[0].kind == GateKind::QNot);
  CHECK(c.gates[0].wires == std::vector<LabelId>{0});
}

TEST_CASE("dynlift during generation is an error") {
  Env env = load_program("coin.pqd");
  LabelSupply supply(10);
  Evaluator ev(env, supply);
  Circuit host = identity({{0, WireType::Bit}});
  // The checker would never let this through at modality 1; drive the
  // generator directly to pin the runtime guard.
  CHECK_THROWS_AS(ev.eval_gen(host, mk::dynlift(mk::label(0))), Error);
  try {
    ev.eval_gen(host, mk::dynlift(mk::label(0)));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::DynliftAtGenerationTime);
  }
}

TEST_CASE("generation applies boxed circuits by appending") {
  Env env = check_snippet(
      "prep : !(Qubit -> Qubit)\n"
      "prep q = H (QNot q)\n"
      "twice : Circ(Qubit, Qubit)\n"
      "twice =\n"
      "  box Qubit (lift (\\q -> \n"
      "    let c = box Qubit prep\n"
      "        q = apply(c, q)\n"
      "    in apply(c, q)))\n");
  Circuit c = box_declaration(env, "twice");
  REQUIRE(c.gates.size() == 4);
  CHECK(c.gates[0].kind == GateKind::QNot);
  CHECK(c.gates[1].kind == GateKind::H);
  CHECK(c.gates[2].kind == GateKind::QNot);
  CHECK(c.gates[3].kind == GateKind::H);
  for (const Gate& gate : c.gates)
    CHECK(gate.wires == std::vector<LabelId>{0});
}

//============================================================================
// Execution: distributions
//============================================================================

TEST_CASE("a fair coin") {
  Env env = load_program("coin.pqd");
  Distribution<ExecOutcome> d = exec_entry(env, "coin");
  REQUIRE(d.entries.size() == 2);
  CHECK(mass_of(d, "False") == doctest::Approx(0.5));
  CHECK(mass_of(d, "True") == doctest::Approx(0.5));
  CHECK(d.deficit == doctest::Approx(0.0));
  CHECK(d.mass() == doctest::Approx(1.0));
}

TEST_CASE("teleporting |0> through the dynamic protocol is deterministic") {
  Env env = load_program("teleport_dyn.pqd");
  Distribution<ExecOutcome> d = exec_entry(env, "test");
  // Four lifting paths, all corrected back to |0>, merge into one outcome.
  REQUIRE(d.entries.size() == 1);
  CHECK(pretty_term(d.entries[0].second.value) == "False");
  CHECK(d.entries[0].first == doctest::Approx(1.0));
  CHECK(d.deficit == doctest::Approx(0.0));
}

TEST_CASE("probabilities and deficit always account for all mass") {
  for (const char* prog : {"coin.pqd", "teleport_dyn.pqd"}) {
    Env env = load_program(prog);
    const char* entry = std::string(prog) == "coin.pqd" ? "coin" : "test";
    Distribution<ExecOutcome> d = exec_entry(env, entry);
    CHECK(d.mass() + d.deficit == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("repeat-until-success masses by unfolding depth") {
  Env env = load_program("rus.pqd");
  for (int k = 1; k <= 4; ++k) {
    EvalLimits limits;
    limits.max_depth = k;
    limits.mass_cutoff = 1.0;
    Distribution<ExecOutcome> d = exec_entry(env, "rusRun", limits);
    // Success mass 1 - (3/8)^k, all merged on one outcome; the rest pruned.
    // Path masses are binary fractions, so only the final summation rounds
    // and the tolerance can sit near machine epsilon.
    REQUIRE(d.entries.size() == 1);
    double fail = 1.0;
    for (int i = 0; i < k; ++i) fail *= 3.0 / 8.0;
    CHECK(d.entries[0].first == doctest::Approx(1.0 - fail).epsilon(1e-12));
    CHECK(d.deficit == doctest::Approx(fail).epsilon(1e-12));
  }
}

TEST_CASE("the successful branch applies V3 up to a global phase") {
  Env env = load_program("rus.pqd");
  EvalLimits limits;
  limits.max_depth = 1;
  limits.mass_cutoff = 1.0;
  Distribution<ExecOutcome> d = exec_entry(env, "rusRun", limits);
  REQUIRE(d.entries.size() == 1);
  const QuantumState& out = d.entries[0].second.state;
  REQUIRE(out.qubit_count() == 1);

  // (I + 2iZ)/sqrt(5) |0> = (1+2i)/sqrt(5) |0>.
  QuantumState expect = init_state({{0, WireType::Qubit}});
  expect.branches[0].second.amps = {cd(1.0, 2.0) / std::sqrt(5.0), cd(0.0)};
  CHECK(state_distance(out, expect) < 1e-9);
}

TEST_CASE("exceeding the tolerated deficit raises LimitExceeded") {
  Env env = load_program("rus.pqd");
  EvalLimits limits;
  limits.max_depth = 1;
  limits.mass_cutoff = 0.1;  // depth-1 deficit is 0.375
  LabelSupply supply(0);
  Evaluator ev(env, supply);
  CHECK_THROWS_AS(
      ev.eval_exec(init_state({}), mk::force(mk::var("rusRun")), limits),
      Error);
  try {
    LabelSupply s2(0);
    Evaluator e2(env, s2);
    e2.eval_exec(init_state({}), mk::force(mk::var("rusRun")), limits);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::LimitExceeded);
  }
}

TEST_CASE("only self-recursive declarations consume unfolding budget") {
  // Deep non-recursive call chains are free.
  Env env = check_snippet(
      "f4 : !(Qubit -> Qubit)\nf4 q = H q\n"
      "f3 : !(Qubit -> Qubit)\nf3 q = f4 (f4 q)\n"
      "f2 : !(Qubit -> Qubit)\nf2 q = f3 (f3 q)\n"
      "f1 : !(Qubit -> Qubit)\nf1 q = f2 (f2 q)\n"
      "main : Bool\nmain = dynlift (Meas (f1 (Init0 ())))\n");
  EvalLimits limits;
  limits.max_depth = 1;
  Distribution<ExecOutcome> d = exec_entry(env, "main", limits);
  CHECK(d.mass() == doctest::Approx(1.0));
  CHECK(d.deficit == doctest::Approx(0.0));

  // A recursive countdown needs budget equal to its depth.
  Env rec = check_snippet(
      "burn : !(Nat -> Unit)\n"
      "burn n =\n"
      "  case n of\n"
      "    Z -> ()\n"
      "    S k -> burn k\n"
      "main : Unit\nmain = burn 10\n");
  EvalLimits tight;
  tight.max_depth = 5;
  tight.mass_cutoff = 1.0;
  Distribution<ExecOutcome> pruned = exec_entry(rec, "main", tight);
  CHECK(pruned.entries.empty());
  CHECK(pruned.deficit == doctest::Approx(1.0));

  EvalLimits enough;
  enough.max_depth = 20;
  Distribution<ExecOutcome> ok = exec_entry(rec, "main", enough);
  REQUIRE(ok.entries.size() == 1);
  CHECK(ok.deficit == doctest::Approx(0.0));
}

TEST_CASE("paths below the prune threshold move to the deficit") {
  Env env = load_program("teleport_dyn.pqd");
  // The four correction paths each carry mass 1/4.
  EvalLimits coarse;
  coarse.prune_threshold = 0.3;
  coarse.mass_cutoff = 1.0;
  Distribution<ExecOutcome> d = exec_entry(env, "test", coarse);
  CHECK(d.entries.empty());
  CHECK(d.deficit == doctest::Approx(1.0));

  EvalLimits fine;
  fine.prune_threshold = 0.2;
  fine.mass_cutoff = 1.0;
  Distribution<ExecOutcome> e = exec_entry(env, "test", fine);
  CHECK(e.mass() == doctest::Approx(1.0));
}

TEST_CASE("distillation accepts exactly the all-zero syndrome") {
  Env env = load_program("distillation.pqd");
  EvalLimits limits;
  limits.mass_cutoff = 1.0;
  Distribution<ExecOutcome> d = exec_entry(env, "runDistill", limits);
  CHECK(mass_of(d, "Nothing") == doctest::Approx(15.0 / 16.0));
  double just = 0;
  for (const auto& [p, oc] : d.entries)
    if (oc.value->kind == TermKind::JustC) just += p;
  CHECK(just == doctest::Approx(1.0 / 16.0));
  CHECK(d.deficit == doctest::Approx(0.0));
}

TEST_CASE("stuck terms are reported, not crashed on") {
  Env env = load_program("coin.pqd");
  LabelSupply supply(0);
  Evaluator ev(env, supply);
  EvalLimits limits;
  // Applying a boolean as a function.
  CHECK_THROWS_AS(ev.eval_exec(init_state({}),
                               mk::app(mk::boolean(true), mk::unit()), limits),
                  Error);
  // Unbound name.
  CHECK_THROWS_AS(
      ev.eval_exec(init_state({}), mk::force(mk::var("missing")), limits),
      Error);
}

//============================================================================
// Execution: sampling
//============================================================================

TEST_CASE("sampling follows the distribution and is seed-deterministic") {
  Env env = load_program("coin.pqd");
  RunOptions opt;
  opt.mode = RunMode::Sample;
  opt.seed = 12345;
  opt.shots = 4000;
  RunReport a = run_main(env, "coin", opt);
  RunReport b = run_main(env, "coin", opt);
  CHECK(a.json() == b.json());

  uint64_t heads = 0;
  for (const auto& oc : a.outcomes)
    if (oc.value == "True") heads = oc.count;
  // 3 sigma around 2000 at sigma = sqrt(4000 * 0.25) ~ 31.6.
  CHECK(heads > uint64_t(1905));
  CHECK(heads < uint64_t(2095));
}

TEST_CASE("per-shot generators decorrelate shots, not threads") {
  Env env = load_program("coin.pqd");
  RunOptions opt;
  opt.mode = RunMode::Sample;
  opt.seed = 7;
  opt.shots = 500;
  opt.jobs = 1;
  RunReport serial = run_main(env, "coin", opt);
  opt.jobs = 4;
  RunReport parallel = run_main(env, "coin", opt);
  CHECK(serial.json() == parallel.json());
}

TEST_CASE("a sampled trajectory of the retry loop succeeds eventually") {
  Env env = load_program("rus.pqd");
  LabelSupply supply(0);
  Evaluator ev(env, supply);
  EvalLimits limits;  // default depth 64: failure odds (3/8)^64
  std::mt19937_64 rng = shot_rng(99, 0);
  ExecOutcome oc =
      ev.eval_sample(init_state({}), mk::force(mk::var("rusRun")), limits, rng);
  QuantumState expect = init_state({{0, WireType::Qubit}});
  expect.branches[0].second.amps = {cd(1.0, 2.0) / std::sqrt(5.0), cd(0.0)};
  CHECK(state_distance(oc.state, expect) < 1e-9);
}

TEST_CASE("sample mode hits the unfolding limit instead of spinning") {
  Env rec = check_snippet(
      "loop : !(Nat -> Unit)\n"
      "loop n =\n"
      "  case n of\n"
      "    Z -> ()\n"
      "    S k -> loop k\n"
      "main : Unit\nmain = loop 100\n");
  LabelSupply supply(0);
  Evaluator ev(rec, supply);
  EvalLimits limits;
  limits.max_depth = 3;
  std::mt19937_64 rng = shot_rng(0, 0);
  CHECK_THROWS_AS(
      ev.eval_sample(init_state({}), mk::force(mk::var("main")), limits, rng),
      Error);
}

//============================================================================
// Run reports
//============================================================================

TEST_CASE("dist reports carry probabilities, sample reports carry counts") {
  Env env = load_program("coin.pqd");
  RunOptions opt;
  RunReport dist = run_main(env, "coin", opt);
  CHECK(dist.mode == RunMode::Dist);
  REQUIRE(dist.outcomes.size() == 2);
  CHECK(dist.outcomes[0].prob == doctest::Approx(0.5));
  CHECK_FALSE(dist.deterministic);
  CHECK(dist.json().find("\"prob\"") != std::string::npos);
  CHECK(dist.json().find("\"seed\"") == std::string::npos);

  opt.mode = RunMode::Sample;
  opt.shots = 16;
  opt.seed = 3;
  RunReport sample = run_main(env, "coin", opt);
  uint64_t total = 0;
  for (const auto& oc : sample.outcomes) total += oc.count;
  CHECK(total == 16);
  CHECK(sample.json().find("\"count\"") != std::string::npos);
  CHECK(sample.json().find("\"seed\": 3") != std::string::npos);
}

TEST_CASE("a modality-1 entry reports deterministic") {
  Env env = check_snippet("main : Bool\nmain = force (lift True)\n");
  RunReport r = run_main(env, "main", RunOptions{});
  CHECK(r.deterministic);
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes[0].value == "True");
  CHECK(r.outcomes[0].prob == doctest::Approx(1.0));
}

TEST_CASE("outcome states with live wires are reported") {
  Env env = check_snippet("main : Qubit\nmain = Init1 ()\n");
  RunReport r = run_main(env, "main", RunOptions{});
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes[0].state.find("amps=[0+0i, 1+0i]") != std::string::npos);
}
