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
// Dual big-step evaluators.
//
// Circuit generation: deterministic, over configurations (C, M); apply
// appends onto the circuit under construction, box runs a nested generation
// against a fresh label supply, dynlift is an error.
//
// Circuit execution: distribution-valued, over configurations (Q, M);
// apply folds gates onto the quantum state, dynlift reads a bit wire and is
// the only probabilistic rule. Probabilities multiply across premises and
// unexplored mass (depth- or threshold-pruned paths) accumulates as deficit.
//============================================================================

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pqdyn/program.hpp"
#include "pqdyn/qsim.hpp"
#include "pqdyn/term.hpp"

namespace pqdyn {

struct EvalLimits {
  // Unfoldings allowed per self-recursive declaration along one evaluation
  // path. Generation mode does not count unfoldings.
  int max_depth = 64;
  // Maximum tolerated deficit; exceeding it raises LimitExceeded.
  double mass_cutoff = 1e-6;
  // Paths whose absolute mass falls below this are pruned into the deficit.
  double prune_threshold = 0.0;
};

struct GenResult {
  Circuit circuit;
  TermPtr value;
};

struct ExecOutcome {
  QuantumState state;
  TermPtr value;
};

class Evaluator {
 public:
  Evaluator(const Env& env, LabelSupply& supply) : env_(env), supply_(supply) {}

  // Deterministic circuit generation from configuration (c, m).
  GenResult eval_gen(const Circuit& c, const TermPtr& m);

  // Full distribution over outcomes from configuration (q, m).
  Distribution<ExecOutcome> eval_exec(const QuantumState& q, const TermPtr& m,
                                      const EvalLimits& limits);

  // One sampled trajectory (rng drives dynlift).
  ExecOutcome eval_sample(const QuantumState& q, const TermPtr& m,
                          const EvalLimits& limits, std::mt19937_64& rng);

 private:
  struct Path;  // exec-internal: mass, state, value, unfold budget

  const Env& env_;
  LabelSupply& supply_;

  TermPtr resolve_name(const Term& t, std::map<std::string, int>* uses,
                       const EvalLimits* limits, bool* pruned);
  std::vector<Path> exec(Path in, const TermPtr& m, const EvalLimits& limits,
                         double& deficit);
  TermPtr sample(QuantumState& q, const TermPtr& m, const EvalLimits& limits,
                 std::mt19937_64& rng, std::map<std::string, int>& uses);
};

//============================================================================
// Entry-point driver and run reports.
//============================================================================

enum class RunMode { Dist, Sample };

struct RunOptions {
  RunMode mode = RunMode::Dist;
  uint64_t seed = 0;
  uint64_t shots = 1000;
  EvalLimits limits{};
  unsigned jobs = 1;
};

struct RunReport {
  RunMode mode;
  // Rendered value, probability (dist) or count (sample), optional state
  // dump for outcomes with live wires.
  struct Outcome {
    std::string value;
    double prob = 0.0;
    uint64_t count = 0;
    std::string state;  // empty when the outcome state has no wires
  };
  std::vector<Outcome> outcomes;
  double deficit = 0.0;
  std::optional<uint64_t> seed;  // sample mode
  bool deterministic = false;    // entry has modality 1
  std::string json() const;
};

// Evaluates `force entry` from the empty state. Entries with modality 1 are
// asserted to produce a single outcome.
RunReport run_main(const Env& env, const std::string& entry,
                   const RunOptions& options);

// Per-shot generator: shot i of a run draws from splitmix(seed, i), so shot
// outcomes are independent of --jobs and of each other.
std::mt19937_64 shot_rng(uint64_t seed, uint64_t shot);

// Boxes a declaration: the declaration must have type Circ(S,U) or
// !_1(S -o_1 U); returns the generated circuit.
Circuit box_declaration(const Env& env, const std::string& name);

}  // namespace pqdyn
