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
// Convex-branch statevector simulator.
//
// A quantum state is a convex combination of branches over one shared wire
// address: each branch fixes every classical bit and holds a complex
// amplitude vector over the qubit wires. Measurement is the only operation
// that splits branches; reading a bit partitions the branches by its value
// and renormalizes. Unitaries, initializations and discards act uniformly
// on all branches, so the convex structure is preserved by construction.
//============================================================================

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pqdyn/circuit.hpp"
#include "pqdyn/term.hpp"

namespace pqdyn {

using cd = std::complex<double>;

// Amplitudes are indexed with the first qubit of the address as the most
// significant bit. `bits` is aligned with the bit wires of the address in
// order.
struct StateBranch {
  std::vector<uint8_t> bits;
  std::vector<cd> amps;
};

struct QuantumState {
  LabelContext addr;
  std::vector<std::pair<double, StateBranch>> branches;

  size_t qubit_count() const;
  size_t bit_count() const;
  int qubit_index(LabelId l) const;  // -1 if not a qubit wire
  int bit_index(LabelId l) const;    // -1 if not a bit wire
  double total_mass() const;
};

// Measurement outcomes below this probability are dropped (the remaining
// branches renormalize); read outcomes below it are omitted.
inline constexpr double kMeasEpsilon = 1e-12;

// |0...0> on the qubit wires, all bit wires 0, a single branch of mass 1.
QuantumState init_state(const LabelContext& ctx);

// Applies one gate. Init0/Init1 append `produced[0]` as a fresh qubit wire;
// Meas converts its wire to a bit in place and may split each branch in two;
// Discard removes a bit wire; unitaries and bit-controlled gates leave the
// address untouched.
QuantumState apply_gate(const QuantumState& q, GateKind kind,
                        const std::vector<LabelId>& wires,
                        const std::vector<LabelId>& produced);

struct ReadOutcome {
  double prob;
  QuantumState state;  // bit wire removed, branches renormalized
  bool value;
};

// read(Q, l): probabilistic readout of bit wire l. Outcomes with zero mass
// are omitted; the remaining outcome probabilities sum to 1.
std::vector<ReadOutcome> read(const QuantumState& q, LabelId l);

struct OperateResult {
  QuantumState state;
  std::map<LabelId, LabelId> relabel;  // circuit label -> state label
};

// operate(c, q, v', v): relabel c through the positional bijection v' -> v
// (fresh labels for wires c introduces) and fold its gates onto q.
OperateResult operate_full(const Circuit& c, const QuantumState& q,
                           const TermPtr& v_prime, const TermPtr& v,
                           LabelSupply& supply);
QuantumState operate(const Circuit& c, const QuantumState& q,
                     const TermPtr& v_prime, const TermPtr& v,
                     LabelSupply& supply);

// Coalesces branches with equal bits and amplitude vectors equal up to a
// global phase (tolerance 1e-9), then orders branches canonically (by bit
// assignment, then creation index).
QuantumState merge_branches(const QuantumState& q);

// Distance between states over positionally matching addresses: branches are
// canonically ordered and matched pairwise; the result is the max over
// matches of |p1-p2| + min_phase ||a1 - e^{i theta} a2||_2. Addresses whose
// wire types disagree positionally raise AddressMismatch; a branch-count
// mismatch yields +infinity.
double state_distance(const QuantumState& a, const QuantumState& b);

// Debug dump: one line per branch, "p=<prob> bits={l:v,...} amps=[...]".
std::string dump_state(const QuantumState& q);

//============================================================================
// Discrete distributions with an explicit deficit (unexplored mass).
//============================================================================

template <typename X>
struct Distribution {
  std::vector<std::pair<double, X>> entries;
  double deficit = 0.0;

  double mass() const {
    double m = 0;
    for (const auto& [p, x] : entries) m += p;
    return m;
  }
};

// Coalesces equivalent entries (zero-probability entries are dropped,
// deficit is preserved). First-occurrence order is kept.
template <typename X, typename Eq>
Distribution<X> merge(const Distribution<X>& d, Eq&& eq) {
  Distribution<X> out;
  out.deficit = d.deficit;
  for (const auto& [p, x] : d.entries) {
    if (p <= 0.0) continue;
    bool found = false;
    for (auto& [q, y] : out.entries) {
      if (eq(x, y)) {
        q += p;
        found = true;
        break;
      }
    }
    if (!found) out.entries.push_back({p, x});
  }
  return out;
}

}  // namespace pqdyn
