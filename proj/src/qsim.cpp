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

#include "pqdyn/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace pqdyn {

size_t QuantumState::qubit_count() const {
  size_t n = 0;
  for (const auto& [l, w] : addr) {
    (void)l;
    if (w == WireType::Qubit) ++n;
  }
  return n;
}

size_t QuantumState::bit_count() const { return addr.size() - qubit_count(); }

int QuantumState::qubit_index(LabelId l) const {
  int idx = 0;
  for (const auto& [lab, w] : addr) {
    if (w != WireType::Qubit) continue;
    if (lab == l) return idx;
    ++idx;
  }
  return -1;
}

int QuantumState::bit_index(LabelId l) const {
  int idx = 0;
  for (const auto& [lab, w] : addr) {
    if (w != WireType::Bit) continue;
    if (lab == l) return idx;
    ++idx;
  }
  return -1;
}

double QuantumState::total_mass() const {
  double m = 0;
  for (const auto& [p, b] : branches) {
    (void)b;
    m += p;
  }
  return m;
}

QuantumState init_state(const LabelContext& ctx) {
  QuantumState q;
  q.addr = ctx;
  StateBranch br;
  br.bits.assign(q.bit_count(), 0);
  br.amps.assign(size_t{1} << q.qubit_count(), cd{0, 0});
  br.amps[0] = cd{1, 0};
  q.branches.emplace_back(1.0, std::move(br));
  return q;
}

namespace {

// 2x2 unitary on qubit position k of an n-qubit amplitude vector
// (position 0 is the most significant index bit).
void apply_1q(std::vector<cd>& amps, size_t n, size_t k, cd m00, cd m01,
              cd m10, cd m11) {
  size_t mask = size_t{1} << (n - 1 - k);
  for (size_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    cd a0 = amps[i];
    cd a1 = amps[i | mask];
    amps[i] = m00 * a0 + m01 * a1;
    amps[i | mask] = m10 * a0 + m11 * a1;
  }
}

void apply_x(std::vector<cd>& amps, size_t n, size_t k) {
  size_t mask = size_t{1} << (n - 1 - k);
  for (size_t i = 0; i < amps.size(); ++i) {
    if (!(i & mask)) std::swap(amps[i], amps[i | mask]);
  }
}

void apply_z(std::vector<cd>& amps, size_t n, size_t k) {
  size_t mask = size_t{1} << (n - 1 - k);
  for (size_t i = 0; i < amps.size(); ++i) {
    if (i & mask) amps[i] = -amps[i];
  }
}

int required_qubit(const QuantumState& q, LabelId l, const char* gate) {
  int k = q.qubit_index(l);
  if (k >= 0) return k;
  if (q.bit_index(l) >= 0) {
    throw Error(ErrKind::WireTypeMismatch, Span{},
                std::string(gate) + " needs a Qubit on wire " +
                    std::to_string(l) + ", found Bit");
  }
  throw Error(ErrKind::WireNotFound, Span{},
              std::string(gate) + " on wire " + std::to_string(l) +
                  " which is not in the state");
}

int required_bit(const QuantumState& q, LabelId l, const char* gate) {
  int k = q.bit_index(l);
  if (k >= 0) return k;
  if (q.qubit_index(l) >= 0) {
    throw Error(ErrKind::WireTypeMismatch, Span{},
                std::string(gate) + " needs a Bit on wire " +
                    std::to_string(l) + ", found Qubit");
  }
  throw Error(ErrKind::WireNotFound, Span{},
              std::string(gate) + " on wire " + std::to_string(l) +
                  " which is not in the state");
}

}  // namespace

QuantumState apply_gate(const QuantumState& q, GateKind kind,
                        const std::vector<LabelId>& wires,
                        const std::vector<LabelId>& produced) {
  const GateSignature& sig = gate_signature(kind);
  if (wires.size() != sig.in.size()) {
    throw Error(ErrKind::ShapeMismatch, Span{},
                std::string(sig.name) + " expects " +
                    std::to_string(sig.in.size()) + " wire(s)");
  }
  QuantumState out;
  out.addr = q.addr;
  size_t n = q.qubit_count();

  switch (kind) {
    case GateKind::H:
    case GateKind::QNot:
    case GateKind::ZGate:
    case GateKind::TGate:
    case GateKind::TGateInv: {
      size_t k = static_cast<size_t>(required_qubit(q, wires[0], sig.name));
      const double s = 1.0 / std::numbers::sqrt2;
      const cd t = std::polar(1.0, std::numbers::pi / 4);
      out.branches = q.branches;
      for (auto& [p, br] : out.branches) {
        (void)p;
        switch (kind) {
          case GateKind::H:
            apply_1q(br.amps, n, k, s, s, s, -s);
            break;
          case GateKind::QNot:
            apply_x(br.amps, n, k);
            break;
          case GateKind::ZGate:
            apply_z(br.amps, n, k);
            break;
          case GateKind::TGate:
            apply_1q(br.amps, n, k, 1, 0, 0, t);
            break;
          default:
            apply_1q(br.amps, n, k, 1, 0, 0, std::conj(t));
            break;
        }
      }
      return out;
    }

    case GateKind::CNot: {
      size_t c = static_cast<size_t>(required_qubit(q, wires[0], sig.name));
      size_t t = static_cast<size_t>(required_qubit(q, wires[1], sig.name));
      size_t cmask = size_t{1} << (n - 1 - c);
      size_t tmask = size_t{1} << (n - 1 - t);
      out.branches = q.branches;
      for (auto& [p, br] : out.branches) {
        (void)p;
        for (size_t i = 0; i < br.amps.size(); ++i) {
          if ((i & cmask) && !(i & tmask)) {
            std::swap(br.amps[i], br.amps[i | tmask]);
          }
        }
      }
      return out;
    }

    case GateKind::C_X:
    case GateKind::C_Z: {
      size_t k = static_cast<size_t>(required_qubit(q, wires[0], sig.name));
      size_t b = static_cast<size_t>(required_bit(q, wires[1], sig.name));
      out.branches = q.branches;
      for (auto& [p, br] : out.branches) {
        (void)p;
        if (!br.bits[b]) continue;
        if (kind == GateKind::C_X) {
          apply_x(br.amps, n, k);
        } else {
          apply_z(br.amps, n, k);
        }
      }
      return out;
    }

    case GateKind::Meas: {
      size_t k = static_cast<size_t>(required_qubit(q, wires[0], sig.name));
      for (auto& [lab, w] : out.addr) {
        if (lab == wires[0]) w = WireType::Bit;
      }
      size_t bit_pos = static_cast<size_t>(out.bit_index(wires[0]));
      size_t mask = size_t{1} << (n - 1 - k);
      for (const auto& [p, br] : q.branches) {
        double pv[2] = {0, 0};
        for (size_t i = 0; i < br.amps.size(); ++i) {
          pv[(i & mask) ? 1 : 0] += std::norm(br.amps[i]);
        }
        double total = 0;
        for (int v = 0; v < 2; ++v) {
          if (pv[v] >= kMeasEpsilon) total += pv[v];
        }
        for (int v = 0; v < 2; ++v) {
          if (pv[v] < kMeasEpsilon) continue;
          StateBranch nb;
          nb.bits = br.bits;
          nb.bits.insert(nb.bits.begin() + static_cast<long>(bit_pos),
                         static_cast<uint8_t>(v));
          nb.amps.assign(br.amps.size() >> 1, cd{0, 0});
          double norm = std::sqrt(pv[v]);
          size_t j = 0;
          for (size_t i = 0; i < br.amps.size(); ++i) {
            if (((i & mask) ? 1 : 0) != v) continue;
            nb.amps[j++] = br.amps[i] / norm;
          }
          out.branches.emplace_back(p * pv[v] / total, std::move(nb));
        }
      }
      return out;
    }

    case GateKind::Init0:
    case GateKind::Init1: {
      LabelId fresh = produced.at(0);
      if (q.qubit_index(fresh) >= 0 || q.bit_index(fresh) >= 0) {
        throw Error(ErrKind::DanglingLabel, Span{},
                    std::string(sig.name) + " produces label " +
                        std::to_string(fresh) + " which is not fresh");
      }
      out.addr.emplace_back(fresh, WireType::Qubit);
      bool one = kind == GateKind::Init1;
      for (const auto& [p, br] : q.branches) {
        StateBranch nb;
        nb.bits = br.bits;
        nb.amps.assign(br.amps.size() << 1, cd{0, 0});
        // The appended qubit is last in address order, hence the least
        // significant index bit.
        for (size_t i = 0; i < br.amps.size(); ++i) {
          nb.amps[(i << 1) | (one ? 1 : 0)] = br.amps[i];
        }
        out.branches.emplace_back(p, std::move(nb));
      }
      return out;
    }

    case GateKind::Discard: {
      size_t b = static_cast<size_t>(required_bit(q, wires[0], sig.name));
      out.addr.erase(std::find_if(
          out.addr.begin(), out.addr.end(),
          [&](const auto& e) { return e.first == wires[0]; }));
      for (const auto& [p, br] : q.branches) {
        StateBranch nb;
        nb.bits = br.bits;
        nb.bits.erase(nb.bits.begin() + static_cast<long>(b));
        nb.amps = br.amps;
        out.branches.emplace_back(p, std::move(nb));
      }
      return out;
    }
  }
  throw Error(ErrKind::Internal, Span{}, "unhandled gate kind");
}

std::vector<ReadOutcome> read(const QuantumState& q, LabelId l) {
  int bi = required_bit(q, l, "read");
  size_t b = static_cast<size_t>(bi);

  LabelContext naddr;
  for (const auto& e : q.addr) {
    if (e.first != l) naddr.push_back(e);
  }

  std::vector<ReadOutcome> outcomes;
  for (int v = 0; v < 2; ++v) {
    double mass = 0;
    for (const auto& [p, br] : q.branches) {
      if (br.bits[b] == v) mass += p;
    }
    if (mass <= kMeasEpsilon) continue;
    ReadOutcome oc;
    oc.prob = mass;
    oc.value = v == 1;
    oc.state.addr = naddr;
    for (const auto& [p, br] : q.branches) {
      if (br.bits[b] != v) continue;
      StateBranch nb;
      nb.bits = br.bits;
      nb.bits.erase(nb.bits.begin() + static_cast<long>(b));
      nb.amps = br.amps;
      oc.state.branches.emplace_back(p / mass, std::move(nb));
    }
    outcomes.push_back(std::move(oc));
  }
  return outcomes;
}

OperateResult operate_full(const Circuit& c, const QuantumState& q,
                           const TermPtr& v_prime, const TermPtr& v,
                           LabelSupply& supply) {
  std::map<LabelId, LabelId> relabel = interface_bijection(v_prime, v);
  for (const auto& [l, w] : c.inputs) {
    auto it = relabel.find(l);
    if (it == relabel.end()) {
      throw Error(ErrKind::ShapeMismatch, Span{},
                  "circuit input " + std::to_string(l) +
                      " is not covered by the interface term");
    }
    int idx = w == WireType::Qubit ? q.qubit_index(it->second)
                                   : q.bit_index(it->second);
    if (idx < 0) {
      if (q.qubit_index(it->second) >= 0 || q.bit_index(it->second) >= 0) {
        throw Error(ErrKind::WireTypeMismatch, Span{},
                    "wire " + std::to_string(it->second) + " is not a " +
                        wire_type_name(w));
      }
      throw Error(ErrKind::WireNotFound, Span{},
                  "wire " + std::to_string(it->second) +
                      " is not in the state");
    }
  }

  OperateResult res;
  res.state = q;
  for (const auto& g : c.gates) {
    std::vector<LabelId> wires;
    wires.reserve(g.wires.size());
    for (LabelId w : g.wires) {
      auto it = relabel.find(w);
      if (it == relabel.end()) {
        throw Error(ErrKind::Internal, Span{},
                    "circuit gate reads unknown wire " + std::to_string(w));
      }
      wires.push_back(it->second);
    }
    std::vector<LabelId> produced;
    produced.reserve(g.produced.size());
    for (LabelId p : g.produced) {
      LabelId f = supply.fresh();
      relabel.emplace(p, f);
      produced.push_back(f);
    }
    res.state = apply_gate(res.state, g.kind, wires, produced);
  }
  res.relabel = std::move(relabel);
  return res;
}

QuantumState operate(const Circuit& c, const QuantumState& q,
                     const TermPtr& v_prime, const TermPtr& v,
                     LabelSupply& supply) {
  return operate_full(c, q, v_prime, v, supply).state;
}

namespace {

// Squared L2 distance between a1 and a2 minimized over a global phase on a2:
// ||a1||^2 + ||a2||^2 - 2|<a2, a1>|.
double phase_free_sq(const std::vector<cd>& a1, const std::vector<cd>& a2) {
  cd inner{0, 0};
  for (size_t i = 0; i < a1.size(); ++i) inner += std::conj(a2[i]) * a1[i];
  // Evaluate at the minimizing phase termwise. The closed form
  // ||a1||^2 + ||a2||^2 - 2|<a2,a1>| is the same number but cancels
  // catastrophically for nearly identical states (a ~1e-8 noise floor);
  // the termwise sum bottoms out near machine epsilon instead.
  cd phase = std::abs(inner) > 0 ? inner / std::abs(inner) : cd(1.0);
  double d2 = 0;
  for (size_t i = 0; i < a1.size(); ++i) d2 += std::norm(a1[i] - phase * a2[i]);
  return d2;
}

}  // namespace

QuantumState merge_branches(const QuantumState& q) {
  QuantumState out;
  out.addr = q.addr;
  for (const auto& [p, br] : q.branches) {
    bool merged = false;
    for (auto& [op, ob] : out.branches) {
      if (ob.bits != br.bits || ob.amps.size() != br.amps.size()) continue;
      if (std::sqrt(phase_free_sq(ob.amps, br.amps)) <= 1e-9) {
        op += p;
        merged = true;
        break;
      }
    }
    if (!merged) out.branches.emplace_back(p, br);
  }
  std::stable_sort(out.branches.begin(), out.branches.end(),
                   [](const auto& a, const auto& b) {
                     return a.second.bits < b.second.bits;
                   });
  return out;
}

double state_distance(const QuantumState& a, const QuantumState& b) {
  if (a.addr.size() != b.addr.size()) {
    throw Error(ErrKind::AddressMismatch, Span{},
                "states have different wire counts");
  }
  for (size_t i = 0; i < a.addr.size(); ++i) {
    if (a.addr[i].second != b.addr[i].second) {
      throw Error(ErrKind::AddressMismatch, Span{},
                  "states disagree on the type of wire position " +
                      std::to_string(i));
    }
  }
  QuantumState ca = merge_branches(a);
  QuantumState cb = merge_branches(b);
  if (ca.branches.size() != cb.branches.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double dist = 0;
  for (size_t i = 0; i < ca.branches.size(); ++i) {
    const auto& [p1, b1] = ca.branches[i];
    const auto& [p2, b2] = cb.branches[i];
    if (b1.bits != b2.bits || b1.amps.size() != b2.amps.size()) {
      return std::numeric_limits<double>::infinity();
    }
    double d = std::abs(p1 - p2) + std::sqrt(phase_free_sq(b1.amps, b2.amps));
    dist = std::max(dist, d);
  }
  return dist;
}

std::string dump_state(const QuantumState& q) {
  std::ostringstream os;
  bool first_branch = true;
  for (const auto& [p, br] : q.branches) {
    if (!first_branch) os << '\n';
    first_branch = false;
    os << "p=" << p << " bits={";
    size_t bi = 0;
    bool first = true;
    for (const auto& [l, w] : q.addr) {
      if (w != WireType::Bit) continue;
      if (!first) os << ',';
      first = false;
      os << l << ':' << int(br.bits[bi++]);
    }
    os << "} amps=[";
    for (size_t i = 0; i < br.amps.size(); ++i) {
      if (i) os << ", ";
      os << br.amps[i].real();
      double im = br.amps[i].imag();
      os << (im < 0 ? "-" : "+") << std::abs(im) << 'i';
    }
    os << "]";
  }
  return os.str();
}

}  // namespace pqdyn
