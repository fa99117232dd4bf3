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

#include "pqdyn/circuit.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pqdyn/term.hpp"

namespace pqdyn {

const char* wire_type_name(WireType w) {
  return w == WireType::Qubit ? "Qubit" : "Bit";
}

namespace {

constexpr WireType Q = WireType::Qubit;
constexpr WireType B = WireType::Bit;

const std::array<GateSignature, 12>& signature_table() {
  static const std::array<GateSignature, 12> table = {{
      {GateKind::H, "H", {Q}, {Q}, true},
      {GateKind::QNot, "QNot", {Q}, {Q}, true},
      {GateKind::ZGate, "ZGate", {Q}, {Q}, true},
      {GateKind::TGate, "TGate", {Q}, {Q}, true},
      {GateKind::TGateInv, "TGateInv", {Q}, {Q}, true},
      {GateKind::CNot, "CNot", {Q, Q}, {Q, Q}, true},
      {GateKind::C_X, "C_X", {Q, B}, {Q, B}, false},
      {GateKind::C_Z, "C_Z", {Q, B}, {Q, B}, false},
      {GateKind::Meas, "Meas", {Q}, {B}, false},
      {GateKind::Init0, "Init0", {}, {Q}, false},
      {GateKind::Init1, "Init1", {}, {Q}, false},
      {GateKind::Discard, "Discard", {B}, {}, false},
  }};
  return table;
}

[[noreturn]] void wire_error(ErrKind kind, const std::string& msg) {
  throw Error(kind, Span{}, msg);
}

}  // namespace

const GateSignature& gate_signature(GateKind k) {
  return signature_table()[static_cast<size_t>(k)];
}

std::optional<GateKind> gate_kind_by_name(const std::string& name) {
  for (const auto& sig : signature_table()) {
    if (name == sig.name) return sig.kind;
  }
  return std::nullopt;
}

Circuit identity(const LabelContext& ctx) {
  Circuit c;
  c.inputs = ctx;
  c.outputs = ctx;
  return c;
}

LabelContext compute_outputs(const LabelContext& inputs,
                             const std::vector<Gate>& gates) {
  LabelContext live = inputs;
  std::set<LabelId> seen;
  for (const auto& [l, w] : inputs) {
    (void)w;
    if (!seen.insert(l).second) {
      wire_error(ErrKind::DanglingLabel,
                 "duplicate input label " + std::to_string(l));
    }
  }

  auto find_live = [&live](LabelId l) {
    return std::find_if(live.begin(), live.end(),
                        [l](const auto& e) { return e.first == l; });
  };

  for (const auto& g : gates) {
    const GateSignature& sig = gate_signature(g.kind);
    if (g.wires.size() != sig.in.size()) {
      wire_error(ErrKind::ShapeMismatch,
                 std::string(sig.name) + " expects " +
                     std::to_string(sig.in.size()) + " wire(s), got " +
                     std::to_string(g.wires.size()));
    }
    size_t produced_arity = sig.out.size() >= sig.in.size()
                                ? sig.out.size() - sig.in.size()
                                : 0;
    if (g.produced.size() != produced_arity) {
      wire_error(ErrKind::ShapeMismatch,
                 std::string(sig.name) + " produces " +
                     std::to_string(produced_arity) + " wire(s), got " +
                     std::to_string(g.produced.size()));
    }
    for (size_t i = 0; i < g.wires.size(); ++i) {
      for (size_t j = i + 1; j < g.wires.size(); ++j) {
        if (g.wires[i] == g.wires[j]) {
          wire_error(ErrKind::DanglingLabel,
                     std::string(sig.name) + " uses wire " +
                         std::to_string(g.wires[i]) + " twice");
        }
      }
    }
    // Consumed/through wires must be live with the declared type.
    for (size_t i = 0; i < g.wires.size(); ++i) {
      auto it = find_live(g.wires[i]);
      if (it == live.end()) {
        wire_error(ErrKind::WireNotFound,
                   std::string(sig.name) + " on wire " +
                       std::to_string(g.wires[i]) + " which is not live");
      }
      if (it->second != sig.in[i]) {
        wire_error(ErrKind::WireTypeMismatch,
                   std::string(sig.name) + " needs a " +
                       wire_type_name(sig.in[i]) + " on wire " +
                       std::to_string(g.wires[i]) + ", found " +
                       wire_type_name(it->second));
      }
    }
    // Apply. Through-gates of equal arity keep labels; Meas converts the
    // label's type in place; Discard drops; Init appends a fresh label.
    if (g.kind == GateKind::Meas) {
      find_live(g.wires[0])->second = B;
    } else if (g.kind == GateKind::Discard) {
      live.erase(find_live(g.wires[0]));
    }
    for (size_t i = 0; i < g.produced.size(); ++i) {
      LabelId l = g.produced[i];
      if (!seen.insert(l).second) {
        wire_error(ErrKind::DanglingLabel,
                   std::string(sig.name) + " produces label " +
                       std::to_string(l) + " which is not fresh");
      }
      live.emplace_back(l, sig.out[sig.in.size() + i]);
    }
  }
  return live;
}

void validate(const Circuit& c) {
  LabelContext derived = compute_outputs(c.inputs, c.gates);
  if (derived != c.outputs) {
    wire_error(ErrKind::Internal,
               "stored circuit outputs disagree with the derived live set");
  }
}

namespace {

// Positional bijection between two shape-identical simple terms.
void build_bijection(const TermPtr& vp, const TermPtr& v,
                     std::map<LabelId, LabelId>& out,
                     std::set<LabelId>& targets) {
  if (!vp || !v) wire_error(ErrKind::Internal, "null interface term");
  if (vp->kind == TermKind::UnitVal && v->kind == TermKind::UnitVal) return;
  if (vp->kind == TermKind::Label && v->kind == TermKind::Label) {
    if (!out.emplace(vp->label, v->label).second) {
      wire_error(ErrKind::DanglingLabel,
                 "interface label " + std::to_string(vp->label) +
                     " occurs twice");
    }
    if (!targets.insert(v->label).second) {
      wire_error(ErrKind::DanglingLabel,
                 "target label " + std::to_string(v->label) + " occurs twice");
    }
    return;
  }
  if (vp->kind == TermKind::Pair && v->kind == TermKind::Pair) {
    build_bijection(vp->t1, v->t1, out, targets);
    build_bijection(vp->t2, v->t2, out, targets);
    return;
  }
  wire_error(ErrKind::ShapeMismatch,
             "appended circuit interface does not match the argument shape");
}

}  // namespace

std::map<LabelId, LabelId> interface_bijection(const TermPtr& v_prime,
                                               const TermPtr& v) {
  std::map<LabelId, LabelId> out;
  std::set<LabelId> targets;
  build_bijection(v_prime, v, out, targets);
  return out;
}

AppendResult append_full(const Circuit& d, const Circuit& c,
                         const TermPtr& v_prime, const TermPtr& v,
                         LabelSupply& supply) {
  std::map<LabelId, LabelId> relabel = interface_bijection(v_prime, v);

  // Every input of d must be covered and must land on a live wire of c of
  // the same type.
  LabelContext live = c.outputs;
  auto find_live = [&live](LabelId l) {
    return std::find_if(live.begin(), live.end(),
                        [l](const auto& e) { return e.first == l; });
  };
  for (const auto& [l, w] : d.inputs) {
    auto it = relabel.find(l);
    if (it == relabel.end()) {
      wire_error(ErrKind::ShapeMismatch,
                 "circuit input " + std::to_string(l) +
                     " is not covered by the interface term");
    }
    auto lv = find_live(it->second);
    if (lv == live.end()) {
      wire_error(ErrKind::WireNotFound, "wire " + std::to_string(it->second) +
                                            " is not live in the host circuit");
    }
    if (lv->second != w) {
      wire_error(ErrKind::WireTypeMismatch,
                 "wire " + std::to_string(it->second) + " is a " +
                     wire_type_name(lv->second) + ", expected " +
                     wire_type_name(w));
    }
  }

  AppendResult res;
  res.circuit.inputs = c.inputs;
  res.circuit.gates = c.gates;
  res.circuit.gates.reserve(c.gates.size() + d.gates.size());
  for (const auto& g : d.gates) {
    Gate h;
    h.kind = g.kind;
    for (LabelId w : g.wires) {
      auto it = relabel.find(w);
      if (it == relabel.end()) {
        wire_error(ErrKind::Internal,
                   "appended gate reads unknown wire " + std::to_string(w));
      }
      h.wires.push_back(it->second);
    }
    for (LabelId p : g.produced) {
      LabelId f = supply.fresh();
      if (!relabel.emplace(p, f).second) {
        wire_error(ErrKind::DanglingLabel,
                   "appended circuit produces label " + std::to_string(p) +
                       " twice");
      }
      h.produced.push_back(f);
    }
    res.circuit.gates.push_back(std::move(h));
  }
  res.circuit.outputs = compute_outputs(res.circuit.inputs, res.circuit.gates);
  res.relabel = std::move(relabel);
  return res;
}

Circuit append(const Circuit& d, const Circuit& c, const TermPtr& v_prime,
               const TermPtr& v, LabelSupply& supply) {
  return append_full(d, c, v_prime, v, supply).circuit;
}

std::pair<TermPtr, LabelContext> gen(const TypePtr& simple, LabelSupply& supply,
                                     const Span& at) {
  if (!simple) throw Error(ErrKind::Internal, at, "gen on a null type");
  switch (simple->kind) {
    case TypeKind::Unit:
      return {mk::unit(at), {}};
    case TypeKind::Qubit: {
      LabelId l = supply.fresh();
      return {mk::label(l, at), {{l, WireType::Qubit}}};
    }
    case TypeKind::Bit: {
      LabelId l = supply.fresh();
      return {mk::label(l, at), {{l, WireType::Bit}}};
    }
    case TypeKind::Tensor: {
      auto [ta, ca] = gen(simple->a, supply, at);
      auto [tb, cb] = gen(simple->b, supply, at);
      ca.insert(ca.end(), cb.begin(), cb.end());
      return {mk::pair(ta, tb, at), std::move(ca)};
    }
    default:
      throw Error(ErrKind::ShapeMismatch, at,
                  "cannot generate wires: type is not built from Unit, "
                  "Qubit, Bit, and tensors");
  }
}

Circuit canonical(const Circuit& c) {
  std::map<LabelId, LabelId> map;
  LabelId next = 0;
  for (const auto& [l, w] : c.inputs) {
    (void)w;
    map.emplace(l, next++);
  }
  for (const auto& g : c.gates) {
    for (LabelId p : g.produced) map.emplace(p, next++);
  }
  Circuit out;
  out.inputs.reserve(c.inputs.size());
  for (const auto& [l, w] : c.inputs) out.inputs.emplace_back(map.at(l), w);
  out.gates.reserve(c.gates.size());
  for (const auto& g : c.gates) {
    Gate h;
    h.kind = g.kind;
    for (LabelId w : g.wires) h.wires.push_back(map.at(w));
    for (LabelId p : g.produced) h.produced.push_back(map.at(p));
    out.gates.push_back(std::move(h));
  }
  out.outputs = compute_outputs(out.inputs, out.gates);
  return out;
}

bool circuit_equal(const Circuit& x, const Circuit& y) {
  Circuit cx = canonical(x);
  Circuit cy = canonical(y);
  if (cx.inputs != cy.inputs || cx.outputs != cy.outputs) return false;
  if (cx.gates.size() != cy.gates.size()) return false;
  for (size_t i = 0; i < cx.gates.size(); ++i) {
    const Gate& a = cx.gates[i];
    const Gate& b = cy.gates[i];
    if (a.kind != b.kind || a.wires != b.wires || a.produced != b.produced) {
      return false;
    }
  }
  return true;
}

std::string export_circuit_json(const Circuit& c) {
  nlohmann::ordered_json j;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& [l, w] : c.inputs) {
    j["inputs"].push_back({{"label", l}, {"type", wire_type_name(w)}});
  }
  j["gates"] = nlohmann::ordered_json::array();
  for (const auto& g : c.gates) {
    nlohmann::ordered_json gj;
    gj["name"] = gate_signature(g.kind).name;
    gj["wires"] = g.wires;
    if (!g.produced.empty()) gj["produced"] = g.produced;
    j["gates"].push_back(std::move(gj));
  }
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& [l, w] : c.outputs) {
    j["outputs"].push_back({{"label", l}, {"type", wire_type_name(w)}});
  }
  return j.dump(2);
}

Circuit import_circuit_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrKind::Syntax, Span{}, std::string(e.what()));
  }
  auto parse_ctx = [](const nlohmann::json& arr) {
    LabelContext ctx;
    for (const auto& e : arr) {
      std::string ty = e.at("type").get<std::string>();
      if (ty != "Qubit" && ty != "Bit") {
        wire_error(ErrKind::Syntax, "unknown wire type '" + ty + "'");
      }
      ctx.emplace_back(e.at("label").get<LabelId>(),
                       ty == "Qubit" ? WireType::Qubit : WireType::Bit);
    }
    return ctx;
  };
  Circuit c;
  try {
    c.inputs = parse_ctx(j.at("inputs"));
    for (const auto& gj : j.at("gates")) {
      Gate g;
      std::string name = gj.at("name").get<std::string>();
      auto kind = gate_kind_by_name(name);
      if (!kind) {
        wire_error(ErrKind::Syntax, "unknown gate '" + name + "'");
      }
      g.kind = *kind;
      g.wires = gj.at("wires").get<std::vector<LabelId>>();
      if (gj.contains("produced")) {
        g.produced = gj.at("produced").get<std::vector<LabelId>>();
      }
      c.gates.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrKind::Syntax, Span{}, std::string(e.what()));
  }
  c.outputs = compute_outputs(c.inputs, c.gates);
  if (j.contains("outputs")) {
    LabelContext declared = parse_ctx(j.at("outputs"));
    if (declared != c.outputs) {
      wire_error(ErrKind::DanglingLabel,
                 "declared outputs disagree with the gate list");
    }
  }
  return c;
}

std::string export_circuit_text(const Circuit& c) {
  std::ostringstream os;
  os << "inputs:";
  for (const auto& [l, w] : c.inputs) {
    os << ' ' << l << ':' << wire_type_name(w);
  }
  os << '\n';
  for (const auto& g : c.gates) {
    os << "  " << gate_signature(g.kind).name;
    for (LabelId w : g.wires) os << ' ' << w;
    for (LabelId p : g.produced) os << " -> " << p;
    os << '\n';
  }
  os << "outputs:";
  for (const auto& [l, w] : c.outputs) {
    os << ' ' << l << ':' << wire_type_name(w);
  }
  os << '\n';
  return os.str();
}

}  // namespace pqdyn
