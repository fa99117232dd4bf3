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

#include "pqdyn/prelude.hpp"

#include <fstream>
#include <sstream>

#include "pqdyn/circuit.hpp"
#include "pqdyn/parser.hpp"
#include "pqdyn/typecheck.hpp"

namespace pqdyn {

namespace {

TypePtr wire_bundle(const std::vector<WireType>& ws) {
  if (ws.empty()) return types::unit();
  TypePtr t = ws.back() == WireType::Qubit ? types::qubit() : types::bit();
  for (size_t i = ws.size() - 1; i-- > 0;) {
    TypePtr w = ws[i] == WireType::Qubit ? types::qubit() : types::bit();
    t = types::tensor(w, t);
  }
  return t;
}

// A single-gate circuit constant: inputs are the gate's operand wires in
// order, produced wires join the output bundle.
Declaration gate_constant(GateKind k, const Span& sp) {
  const GateSignature& sig = gate_signature(k);

  Circuit c;
  LabelSupply supply(0);
  TypePtr in_ty = wire_bundle(sig.in);
  auto [in_shape, in_ctx] = gen(in_ty, supply, sp);
  c.inputs = in_ctx;

  Gate g;
  g.kind = k;
  for (const auto& [l, w] : in_ctx) g.wires.push_back(l);
  for (size_t i = 0; i < sig.out.size(); ++i) {
    if (i < sig.in.size()) continue;
    g.produced.push_back(supply.fresh());
  }
  c.gates.push_back(g);
  c.outputs = compute_outputs(c.inputs, c.gates);

  TypePtr out_ty = wire_bundle(sig.out);
  TermPtr out_shape;
  if (c.outputs.empty()) {
    out_shape = mk::unit(sp);
  } else {
    std::vector<TermPtr> parts;
    for (const auto& [l, w] : c.outputs) parts.push_back(mk::label(l, sp));
    out_shape = parts.back();
    for (size_t i = parts.size() - 1; i-- > 0;) {
      out_shape = mk::pair(parts[i], out_shape, sp);
    }
  }

  auto boxed = std::make_shared<BoxedCircuitValue>();
  boxed->input_shape = in_shape;
  boxed->circuit = std::move(c);
  boxed->output_shape = out_shape;

  Declaration d;
  d.name = sig.name + std::string("_circ");
  d.declared = types::circ(in_ty, out_ty);
  d.internal = types::bang(ModTerm::constant(Modality::One), d.declared);
  d.value = mk::lift(mk::boxed_circ(std::move(boxed), sp), sp);
  d.wrapped = true;
  d.recursive = false;
  d.builtin = true;
  d.root_modality = Modality::One;
  d.span = sp;
  return d;
}

}  // namespace

Env builtin_constants() {
  Env env;
  Span sp;
  sp.file = "<builtin>";
  for (int k = 0; k < 12; ++k) {
    env.insert(gate_constant(static_cast<GateKind>(k), sp));
  }
  return env;
}

Env load_prelude(const std::optional<std::string>& override_path) {
  std::string source;
  std::string name;
  if (override_path) {
    std::ifstream in(*override_path);
    if (!in) {
      throw Error(ErrKind::Internal, Span{},
                  "cannot read prelude file '" + *override_path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    source = buf.str();
    name = *override_path;
  } else {
    source = embedded_asset("prelude.pqd");
    name = "prelude.pqd";
  }

  Program prog = parse_program(source, name);
  CheckedProgram checked = check_program(prog, builtin_constants());
  if (!checked.ok()) {
    throw Error(ErrKind::Internal, Span{},
                "the prelude does not typecheck: " + checked.errors.front().render());
  }
  return checked.env;
}

namespace {

const std::map<std::string, std::string>& asset_table() {
  static const std::map<std::string, std::string> table = {
#include "pqdyn_assets.inc"
  };
  return table;
}

}  // namespace

const std::map<std::string, std::string>& embedded_assets() {
  return asset_table();
}

const std::string& embedded_asset(const std::string& name) {
  const auto& table = asset_table();
  auto it = table.find(name);
  if (it == table.end()) {
    throw Error(ErrKind::Internal, Span{},
                "no embedded asset named '" + name + "'");
  }
  return it->second;
}

}  // namespace pqdyn
