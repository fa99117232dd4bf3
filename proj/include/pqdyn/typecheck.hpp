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
// Bidirectional type checker with modality inference.
//
// Judgments carry a modality: 1 for lifting-free evaluation, 0 when dynamic
// lifting may occur. Rules conjoin the modalities of their premises; lambda,
// lift and other value forms have modality exactly 1. Surface types may
// elide modalities; elisions become solver holes solved against the computed
// modalities by a descending fixpoint (unconstrained holes default to 1).
//
// Elaboration decisions are recorded in the returned terms: `force` is
// inserted where a `!`-typed term is used at its unbanged type, `lift` where
// a value meets a `!`-typed expectation, and references to declarations with
// non-`!` declared types become `force name`.
//============================================================================

#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pqdyn/context.hpp"
#include "pqdyn/program.hpp"
#include "pqdyn/term.hpp"
#include "pqdyn/type.hpp"

namespace pqdyn {

struct CheckOutput {
  TermPtr term;  // elaborated
  TypePtr type;
  Modality modality;
};

// Usage-threaded checker over one environment and solver.
class Checker {
 public:
  Checker(const Env& env, ModalitySolver& solver);

  // Seeds the scope for configuration re-checking.
  void bind_label(LabelId l, WireType w);
  void bind_var(const std::string& name, TypePtr type, Span sp = {});

  // Synthesizes a type and modality; consumes linear scope entries.
  CheckOutput infer(const TermPtr& m);

  // Checks against an expected type, solving holes the expected type carries.
  CheckOutput check(const TermPtr& m, const TypePtr& expected);

  // Spec-shaped wrapper: succeeds iff the judgment holds at exactly
  // `current`.
  CheckOutput check_at(const TermPtr& m, Modality current,
                       const TypePtr& expected);

  // Names/labels bound linear and not consumed. Empty after a complete
  // top-level check.
  std::vector<std::string> unconsumed() const;

 private:
  struct ScopeEntry {
    Binding b;
    bool consumed = false;
    uint32_t type_hole = UINT32_MAX;  // metavariable id for inferred params
  };

  const Env& env_;
  ModalitySolver& solver_;
  std::vector<ScopeEntry> scope_;
  std::vector<TypePtr> type_holes_;

  friend class ScopeGuard;

  TypePtr resolve(const TypePtr& t) const;
  uint32_t fresh_type_hole();
  bool bind_type_hole(uint32_t id, const TypePtr& t);

  size_t push_var(const std::string& name, TypePtr type, Span sp,
                  uint32_t hole = UINT32_MAX);
  void pop_binder(size_t idx, const Span& sp);
  CheckOutput consume(size_t idx, const Term& at);

  std::vector<bool> consumed_snapshot() const;
  void restore_consumed(const std::vector<bool>& snap);

  void require_mod(const ModTerm& site, Modality computed, const Span& sp,
                   const char* what);
  void mod_unify(const ModTerm& expected, const ModTerm& found,
                 const Span& sp);
  void match_types(const TypePtr& expected, const TypePtr& found,
                   const Span& sp);
  CheckOutput force_shell(CheckOutput got);
  CheckOutput coerce(CheckOutput got, const TypePtr& expected, const Span& sp);

  CheckOutput infer_var(const Term& t);
  CheckOutput infer_app(const Term& t);
  CheckOutput let_redex(const Term& t, const TypePtr* expected);
  CheckOutput infer_branches(const TermPtr& m, const TypePtr* expected);
  CheckOutput check_lambda(const TermPtr& m, const TypePtr& expected);
  CheckOutput check_lift(const TermPtr& m, const TypePtr& expected);
  CheckOutput box_operand(const Term& t);
  CheckOutput infer_boxed_circ(const Term& t);
};

// Per-declaration diagnostics from a whole-program check.
struct CheckedProgram {
  Env env;  // prelude plus successfully checked declarations
  std::vector<std::string> signatures;  // "name : type" lines, file order
  std::vector<Error> errors;
  bool ok() const { return errors.empty(); }
};

// Checks declarations in order against `base` (typically the prelude).
// Failing declarations are reported and skipped; later declarations that
// reference them fail with UnboundVariable.
CheckedProgram check_program(const Program& p, const Env& base);

// Re-checks a value against a type under exactly the given label context at
// modality 1 (every label consumed). Used to validate evaluator results.
void recheck_value(const Env& env, const LabelContext& labels,
                   const TermPtr& value, const TypePtr& type);

}  // namespace pqdyn
