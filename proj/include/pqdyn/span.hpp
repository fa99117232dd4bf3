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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pqdyn {

// Half-open source region. line/col are 1-based; 0 means "no position"
// (synthesized nodes inherit the position of the construct they came from).
struct Span {
  std::string file;
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;

  bool known() const { return line > 0; }
  std::string where() const {
    if (!known()) return file.empty() ? std::string("<unknown>") : file;
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
};

enum class ErrKind {
  Syntax,
  UnboundVariable,
  DuplicateDeclaration,
  LinearityViolation,
  LinearOverlap,
  TypeMismatch,
  NotAFunction,
  CannotInfer,
  ModalityError,
  ModalityAnnotationConflict,
  ShapeMismatch,
  WireTypeMismatch,
  WireNotFound,
  NotABit,
  DanglingLabel,
  AddressMismatch,
  DynliftAtGenerationTime,
  StuckTerm,
  LimitExceeded,
  Internal,
};

const char* err_kind_name(ErrKind k);

// Single error type for parse, type, circuit, and evaluation failures.
// `render()` produces the surfaced "file:line:col: error: ..." diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, Span span, std::string message)
      : std::runtime_error(span.where() + ": error: " + message),
        kind_(kind),
        span_(std::move(span)),
        message_(std::move(message)) {}

  ErrKind kind() const { return kind_; }
  const Span& span() const { return span_; }
  const std::string& message() const { return message_; }
  std::string render() const { return span_.where() + ": error: " + message_; }

 private:
  ErrKind kind_;
  Span span_;
  std::string message_;
};

}  // namespace pqdyn
