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

#include <map>
#include <optional>
#include <string>

#include "pqdyn/program.hpp"

namespace pqdyn {

// Built-in boxed circuit constants only (H_circ, ..., Discard_circ), each a
// single-gate circuit value of type Circ(S, U).
Env builtin_constants();

// Constants plus the checked gate wrappers and Bool helpers from the prelude
// source. `override_path`, when set (e.g. from PQDYN_PRELUDE), is read from
// disk; otherwise the embedded prelude is used.
Env load_prelude(const std::optional<std::string>& override_path = {});

// Embedded .pqd assets by file name (prelude and example programs).
const std::map<std::string, std::string>& embedded_assets();

// Asset text by name; throws Error(Internal) when missing.
const std::string& embedded_asset(const std::string& name);

}  // namespace pqdyn
