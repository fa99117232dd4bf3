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

#include <string>

#include "pqdyn/term.hpp"
#include "pqdyn/type.hpp"

namespace pqdyn {

// Renders a type. Constant modalities print annotated (`!_1`, `-o_0`);
// elided or unsolved occurrences print the bare forms (`!`, `->`).
std::string pretty_type(const TypePtr& t, const ModalitySolver* solver = nullptr);

// Renders a term in the concrete syntax (single line). Labels print as
// `<l>N` using the script-l glyph; boxed circuits print as an opaque
// `<circ ...>` summary. Both appear only in diagnostics and reports, not in
// parseable sources.
std::string pretty_term(const TermPtr& t);

}  // namespace pqdyn
