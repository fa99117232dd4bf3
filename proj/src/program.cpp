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

#include "pqdyn/program.hpp"

namespace pqdyn {

void Env::insert(Declaration d) {
  auto it = decls.find(d.name);
  if (it == decls.end()) {
    order.push_back(d.name);
    decls.emplace(d.name, std::move(d));
  } else {
    it->second = std::move(d);
  }
}

}  // namespace pqdyn
