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

#include <cstdint>
#include <vector>

namespace pqdyn {

// Judgment modality: 1 = evaluation performs no dynamic lifting, 0 = it may.
// Conjunction is the meet of the two-point lattice with 1 on top.
enum class Modality : uint8_t { Zero = 0, One = 1 };

inline Modality operator&(Modality a, Modality b) {
  return (a == Modality::One && b == Modality::One) ? Modality::One
                                                    : Modality::Zero;
}

inline Modality modality_and(Modality a, Modality b) { return a & b; }

inline const char* modality_name(Modality m) {
  return m == Modality::One ? "1" : "0";
}

using HoleId = uint32_t;

// A modality occurrence inside a type. Surface syntax may elide the
// annotation (Elided), pin it (Const at parse time), or - after elaboration -
// reference a solver cell (Hole). Fully checked programs contain only Const.
struct ModTerm {
  enum class Tag : uint8_t { Const, Elided, Hole } tag = Tag::Elided;
  Modality value = Modality::One;  // Const
  HoleId hole = 0;                 // Hole

  static ModTerm constant(Modality m) {
    ModTerm t;
    t.tag = Tag::Const;
    t.value = m;
    return t;
  }
  static ModTerm elided() { return ModTerm{}; }
  static ModTerm hole_ref(HoleId h) {
    ModTerm t;
    t.tag = Tag::Hole;
    t.hole = h;
    return t;
  }
};

// Hole store for one checking run. Auto holes start at 1 and may be lowered
// to 0 exactly once (descending fixpoint); pinned holes come from explicit
// annotations and never move. `dirty` reports whether the current pass
// lowered anything, i.e. whether the caller must re-check the declaration.
class ModalitySolver {
 public:
  HoleId fresh() {
    cells_.push_back({State::Default1, Modality::One});
    return static_cast<HoleId>(cells_.size() - 1);
  }
  HoleId pinned(Modality m) {
    cells_.push_back({State::Pinned, m});
    return static_cast<HoleId>(cells_.size() - 1);
  }

  Modality value(HoleId h) const {
    const Cell& c = cells_[h];
    return c.state == State::Lowered0 ? Modality::Zero : c.value;
  }
  bool is_pinned(HoleId h) const { return cells_[h].state == State::Pinned; }

  Modality resolve(const ModTerm& t) const {
    switch (t.tag) {
      case ModTerm::Tag::Const:
        return t.value;
      case ModTerm::Tag::Hole:
        return value(t.hole);
      case ModTerm::Tag::Elided:
      default:
        return Modality::One;  // unconstrained holes default to 1
    }
  }

  enum class Solve { Ok, Lowered, Conflict };

  // Demands hole == computed. Lowering marks the pass dirty.
  Solve require(HoleId h, Modality computed) {
    Cell& c = cells_[h];
    switch (c.state) {
      case State::Pinned:
        return c.value == computed ? Solve::Ok : Solve::Conflict;
      case State::Default1:
        if (computed == Modality::One) return Solve::Ok;
        c.state = State::Lowered0;
        dirty_ = true;
        return Solve::Lowered;
      case State::Lowered0:
        return computed == Modality::Zero ? Solve::Ok : Solve::Conflict;
    }
    return Solve::Conflict;
  }

  bool dirty() const { return dirty_; }
  void clear_dirty() { dirty_ = false; }

  // Snapshot/rollback around speculative checking attempts so abandoned
  // branches cannot leave stray lowerings behind.
  struct Snapshot {
    size_t size;
    std::vector<uint8_t> states;
    bool dirty;
  };
  Snapshot save() const {
    Snapshot s;
    s.size = cells_.size();
    s.states.reserve(cells_.size());
    for (const Cell& c : cells_) s.states.push_back(static_cast<uint8_t>(c.state));
    s.dirty = dirty_;
    return s;
  }
  void restore(const Snapshot& s) {
    cells_.resize(s.size);
    for (size_t i = 0; i < s.size; ++i)
      cells_[i].state = static_cast<State>(s.states[i]);
    dirty_ = s.dirty;
  }

  size_t size() const { return cells_.size(); }

 private:
  enum class State : uint8_t { Default1, Lowered0, Pinned };
  struct Cell {
    State state;
    Modality value;  // meaningful for Pinned
  };
  std::vector<Cell> cells_;
  bool dirty_ = false;
};

}  // namespace pqdyn
