#pragma once

#include <vector>

#include "learnspace/base_dimension.hpp"
#include "learnspace/sequence_space.hpp"

namespace learnspace {

/// States that may be removed, and non-states that may be added, each edit
/// leaving a learning space.
struct SpaceFringe {
  std::vector<State> removable;
  std::vector<State> addable;
};

/// Base sets S other than the whole domain such that no S + {x} is a base set.
std::vector<State> space_inner_fringe(const SequenceSpace& sp);

/// For each state S, the sets S + {x} where x is in the outer fringe of every
/// S + {y} with y in the outer fringe of S. Each set is produced once.
std::vector<State> space_outer_fringe(const SequenceSpace& sp);

SpaceFringe space_fringe(const SequenceSpace& sp);

/// A re-minimized space after an edit, together with the edited base.
struct Adapted {
  SequenceSpace space;
  BaseFamily base;
};

Adapted remove_state(const SequenceSpace& sp, const State& s);
Adapted add_state(const SequenceSpace& sp, const State& t);

}  // namespace learnspace
