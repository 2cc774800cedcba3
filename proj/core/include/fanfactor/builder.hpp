#pragma once

#include <vector>

#include "fanfactor/fan.hpp"
#include "fanfactor/lifted.hpp"

namespace fanfactor {

struct BuildMove {
  bool subdivide = true;  // otherwise an assembling
  Vec ray;
};

struct BuildResult {
  LiftedFan cobordism;
  std::vector<BuildMove> path;  // moves leading from the lower fan to the upper
};

// cobordism between two simplicial fans with equal support, stacked from one
// elementary stage per move; the result passes check_cobordism and its
// circuit graph is acyclic by construction
BuildResult build_cobordism(const Fan& lower, const Fan& upper);

}  // namespace fanfactor
