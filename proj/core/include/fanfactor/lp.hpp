#pragma once

#include <vector>

#include "fanfactor/lattice.hpp"

namespace fanfactor {

enum class Rel { le, ge, eq, lt, gt };

struct LinearConstraint {
  QVec a;
  Rel rel = Rel::le;
  Rat b = 0;
};

struct LPResult {
  bool feasible = false;
  QVec witness;  // one value per variable when feasible
};

// Exact feasibility of a rational linear system. Variables are unrestricted
// in sign. Strict constraints (lt, gt) are required to hold with a common
// positive margin, so an open system is reported feasible only when a point
// strictly inside exists.
LPResult lp_feasible(int nvars, const std::vector<LinearConstraint>& constraints);

}  // namespace fanfactor
