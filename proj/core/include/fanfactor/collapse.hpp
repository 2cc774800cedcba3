#pragma once

#include <vector>

#include "fanfactor/lifted.hpp"

namespace fanfactor {

// circuits ordered by ray set; an edge i -> j means some maximal upper rim
// face of the closed star of circuit i is a maximal lower rim face of the
// closed star of circuit j, so i must be swept before j
struct CircuitGraph {
  std::vector<Circuit> nodes;
  std::vector<std::vector<int>> edges;
};

CircuitGraph circuit_graph(const LiftedFan& s);

struct CollapseCheck {
  bool collapsible = false;
  std::vector<int> cycle;  // node indices of a directed cycle when not
};

CollapseCheck is_collapsible(const CircuitGraph& g);

// topological order, sources first; ties go to the circuit whose ray vector
// list is lexicographically smallest. Throws on a cyclic graph.
std::vector<int> order_circuits(const LiftedFan& s, const CircuitGraph& g);

// piecewise linear function given per maximal cone, h = max of the pieces
struct SupportFunction {
  bool found = false;
  std::vector<QVec> coeffs;  // aligned with fan.maximal
};

// strictly convex support function: pieces agree on shared rays and each
// cone's functional beats the neighbour's at the neighbour's off-wall ray
SupportFunction projectivity_certificate(const LiftedFan& s);

// subdivide interior faces (barycenters, coarse to fine) until a
// certificate exists; rim faces are never touched, so the boundaries and
// the support stay as they are. Throws past the round cap.
LiftedFan projectivize(const LiftedFan& s);

}  // namespace fanfactor
