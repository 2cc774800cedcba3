#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fanfactor/fan.hpp"

namespace fanfactor {

// fan in N x Z; the projection drops the last coordinate
struct LiftedFan {
  int base_dim = 0;
  Fan fan;  // fan.dim == base_dim + 1
};

Vec base_of(const Vec& lifted);
Int height_of(const Vec& lifted);

Mat projected_rays(const LiftedFan& s, const ConeIdx& c);

// the projected generators are linearly independent
bool pi_independent(const LiftedFan& s, const ConeIdx& c);

// the projected cone is strongly convex: for a dependent simplicial cone
// this means the unique relation has coefficients of both signs
bool pi_strongly_convex(const LiftedFan& s, const ConeIdx& c);

// minimal projection-dependent face of a cone. The relation is between the
// primitive vectors of the projected rays, scaled so that the lifted
// combination points up and max |r_i| = 1; |r_i| = 1 then marks exactly the
// facets of maximal projected multiplicity
struct Circuit {
  ConeIdx rays;
  QVec rel;
  ConeIdx pos, neg;    // rays with positive / negative coefficient
  ConeIdx pos1, neg1;  // the subsets with |coefficient| = 1
};

std::optional<Circuit> circuit_of(const LiftedFan& s, const ConeIdx& cone);

// distinct circuits of all maximal cones, sorted by ray set
std::vector<Circuit> circuits(const LiftedFan& s);

// heights cut out of one cone over a base point: a closed segment (or point)
struct FiberPiece {
  Rat lo, hi;
};

// throws on an unbounded fiber (cone not strongly convex over the base)
std::optional<FiberPiece> cone_fiber(const LiftedFan& s, const ConeIdx& cone,
                                     const QVec& x);

// merged fiber of the whole support over a base point, sorted components
std::vector<FiberPiece> fiber_components(const LiftedFan& s, const QVec& x);

enum class Side { lower, upper };

// faces on the lower (upper) rim of the support. A face is on the rim when
// no cone of its star lets the fiber continue past it: a dependent cone
// continues below a face exactly when all positive rays of its circuit lie
// in the face (negative rays for above). Equivalent to the interior probe
// of the face sitting at the matching end of its fiber component.
std::vector<ConeIdx> boundary_faces(const LiftedFan& s, Side side,
                                    bool maximal_only = true);

// fan of primitive projections of the maximal boundary faces; with
// verify_slab the fiber over every face probe must be a single segment,
// else this throws ("support is not slab-like")
Fan project_boundary(const LiftedFan& s, Side side, bool verify_slab = false);

// subfan spanned by the cones containing tau, same ray table
LiftedFan lifted_closed_star(const LiftedFan& s, const ConeIdx& tau);

// negate the last coordinate; swaps the two boundaries
LiftedFan vertical_flip(const LiftedFan& s);

struct CobordismReport {
  bool valid = false;
  std::vector<std::string> failures;
};

// full validity of s as a cobordism from lower to upper: fan validity,
// strong convexity over the base, boundary bijections, connected fibers
// over all face probes. deep also runs the pairwise cone intersection
// check on the lifted fan.
CobordismReport check_cobordism(const LiftedFan& s, const Fan& lower, const Fan& upper,
                                bool deep = true);

// glue along the shared boundary: the upper boundary of a must equal the
// lower boundary of b as lifted subfans, and the two fans must share no
// other cones; throws when the glue does not match
LiftedFan compose(const LiftedFan& a, const LiftedFan& b);

}  // namespace fanfactor
