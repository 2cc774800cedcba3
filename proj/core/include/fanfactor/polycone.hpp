#pragma once

#include <vector>

#include "fanfactor/lattice.hpp"

namespace fanfactor {

// Cones are handled as row matrices of generators (rays). All cones in this
// library are pointed; functions below throw on cones containing a line.

struct HRep {
  Mat eqs;    // primitive normals u with u.x = 0 on the cone
  Mat ineqs;  // primitive facet normals u with u.x >= 0 on the cone
};

int cone_dim(const Mat& gens);

HRep cone_hrep(const Mat& gens, int ambient);

// extremal rays of { eqs.x = 0, ineqs.x >= 0 }, primitive and sorted
Mat cone_rays(const HRep& h, int ambient);

// prune the generator list to the extremal rays (primitive, sorted)
Mat extremal_rays(Mat gens);

Mat cone_intersect(const Mat& a, const Mat& b, int ambient);

bool cone_contains(const Mat& gens, const QVec& x);

// barycenter used for point-in-piece probes: sum of the generators
QVec cone_probe(const Mat& gens);

// slice a cone along each hyperplane whose two open sides both meet it
std::vector<Mat> split_cone(const Mat& gens, const Mat& normals, int ambient);

// a polyhedral cell complex: inclusion-maximal cones given by extremal rays
struct PolyFan {
  int dim = 0;  // ambient dimension
  std::vector<Mat> cells;
};

PolyFan common_refinement_cells(const std::vector<Mat>& a, const std::vector<Mat>& b,
                                int ambient);

// stellar triangulation: repeatedly subdivide at barycenters of
// inclusion-maximal non-simplicial faces until every cell is simplicial
PolyFan simplicialize(PolyFan pf);

// union of all cell rays, primitive and sorted
Mat polyfan_rays(const PolyFan& pf);

}  // namespace fanfactor
