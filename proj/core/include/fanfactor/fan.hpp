#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fanfactor/lattice.hpp"
#include "fanfactor/polycone.hpp"

namespace fanfactor {

// a cone of a simplicial fan, kept as a sorted list of ray indices
using ConeIdx = std::vector<int>;

bool subset_of(const ConeIdx& a, const ConeIdx& b);
ConeIdx cone_minus(const ConeIdx& a, const ConeIdx& b);
ConeIdx cone_union(const ConeIdx& a, const ConeIdx& b);
ConeIdx cone_meet(const ConeIdx& a, const ConeIdx& b);

// simplicial fan: primitive distinct rays, maximal cones as sorted ray-index
// sets with independent generators
struct Fan {
  int dim = 0;
  std::vector<Vec> rays;
  std::vector<ConeIdx> maximal;
};

Mat cone_rays_of(const Fan& f, const ConeIdx& c);

/// shape and simpliciality only: primitive distinct rays, sorted index sets,
// independent generators, no cone inside another
void validate_fan_shape(const Fan& f);

// shape plus the pairwise face-intersection property; throws with a
// description on the first violation
void validate_fan(const Fan& f);

// do two cones of the fan meet exactly in the cone spanned by their shared rays
bool cones_meet_in_shared_face(const Fan& f, const ConeIdx& a, const ConeIdx& b);

Fan canonical(const Fan& f);
bool fan_equal(const Fan& a, const Fan& b);

// canonical serialization, usable as a map key
std::string fan_key(const Fan& f);

// all faces of all maximal cones, the empty face included, sorted
std::vector<ConeIdx> all_faces(const Fan& f);

int find_ray(const Fan& f, const Vec& v);

// indices into f.maximal of the cones containing tau
std::vector<int> star_of(const Fan& f, const ConeIdx& tau);

// subfan spanned by the star of tau (same ray table)
Fan closed_star(const Fan& f, const ConeIdx& tau);

// maximal faces of the star that are disjoint from tau; the link of a
// maximal cone is { empty }
std::vector<ConeIdx> link_of(const Fan& f, const ConeIdx& tau);

// the face whose relative interior contains the point, when the point lies
// in the support
std::optional<ConeIdx> find_carrier(const Fan& f, const QVec& x);

struct Subdivision {
  Fan fan;
  bool changed = false;  // false when the ray was already present
};

// star subdivision at a ray through v; the carrier face gets replaced by its
// join with the new ray inside every cone of its star
Subdivision star_subdivide(const Fan& f, const Vec& v);

// inverse operations: ways of removing the ray v so that subdividing the
// result at v restores f; several distinct merges can exist
std::vector<Fan> star_assemble_candidates(const Fan& f, const Vec& v);

// deterministic pick: the candidate with the smallest canonical key
Fan star_assemble(const Fan& f, const Vec& v);

bool is_smooth(const Fan& f);

bool in_support(const Fan& f, const QVec& x);

bool supports_equal(const Fan& a, const Fan& b);

PolyFan common_refinement(const Fan& a, const Fan& b);

// cells must all be simplicial
Fan fan_from_polyfan(const PolyFan& pf);

}  // namespace fanfactor
