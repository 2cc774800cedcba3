#pragma once

#include <iosfwd>
#include <string>

#include "fanfactor/lifted.hpp"

namespace fanfactor {

// multiplicity data of a simplicial cone over the base, compared
// lexicographically: a = max projected multiplicity over the independent
// faces, b = 1 when several maximal independent faces attain it, c = circuit
// dimension when b = 1, d = the count of attaining faces when c > 0
struct Profile {
  Int a = 0;
  int b = 0;
  int c = 0;
  int d = 0;
};

bool operator==(const Profile& x, const Profile& y);
bool operator!=(const Profile& x, const Profile& y);
bool operator<(const Profile& x, const Profile& y);
bool operator<=(const Profile& x, const Profile& y);
std::string profile_str(const Profile& p);

// fan-level invariant: the maximum cone profile and how many maximal cones
// attain it
struct FanProfile {
  Profile g;
  long s = 0;
};

bool operator==(const FanProfile& x, const FanProfile& y);
bool operator<(const FanProfile& x, const FanProfile& y);
std::string fan_profile_str(const FanProfile& p);

// index of the projected primitive generators in the lattice of their
// rational span; 0 for projection-dependent cones, 1 for the empty cone
Int pi_mult(const LiftedFan& s, const ConeIdx& c);

Profile profile_cone(const LiftedFan& s, const ConeIdx& c);
FanProfile profile_fan(const LiftedFan& s);

// tau avoids one side of eta's circuit relation: its rays never meet both
// the positive and the negative support. eta must be projection-dependent.
bool is_codefinite(const LiftedFan& s, const ConeIdx& tau, const ConeIdx& eta);

// primitive generator of the ray through the midpoint of the fiber segment
// of tau over the base point l (the point itself when tau is independent);
// errors when l is outside the projected cone
Vec midray(const LiftedFan& s, const ConeIdx& tau, const Vec& l);

// sums of the primitive projected generators over each sign class of the
// relation; both lie in the relative interior of the projected circuit
struct Centers {
  Vec neg, pos;
};
Centers centers(const LiftedFan& s, const Circuit& sigma);

enum class CenterSign { negative, positive };

// outcome of one center subdivision: either every piece of the circuit got a
// strictly smaller profile, or exactly one exceptional piece kappa keeps the
// old profile and carries an untouched max-multiplicity codefinite facet
struct CenterChoice {
  CenterSign sign = CenterSign::negative;
  bool case_b = false;
  Vec ray;            // the subdivision midray
  int ray_index = -1; // its index in the new ray table
  ConeIdx kappa;      // case B only: the exceptional piece
  ConeIdx gamma;      // case B only: its untouched facet of maximal multiplicity
};

struct CenterSubdivision {
  LiftedFan fan;
  CenterChoice choice;
};

// subdivide the star of a circuit with more than two rays at its negative or
// positive center, the side chosen by the sign pattern of the relation; the
// declared A/B outcome is re-verified from the piece profiles and any
// mismatch is a hard error
CenterSubdivision center_subdivide(const LiftedFan& s, const Circuit& sigma,
                                   std::ostream* trace = nullptr);

// repeated center subdivisions descending on circuit profiles until tau is
// codefinite with respect to every cone that contains it and meets the
// family of circuits spawned by sigma; tau survives untouched
LiftedFan codefinite_reduce(const LiftedFan& s, const Circuit& sigma,
                            const ConeIdx& tau, std::ostream* trace = nullptr);

// star subdivisions until every independent face has projected multiplicity
// one. The fan profile strictly decreases across each outer round (hard
// error otherwise) and cones that are already independent and of
// multiplicity one are never touched.
LiftedFan pi_desingularize(const LiftedFan& s, std::ostream* trace = nullptr);

}  // namespace fanfactor
