#pragma once

#include <string>
#include <vector>

#include "fanfactor/lifted.hpp"

namespace fanfactor {

enum class MoveOp { subdivide, assemble };

// one replayable step on a base fan
struct Move {
  MoveOp op = MoveOp::subdivide;
  Vec ray;  // primitive
};

using Script = std::vector<Move>;

std::string move_str(const Move& m);

// sign shape of the relation: up when exactly one ray is positive, down when
// exactly one is negative; a two-ray circuit is both
enum class Pointing { up, down, both, neither };

Pointing pointing(const Circuit& sigma);

// the exchange carried by one circuit of a pi-nonsingular fan: subdividing
// the projected lower rim of its closed star at the witness ray gives the
// same fan as subdividing the projected upper rim
struct BistellarData {
  ConeIdx circuit;
  Vec ray;  // sum of the primitive projections over either sign class
  Fan lower, upper, middle;
};

BistellarData bistellar(const LiftedFan& s, const Circuit& sigma);

// walk the circuits in collapsing order and emit the moves that carry the
// projected lower rim to the projected upper rim; every intermediate fan is
// smooth and the walk must end exactly at the upper rim
Script extract_weak_script(const LiftedFan& s);

// build a cobordism between the fans, make it projective and pi-nonsingular,
// then read the script off; the script is replay-verified before returning
Script weak_factorize(const Fan& lower, const Fan& upper);

// successive midray subdivisions over the pi-barycenters of a join-closed
// family of independent cones, largest first; each member must be codefinite
// with respect to every circuit whose closed star contains it
LiftedFan apply_join_closed(const LiftedFan& s, const std::vector<ConeIdx>& family);

// every family member meeting the closed star of a circuit lies inside the
// negative face of that circuit
bool check_star_condition(const LiftedFan& s, const std::vector<ConeIdx>& family);

// subdivide at the midray over the positive face of the circuit; the cones
// around sigma become the closed star of a single pointing-up circuit
LiftedFan point_up_star(const LiftedFan& s, const ConeIdx& sigma);

// rebuild the cobordism from its upper rim downwards, shielding each circuit
// with the joins of its positive face and link; afterwards every lower rim
// cone meeting a closed star lies inside that circuit's negative face, so
// any join-closed family of lower rim cones can be subdivided safely
LiftedFan neatify(const LiftedFan& s);

struct StrongifyResult {
  LiftedFan cobordism;
  Script up;  // subdivisions applied to the projected upper rim on the way
};

// make every circuit point up without touching the lower rim; the upper rim
// only ever gets subdivided and those moves are collected in order
StrongifyResult strongify(const LiftedFan& s);

struct FactorizationResult {
  Script down;  // subdivisions from the lower fan to the top fan
  Script up;    // subdivisions from the upper fan to the top fan
  Fan top;
};

FactorizationResult strong_factorize(const Fan& lower, const Fan& upper);

struct ScriptReport {
  bool ok = false;
  // first move that cannot be replayed; the script length when every move
  // replays but the endpoint differs; -1 when ok
  int failed_move = -1;
  std::string message;
  Fan final_fan;  // the replayed endpoint when ok
};

// replay move by move, branching over assembling candidates; every
// intermediate fan must be smooth and the endpoint must equal target
ScriptReport verify_script(const Fan& start, const Script& script, const Fan& target);

}  // namespace fanfactor
