#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fanfactor/pidesing.hpp"
#include "fixtures.hpp"

using namespace fanfactor;
using namespace fixtures;

namespace {

// rim classification oracle: an independent face sits on the lower (upper)
// rim exactly when its fiber point over an interior probe of its projection
// is the bottom (top) end of the fiber component of the whole support there
void probe_rims(const LiftedFan& s, const ConeIdx& f, bool& lower, bool& upper) {
  QVec x(s.base_dim, Rat(0));
  for (int i : f) x = qadd(x, to_q(primitive(base_of(s.fan.rays[i]))));
  auto piece = cone_fiber(s, f, x);
  REQUIRE(piece.has_value());
  REQUIRE(piece->lo == piece->hi);
  Rat h = piece->lo;
  for (const auto& comp : fiber_components(s, x))
    if (comp.lo <= h && h <= comp.hi) {
      lower = (h == comp.lo);
      upper = (h == comp.hi);
      return;
    }
  FAIL("fiber point escaped every component");
}

std::set<Mat> face_matrices(const LiftedFan& s, const std::vector<ConeIdx>& faces) {
  std::set<Mat> out;
  for (const auto& f : faces) {
    Mat m;
    for (int i : f) m.push_back(s.fan.rays[i]);
    out.insert(m);
  }
  return out;
}

}  // namespace

TEST_CASE("base and height split") {
  CHECK(base_of({1, 2, 3, 4}) == Vec{1, 2, 3});
  CHECK(height_of({1, 2, 3, 4}) == 4);
}

TEST_CASE("projection independence and strong convexity") {
  LiftedFan s = fixA_sigma();
  CHECK_FALSE(pi_independent(s, {0, 1, 2, 3}));
  CHECK(pi_independent(s, {0, 1, 2}));
  CHECK(pi_independent(s, {2, 3}));
  CHECK(pi_strongly_convex(s, {0, 1, 2, 3}));

  LiftedFan flat;
  flat.base_dim = 2;
  flat.fan.dim = 3;
  flat.fan.rays = {{1, 0, 0}, {-1, 0, 1}};
  flat.fan.maximal = {{0, 1}};
  CHECK_FALSE(pi_strongly_convex(flat, {0, 1}));
  CHECK_THROWS(cone_fiber(flat, {0, 1}, to_q(Vec{0, 0})));
}

TEST_CASE("the FIX-A circuit") {
  LiftedFan s = fixA_sigma();
  auto c = circuit_of(s, {0, 1, 2, 3});
  REQUIRE(c.has_value());
  CHECK(c->rays == ConeIdx{0, 1, 2, 3});
  CHECK(c->rel == QVec{Rat(-1), Rat(-1), Rat(1), Rat(1)});
  CHECK(c->pos == ConeIdx{2, 3});
  CHECK(c->neg == ConeIdx{0, 1});
  CHECK(c->pos1 == ConeIdx{2, 3});
  CHECK(c->neg1 == ConeIdx{0, 1});
  CHECK_FALSE(circuit_of(s, {0, 1, 2}).has_value());
  CHECK_FALSE(circuit_of(s, {}).has_value());
}

TEST_CASE("a vertical pair is a two-ray circuit") {
  LiftedFan s;
  s.base_dim = 2;
  s.fan.dim = 3;
  s.fan.rays = {{1, 0, 0}, {1, 0, 2}, {0, 1, 1}};
  s.fan.maximal = {{0, 1, 2}};
  auto c = circuit_of(s, {0, 1, 2});
  REQUIRE(c.has_value());
  CHECK(c->rays == ConeIdx{0, 1});
  CHECK(c->pos == ConeIdx{1});
  CHECK(c->neg == ConeIdx{0});
}

TEST_CASE("circuits of the FIX-C cobordism") {
  auto cs = circuits(fixC_sigma());
  REQUIRE(cs.size() == 2);
  CHECK(cs[0].rays == ConeIdx{0, 1, 2, 3});
  CHECK(cs[0].pos == ConeIdx{3});
  CHECK(cs[0].neg == ConeIdx{0, 1, 2});
  CHECK(cs[1].rays == ConeIdx{2, 3, 4});
  CHECK(cs[1].pos == ConeIdx{4});
  CHECK(cs[1].neg == ConeIdx{2, 3});
}

TEST_CASE("the relation is scaled so unit entries mark maximal multiplicity") {
  // projections (1,0), (0,1), (2,1): relation 2a + b - c = 0; the facets of
  // maximal projected multiplicity are {(0,1),(2,1)} and {(1,0),(0,1)}
  LiftedFan s;
  s.base_dim = 2;
  s.fan.dim = 3;
  s.fan.rays = {{1, 0, 0}, {0, 1, 0}, {2, 1, 1}};
  s.fan.maximal = {{0, 1, 2}};
  auto c = circuit_of(s, {0, 1, 2});
  REQUIRE(c.has_value());
  CHECK(c->rel == QVec{Rat(-1), make_rat(-1, 2), make_rat(1, 2)});
  CHECK(c->pos == ConeIdx{2});
  CHECK(c->neg == ConeIdx{0, 1});
  CHECK(c->neg1 == ConeIdx{0});
  CHECK(c->pos1.empty());
  // |r_i| = 1 exactly at the rays opposite the maximal-multiplicity facets
  for (int i : {0, 1, 2}) {
    ConeIdx facet;
    for (int j : {0, 1, 2})
      if (j != i) facet.push_back(j);
    bool unit = abs_int(rat_num(c->rel[i])) == rat_den(c->rel[i]);
    CHECK(unit == (pi_mult(s, facet) == 2));
  }
}

TEST_CASE("boundary faces of FIX-A") {
  LiftedFan s = fixA_sigma();
  auto lower = boundary_faces(s, Side::lower);
  auto upper = boundary_faces(s, Side::upper);
  CHECK(lower == std::vector<ConeIdx>{{0, 1, 2}, {0, 1, 3}});
  CHECK(upper == std::vector<ConeIdx>{{0, 2, 3}, {1, 2, 3}});
  auto all_lower = boundary_faces(s, Side::lower, false);
  for (const auto& f : {ConeIdx{0}, ConeIdx{1}, ConeIdx{0, 1}, ConeIdx{0, 1, 2}})
    CHECK(std::count(all_lower.begin(), all_lower.end(), f) == 1);
  CHECK(std::count(all_lower.begin(), all_lower.end(), ConeIdx{2, 3}) == 0);
}

TEST_CASE("rim classification agrees with the fiber probe oracle") {
  for (const LiftedFan& s : {fixA_sigma(), fixB_sigma(), fixC_sigma(), fixD_sigma()}) {
    auto lower = boundary_faces(s, Side::lower, false);
    auto upper = boundary_faces(s, Side::upper, false);
    for (const auto& f : all_faces(s.fan)) {
      if (f.empty() || !pi_independent(s, f)) continue;
      bool lo = false, hi = false;
      probe_rims(s, f, lo, hi);
      CHECK(lo == (std::count(lower.begin(), lower.end(), f) == 1));
      CHECK(hi == (std::count(upper.begin(), upper.end(), f) == 1));
    }
  }
}

TEST_CASE("projected boundaries of the fixtures") {
  CHECK(fan_equal(project_boundary(fixA_sigma(), Side::lower), fixA_delta()));
  CHECK(fan_equal(project_boundary(fixA_sigma(), Side::upper), fixA_delta2()));
  CHECK(fan_equal(project_boundary(fixB_sigma(), Side::lower), fixB_delta()));
  CHECK(fan_equal(project_boundary(fixB_sigma(), Side::upper), fixB_delta2()));
  CHECK(fan_equal(project_boundary(fixC_sigma(), Side::lower), fixC_delta()));
  Fan up = star_subdivide(star_subdivide(fixC_delta(), {1, 1, 1}).fan, {1, 1, 2}).fan;
  CHECK(fan_equal(project_boundary(fixC_sigma(), Side::upper), up));
  CHECK(fan_equal(project_boundary(fixD_sigma(), Side::lower), fixD_delta()));
  CHECK(fan_equal(project_boundary(fixD_sigma(), Side::upper), fixD_delta()));
}

TEST_CASE("zero thickness means both rims everywhere") {
  LiftedFan s = fixD_sigma();
  CHECK(boundary_faces(s, Side::lower) == boundary_faces(s, Side::upper));
  auto comps = fiber_components(s, to_q(Vec{1, 1}));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].lo == comps[0].hi);
  CHECK(comps[0].lo == -2);
}

TEST_CASE("fibers of the FIX-A cone") {
  LiftedFan s = fixA_sigma();
  auto f = cone_fiber(s, {0, 1, 2, 3}, to_q(Vec{1, 1, 0}));
  REQUIRE(f.has_value());
  CHECK(f->lo == 0);
  CHECK(f->hi == 2);
  auto w = cone_fiber(s, {0, 1}, to_q(Vec{1, 1, 0}));
  REQUIRE(w.has_value());
  CHECK(w->lo == 0);
  CHECK(w->hi == 0);
  CHECK_FALSE(cone_fiber(s, {0, 1}, to_q(Vec{1, 1, 1})).has_value());
  auto comps = fiber_components(s, to_q(Vec{1, 1, 0}));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].lo == 0);
  CHECK(comps[0].hi == 2);
}

TEST_CASE("lifted closed star keeps the ray table") {
  LiftedFan s = fixC_sigma();
  LiftedFan st = lifted_closed_star(s, {4});
  CHECK(st.fan.rays == s.fan.rays);
  std::vector<ConeIdx> got = st.fan.maximal;
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<ConeIdx>{{0, 2, 3, 4}, {1, 2, 3, 4}});
  LiftedFan all = lifted_closed_star(s, {3});
  CHECK(all.fan.maximal.size() == 3);
}

TEST_CASE("vertical flip swaps the rims and the relation signs") {
  LiftedFan s = fixA_sigma();
  LiftedFan f = vertical_flip(s);
  CHECK(fan_equal(project_boundary(f, Side::lower), fixA_delta2()));
  CHECK(fan_equal(project_boundary(f, Side::upper), fixA_delta()));
  REQUIRE(f.fan.maximal.size() == 1);
  auto c = circuit_of(f, f.fan.maximal[0]);
  // the flipped circuit points the other way: positive class now the old negative
  REQUIRE(c.has_value());
  CHECK(c->pos.size() == 2);
  for (int i : c->pos) CHECK(height_of(f.fan.rays[i]) == 0);
}

TEST_CASE("check_cobordism accepts the fixtures") {
  CHECK(check_cobordism(fixA_sigma(), fixA_delta(), fixA_delta2()).valid);
  CHECK(check_cobordism(fixB_sigma(), fixB_delta(), fixB_delta2()).valid);
  Fan upC = star_subdivide(star_subdivide(fixC_delta(), {1, 1, 1}).fan, {1, 1, 2}).fan;
  CHECK(check_cobordism(fixC_sigma(), fixC_delta(), upC).valid);
  CHECK(check_cobordism(fixD_sigma(), fixD_delta(), fixD_delta()).valid);
}

TEST_CASE("check_cobordism rejects swapped or wrong boundaries") {
  auto r = check_cobordism(fixA_sigma(), fixA_delta2(), fixA_delta());
  CHECK_FALSE(r.valid);
  CHECK_FALSE(r.failures.empty());
  CHECK_FALSE(check_cobordism(fixB_sigma(), fixB_delta(), fixB_delta()).valid);
}

TEST_CASE("compose stacks along a shared boundary") {
  LiftedFan a = fixA_sigma();
  LiftedFan b;
  b.base_dim = 3;
  b.fan.dim = 4;
  b.fan.rays = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, -1, 1}, {1, 1, 0, 3}};
  b.fan.maximal = {{0, 2, 3, 4}, {1, 2, 3, 4}};
  Fan top = star_subdivide(fixA_delta2(), {1, 1, 0}).fan;
  REQUIRE(check_cobordism(b, fixA_delta2(), top).valid);

  LiftedFan c = compose(a, b);
  CHECK(check_cobordism(c, fixA_delta(), top).valid);
  CHECK(c.fan.maximal.size() == 3);
  CHECK_THROWS(compose(a, a));
}

TEST_CASE("boundary faces against the probe oracle on a composite") {
  LiftedFan b;
  b.base_dim = 3;
  b.fan.dim = 4;
  b.fan.rays = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, -1, 1}, {1, 1, 0, 3}};
  b.fan.maximal = {{0, 2, 3, 4}, {1, 2, 3, 4}};
  LiftedFan c = compose(fixA_sigma(), b);
  auto lower = boundary_faces(c, Side::lower, false);
  auto upper = boundary_faces(c, Side::upper, false);
  for (const auto& f : all_faces(c.fan)) {
    if (f.empty() || !pi_independent(c, f)) continue;
    bool lo = false, hi = false;
    probe_rims(c, f, lo, hi);
    CHECK(lo == (std::count(lower.begin(), lower.end(), f) == 1));
    CHECK(hi == (std::count(upper.begin(), upper.end(), f) == 1));
  }
  // the interface wall of the composite lies on neither rim
  Mat wall = {{1, 0, 0, 0}, {0, 0, 1, 1}, {1, 1, -1, 1}};
  CHECK(face_matrices(c, lower).count(wall) == 0);
  CHECK(face_matrices(c, upper).count(wall) == 0);
}
