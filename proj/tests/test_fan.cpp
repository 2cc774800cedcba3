#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"

using namespace fanfactor;
using namespace fixtures;

TEST_CASE("cone index set operations") {
  CHECK(subset_of({1, 3}, {0, 1, 3, 5}));
  CHECK_FALSE(subset_of({1, 4}, {0, 1, 3, 5}));
  CHECK(subset_of({}, {0}));
  CHECK(cone_union({0, 2}, {1, 2}) == ConeIdx{0, 1, 2});
  CHECK(cone_meet({0, 2, 4}, {2, 3, 4}) == ConeIdx{2, 4});
  CHECK(cone_minus({0, 1, 2}, {1}) == ConeIdx{0, 2});
}

TEST_CASE("fixture fans validate") {
  CHECK_NOTHROW(validate_fan(fixA_delta()));
  CHECK_NOTHROW(validate_fan(fixA_delta2()));
  CHECK_NOTHROW(validate_fan(fixB_delta()));
  CHECK_NOTHROW(validate_fan(fixB_delta2()));
  CHECK_NOTHROW(validate_fan(fixC_delta()));
  CHECK_NOTHROW(validate_fan(fixD_delta()));
  for (int n = 1; n <= 4; ++n) CHECK_NOTHROW(validate_fan(projective_space(n)));
}

TEST_CASE("validate_fan rejects bad inputs") {
  Fan f = fixA_delta();
  f.rays[0] = {2, 0, 0};  // not primitive
  CHECK_THROWS(validate_fan(f));

  Fan g = fixA_delta();
  g.maximal = {{0, 1, 2}, {0, 1}};  // nested cones
  CHECK_THROWS(validate_fan(g));

  // two full cones overlapping in their interiors, not along a face
  Fan h;
  h.dim = 2;
  h.rays = {{1, 0}, {0, 1}, {1, 1}};
  h.maximal = {{0, 1}, {0, 2}};  // <e1,e2> contains <e1,e1+e2>
  CHECK_THROWS(validate_fan(h));

  Fan k = fixA_delta();
  k.maximal[0] = {0, 2, 1};  // unsorted index set
  CHECK_THROWS(validate_fan(k));
}

TEST_CASE("cones_meet_in_shared_face") {
  Fan f = fixA_delta();
  CHECK(cones_meet_in_shared_face(f, {0, 1, 2}, {0, 1, 3}));
  Fan h;
  h.dim = 2;
  h.rays = {{1, 0}, {0, 1}, {1, 1}};
  h.maximal = {{0, 1}, {0, 2}};
  CHECK_FALSE(cones_meet_in_shared_face(h, {0, 1}, {0, 2}));
}

TEST_CASE("canonical and fan_equal ignore presentation order") {
  Fan f = fixA_delta();
  Fan g;
  g.dim = 3;
  g.rays = {{0, 0, 1}, {1, 1, -1}, {0, 1, 0}, {1, 0, 0}};
  g.maximal = {{1, 2, 3}, {0, 2, 3}};  // same cones under the permuted rays
  CHECK(fan_equal(f, g));
  CHECK(fan_key(canonical(f)) == fan_key(canonical(g)));
  CHECK_FALSE(fan_equal(fixA_delta(), fixA_delta2()));
}

TEST_CASE("all_faces of the two-cone fan") {
  auto faces = all_faces(fixA_delta());
  CHECK(faces.size() == 12);  // empty, 4 rays, 5 edges, 2 facets
  CHECK(std::count(faces.begin(), faces.end(), ConeIdx{}) == 1);
  CHECK(std::count(faces.begin(), faces.end(), ConeIdx{0, 1}) == 1);
  CHECK(std::count(faces.begin(), faces.end(), ConeIdx{2, 3}) == 0);
  CHECK(std::is_sorted(faces.begin(), faces.end()));
}

TEST_CASE("star, closed star and link") {
  Fan f = fixA_delta();
  CHECK(star_of(f, {0, 1}) == std::vector<int>{0, 1});
  CHECK(star_of(f, {2}) == std::vector<int>{0});
  CHECK(star_of(f, {}) == std::vector<int>{0, 1});

  Fan cs = closed_star(f, {0, 1});
  CHECK(fan_equal(cs, f));
  Fan cs2 = closed_star(f, {2});
  CHECK(cs2.maximal.size() == 1);

  auto lk = link_of(f, {0, 1});
  CHECK(lk == std::vector<ConeIdx>{{2}, {3}});
  auto lk2 = link_of(f, {0, 1, 2});
  CHECK(lk2 == std::vector<ConeIdx>{{}});
}

TEST_CASE("find_carrier locates the face through a point") {
  Fan f = fixA_delta();
  CHECK(find_carrier(f, to_q(Vec{1, 1, 0})) == ConeIdx{0, 1});
  CHECK(find_carrier(f, to_q(Vec{1, 0, 0})) == ConeIdx{0});
  CHECK(find_carrier(f, to_q(Vec{1, 2, 1})) == ConeIdx{0, 1, 2});
  CHECK(find_carrier(f, to_q(Vec{2, 2, -1})) == ConeIdx{0, 1, 3});
  CHECK_FALSE(find_carrier(f, to_q(Vec{-1, 0, 0})).has_value());
  CHECK(find_carrier(f, to_q(zero_vec(3))) == ConeIdx{});
}

TEST_CASE("star subdivision of the shared wall") {
  Fan f = fixA_delta();
  Subdivision sub = star_subdivide(f, {1, 1, 0});
  CHECK(sub.changed);
  const Fan& t = sub.fan;
  CHECK(t.rays.size() == 5);
  CHECK(t.maximal.size() == 4);
  CHECK(is_smooth(t));
  int m = find_ray(t, {1, 1, 0});
  REQUIRE(m >= 0);
  for (const auto& c : t.maximal) CHECK(subset_of({m}, c));

  // subdividing at an existing ray is the identity
  Subdivision again = star_subdivide(t, {1, 1, 0});
  CHECK_FALSE(again.changed);
  CHECK(fan_equal(again.fan, t));

  // outside the support
  CHECK_THROWS(star_subdivide(f, {-1, -1, 0}));
}

TEST_CASE("star subdivision only splits the star of the carrier") {
  Fan f = fixC_delta();
  Subdivision sub = star_subdivide(f, {1, 1, 0});
  CHECK(sub.fan.maximal.size() == 2);
  Subdivision sub2 = star_subdivide(sub.fan, {0, 1, 1});
  // (0,1,1) lies in only one of the two cones
  CHECK(sub2.fan.maximal.size() == 3);
  CHECK(is_smooth(sub2.fan));
}

TEST_CASE("assembling candidates at the FIX-A wall ray") {
  Fan top = star_subdivide(fixA_delta(), {1, 1, 0}).fan;
  auto cands = star_assemble_candidates(top, {1, 1, 0});
  REQUIRE(cands.size() == 2);
  bool has_delta = false, has_delta2 = false;
  for (const auto& c : cands) {
    if (fan_equal(c, fixA_delta())) has_delta = true;
    if (fan_equal(c, fixA_delta2())) has_delta2 = true;
    CHECK(fan_equal(star_subdivide(c, {1, 1, 0}).fan, top));
  }
  CHECK(has_delta);
  CHECK(has_delta2);

  Fan picked = star_assemble(top, {1, 1, 0});
  CHECK((fan_equal(picked, fixA_delta()) || fan_equal(picked, fixA_delta2())));
  // deterministic pick
  CHECK(fan_equal(picked, star_assemble(top, {1, 1, 0})));

  CHECK_THROWS(star_assemble(top, {5, 5, 5}));  // not a ray
}

TEST_CASE("subdivide then assemble restores the fan among the candidates") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    int n = 2 + static_cast<int>(rng() % 2);
    Fan f = random_walk(projective_space(n), static_cast<int>(rng() % 4), rng);
    const ConeIdx& m = f.maximal[rng() % f.maximal.size()];
    int k = 2 + static_cast<int>(rng() % (m.size() - 1));
    ConeIdx face(m.begin(), m.begin() + k);
    Vec v = zero_vec(f.dim);
    for (int i : face) v = add(v, f.rays[i]);
    v = primitive(v);
    Subdivision sub = star_subdivide(f, v);
    REQUIRE(sub.changed);
    auto cands = star_assemble_candidates(sub.fan, v);
    bool found = false;
    for (const auto& c : cands) {
      CHECK(fan_equal(star_subdivide(c, v).fan, sub.fan));
      if (fan_equal(c, f)) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("smoothness") {
  CHECK(is_smooth(fixA_delta()));
  CHECK(is_smooth(projective_space(3)));
  Fan f;
  f.dim = 2;
  f.rays = {{1, 0}, {1, 2}};
  f.maximal = {{0, 1}};
  CHECK_FALSE(is_smooth(f));  // index 2 quadratic cone
}

TEST_CASE("support membership and equality") {
  Fan f = fixA_delta();
  CHECK(in_support(f, to_q(Vec{1, 1, 0})));
  CHECK_FALSE(in_support(f, to_q(Vec{-1, -1, 0})));
  CHECK(supports_equal(fixA_delta(), fixA_delta2()));
  CHECK(supports_equal(fixB_delta(), fixB_delta2()));
  Fan g = fixA_delta();
  g.maximal.pop_back();
  CHECK_FALSE(supports_equal(fixA_delta(), g));
  std::mt19937_64 rng(5);
  CHECK(supports_equal(projective_space(2), random_walk(projective_space(2), 3, rng)));
}

TEST_CASE("common refinement of the FIX-A pair is their shared subdivision") {
  PolyFan pf = common_refinement(fixA_delta(), fixA_delta2());
  Fan r = fan_from_polyfan(pf);
  CHECK(fan_equal(r, star_subdivide(fixA_delta(), {1, 1, 0}).fan));
}

TEST_CASE("common refinement with itself is itself") {
  Fan f = fixB_delta();
  Fan r = fan_from_polyfan(common_refinement(f, f));
  CHECK(fan_equal(r, f));
}

TEST_CASE("subdivision preserves smoothness along random walks") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    Fan f = random_walk(projective_space(2 + static_cast<int>(t % 2)), 5, rng);
    CHECK(is_smooth(f));
    CHECK_NOTHROW(validate_fan(f));
  }
}
