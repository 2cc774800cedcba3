#pragma once

// the worked examples used across the suites, built in code so the tests do
// not depend on the JSON layer, plus small random generators for the
// property suites

#include <random>
#include <vector>

#include "fanfactor/fan.hpp"
#include "fanfactor/lifted.hpp"

namespace fixtures {

using namespace fanfactor;

inline Fan fixA_delta() {
  Fan f;
  f.dim = 3;
  f.rays = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}};
  f.maximal = {{0, 1, 2}, {0, 1, 3}};
  return f;
}

inline Fan fixA_delta2() {
  Fan f;
  f.dim = 3;
  f.rays = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}};
  f.maximal = {{0, 2, 3}, {1, 2, 3}};
  return f;
}

inline LiftedFan fixA_sigma() {
  LiftedFan s;
  s.base_dim = 3;
  s.fan.dim = 4;
  s.fan.rays = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}, {1, 1, -1, 1}};
  s.fan.maximal = {{0, 1, 2, 3}};
  return s;
}

inline Fan fixB_delta() {
  Fan f;
  f.dim = 2;
  f.rays = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  f.maximal = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return f;
}

inline Fan fixB_delta2() {
  Fan f;
  f.dim = 2;
  f.rays = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  f.maximal = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return f;
}

inline LiftedFan fixB_sigma() {
  LiftedFan s;
  s.base_dim = 2;
  s.fan.dim = 3;
  s.fan.rays = {{1, 0, -2}, {0, 1, -1}, {-1, 0, -2}, {0, -1, -1},
                {1, 1, 2},  {-1, 1, 0}, {-1, -1, 2}, {1, -1, 0}};
  s.fan.maximal = {{0, 1, 7}, {1, 2, 4}, {2, 3, 5}, {0, 3, 6},
                   {1, 4, 7}, {2, 4, 5}, {3, 5, 6}, {0, 6, 7}};
  return s;
}

inline Fan fixC_delta() {
  Fan f;
  f.dim = 3;
  f.rays = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  f.maximal = {{0, 1, 2}};
  return f;
}

inline LiftedFan fixC_sigma() {
  LiftedFan s;
  s.base_dim = 3;
  s.fan.dim = 4;
  s.fan.rays = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 1, 1, 1}, {1, 1, 2, 2}};
  s.fan.maximal = {{0, 1, 2, 3}, {1, 2, 3, 4}, {0, 2, 3, 4}};
  return s;
}

inline Fan fixD_delta() {
  Fan f;
  f.dim = 2;
  f.rays = {{1, 0}, {0, 1}};
  f.maximal = {{0, 1}};
  return f;
}

inline LiftedFan fixD_sigma() {
  LiftedFan s;
  s.base_dim = 2;
  s.fan.dim = 3;
  s.fan.rays = {{1, 0, -1}, {0, 1, -1}};
  s.fan.maximal = {{0, 1}};
  return s;
}

// complete smooth fan of n-dimensional projective space: the coordinate rays
// plus their negated sum, maximal cones all n-subsets
inline Fan projective_space(int n) {
  Fan f;
  f.dim = n;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    f.rays.push_back(e);
  }
  f.rays.push_back(Vec(n, -1));
  for (int skip = 0; skip <= n; ++skip) {
    ConeIdx c;
    for (int i = 0; i <= n; ++i)
      if (i != skip) c.push_back(i);
    f.maximal.push_back(c);
  }
  return canonical(f);
}

// one random smooth star subdivision: the sum of a random face (>= 2 rays)
// of a random maximal cone. Sums of generator subsets of a smooth cone give
// smooth subdivisions, so the walk stays inside smooth fans.
inline Fan random_subdivision(const Fan& f, std::mt19937_64& rng) {
  const ConeIdx& m = f.maximal[rng() % f.maximal.size()];
  int k = 2 + static_cast<int>(rng() % (m.size() - 1));
  ConeIdx face(m);
  for (int i = static_cast<int>(face.size()) - 1; i > 0; --i)
    std::swap(face[i], face[rng() % (i + 1)]);
  face.resize(k);
  Vec v = zero_vec(f.dim);
  for (int i : face) v = add(v, f.rays[i]);
  return star_subdivide(f, primitive(v)).fan;
}

inline Fan random_walk(Fan f, int steps, std::mt19937_64& rng) {
  for (int i = 0; i < steps; ++i) f = random_subdivision(f, rng);
  return f;
}

}  // namespace fixtures
