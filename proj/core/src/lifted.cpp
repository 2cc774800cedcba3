#include "fanfactor/lifted.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fanfactor/lp.hpp"

namespace fanfactor {

Vec base_of(const Vec& lifted) {
  assert(!lifted.empty());
  return Vec(lifted.begin(), lifted.end() - 1);
}

Int height_of(const Vec& lifted) {
  assert(!lifted.empty());
  return lifted.back();
}

Mat projected_rays(const LiftedFan& s, const ConeIdx& c) {
  Mat m;
  m.reserve(c.size());
  for (int i : c) m.push_back(base_of(s.fan.rays.at(i)));
  return m;
}

bool pi_independent(const LiftedFan& s, const ConeIdx& c) {
  Mat m = projected_rays(s, c);
  return rank_of(m) == static_cast<int>(m.size());
}

bool pi_strongly_convex(const LiftedFan& s, const ConeIdx& c) {
  Mat m = projected_rays(s, c);
  CombinationSolutions sol = solve_combination(m, QVec(s.base_dim, Rat(0)));
  if (sol.kernel.empty()) return true;
  if (sol.kernel.size() == 1) {
    bool haspos = false, hasneg = false;
    for (const auto& x : sol.kernel[0]) {
      if (x > 0) haspos = true;
      if (x < 0) hasneg = true;
    }
    return haspos && hasneg;
  }
  // higher corank (never a simplicial lifted cone): pointedness of the
  // projected cone means no nonzero nonnegative relation
  int k = static_cast<int>(m.size());
  std::vector<LinearConstraint> cons;
  for (int j = 0; j < s.base_dim; ++j) {
    LinearConstraint con;
    con.a.resize(k);
    for (int i = 0; i < k; ++i) con.a[i] = Rat(m[i][j]);
    con.rel = Rel::eq;
    con.b = 0;
    cons.push_back(std::move(con));
  }
  for (int i = 0; i < k; ++i) {
    LinearConstraint con;
    con.a.assign(k, Rat(0));
    con.a[i] = 1;
    con.rel = Rel::ge;
    cons.push_back(std::move(con));
  }
  LinearConstraint total;
  total.a.assign(k, Rat(1));
  total.rel = Rel::eq;
  total.b = 1;
  cons.push_back(std::move(total));
  return !lp_feasible(k, cons).feasible;
}

std::optional<Circuit> circuit_of(const LiftedFan& s, const ConeIdx& cone) {
  Mat m = projected_rays(s, cone);
  CombinationSolutions sol = solve_combination(m, QVec(s.base_dim, Rat(0)));
  if (sol.kernel.empty()) return std::nullopt;
  if (sol.kernel.size() > 1)
    throw std::runtime_error("circuit_of: projected corank exceeds one");
  QVec r = sol.kernel[0];
  Rat slope = 0;
  for (std::size_t i = 0; i < cone.size(); ++i)
    slope += r[i] * Rat(height_of(s.fan.rays[cone[i]]));
  if (slope == 0) throw std::runtime_error("circuit_of: degenerate lifted relation");
  if (slope < 0)
    for (auto& x : r) x = -x;
  // rescale to the relation among primitive projections, so |r_i| = 1 exactly
  // at the facets of maximal multiplicity
  for (std::size_t i = 0; i < cone.size(); ++i) {
    Int mi = content(m[i]);
    if (mi > 1) r[i] *= Rat(mi);
  }
  Rat maxabs = 0;
  for (const auto& x : r) {
    Rat a = abs(x);
    if (a > maxabs) maxabs = a;
  }
  for (auto& x : r) x /= maxabs;
  Circuit c;
  for (std::size_t i = 0; i < cone.size(); ++i) {
    if (r[i] == 0) continue;
    c.rays.push_back(cone[i]);
    c.rel.push_back(r[i]);
    if (r[i] > 0) {
      c.pos.push_back(cone[i]);
      if (r[i] == 1) c.pos1.push_back(cone[i]);
    } else {
      c.neg.push_back(cone[i]);
      if (r[i] == -1) c.neg1.push_back(cone[i]);
    }
  }
  return c;
}

std::vector<Circuit> circuits(const LiftedFan& s) {
  std::map<ConeIdx, Circuit> out;
  for (const auto& c : s.fan.maximal) {
    auto circ = circuit_of(s, c);
    if (circ) out.emplace(circ->rays, *circ);
  }
  std::vector<Circuit> v;
  v.reserve(out.size());
  for (auto& kv : out) v.push_back(std::move(kv.second));
  return v;
}

std::optional<FiberPiece> cone_fiber(const LiftedFan& s, const ConeIdx& cone,
                                     const QVec& x) {
  Mat m = projected_rays(s, cone);
  CombinationSolutions sol = solve_combination(m, x);
  if (!sol.consistent) return std::nullopt;
  QVec heights(cone.size());
  for (std::size_t i = 0; i < cone.size(); ++i)
    heights[i] = Rat(height_of(s.fan.rays[cone[i]]));
  if (sol.kernel.empty()) {
    for (const auto& c : sol.particular)
      if (c < 0) return std::nullopt;
    Rat t = qdot(sol.particular, heights);
    return FiberPiece{t, t};
  }
  if (sol.kernel.size() > 1)
    throw std::runtime_error("cone_fiber: projected corank exceeds one");
  const QVec& r = sol.kernel[0];
  bool has_lo = false, has_hi = false;
  Rat lo = 0, hi = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] == 0) {
      if (sol.particular[i] < 0) return std::nullopt;
      continue;
    }
    Rat bound = -sol.particular[i] / r[i];
    if (r[i] > 0) {
      if (!has_lo || bound > lo) lo = bound;
      has_lo = true;
    } else {
      if (!has_hi || bound < hi) hi = bound;
      has_hi = true;
    }
  }
  if (!has_lo || !has_hi)
    throw std::runtime_error("cone_fiber: unbounded fiber over " + qvec_str(x));
  if (lo > hi) return std::nullopt;
  Rat t0 = qdot(sol.particular, heights);
  Rat slope = qdot(r, heights);
  Rat a = t0 + lo * slope, b = t0 + hi * slope;
  if (a > b) std::swap(a, b);
  return FiberPiece{a, b};
}

std::vector<FiberPiece> fiber_components(const LiftedFan& s, const QVec& x) {
  std::vector<FiberPiece> pieces;
  for (const auto& c : s.fan.maximal) {
    auto p = cone_fiber(s, c, x);
    if (p) pieces.push_back(*p);
  }
  std::sort(pieces.begin(), pieces.end(), [](const FiberPiece& a, const FiberPiece& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<FiberPiece> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      if (p.hi > merged.back().hi) merged.back().hi = p.hi;
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

namespace {

// does the fiber of this cone continue past a relint point of the face:
// below it iff every positive circuit ray lies in the face (above: negative)
bool fiber_continues(const LiftedFan& s, const Circuit& circ, const ConeIdx& face,
                     Side side) {
  const ConeIdx& rays = side == Side::lower ? circ.pos : circ.neg;
  (void)s;
  return subset_of(rays, face);
}

}  // namespace

std::vector<ConeIdx> boundary_faces(const LiftedFan& s, Side side, bool maximal_only) {
  std::vector<std::optional<Circuit>> circ(s.fan.maximal.size());
  for (std::size_t i = 0; i < s.fan.maximal.size(); ++i)
    circ[i] = circuit_of(s, s.fan.maximal[i]);

  std::set<ConeIdx> faces;
  for (const auto& mcone : s.fan.maximal) {
    int k = static_cast<int>(mcone.size());
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      ConeIdx f;
      for (int i = 0; i < k; ++i)
        if (mask & (1u << i)) f.push_back(mcone[i]);
      faces.insert(std::move(f));
    }
  }

  std::vector<ConeIdx> picked;
  for (const auto& f : faces) {
    bool rim = true;
    for (std::size_t i = 0; i < s.fan.maximal.size() && rim; ++i) {
      if (!subset_of(f, s.fan.maximal[i])) continue;
      if (circ[i] && fiber_continues(s, *circ[i], f, side)) rim = false;
    }
    if (rim) picked.push_back(f);
  }
  if (maximal_only) {
    std::vector<ConeIdx> top;
    for (const auto& f : picked) {
      bool inside = false;
      for (const auto& g : picked)
        if (f != g && subset_of(f, g)) {
          inside = true;
          break;
        }
      if (!inside) top.push_back(f);
    }
    picked = std::move(top);
  }
  return picked;
}

namespace {

void verify_slab_probes(const LiftedFan& s) {
  std::set<ConeIdx> faces;
  for (const auto& mcone : s.fan.maximal) {
    int k = static_cast<int>(mcone.size());
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      ConeIdx f;
      for (int i = 0; i < k; ++i)
        if (mask & (1u << i)) f.push_back(mcone[i]);
      faces.insert(std::move(f));
    }
  }
  for (const auto& f : faces) {
    Vec p = zero_vec(s.fan.dim);
    for (int i : f) p = add(p, s.fan.rays[i]);
    QVec x = to_q(base_of(p));
    auto comps = fiber_components(s, x);
    if (comps.size() != 1)
      throw std::runtime_error("support is not slab-like over " + qvec_str(x));
  }
}

}  // namespace

Fan project_boundary(const LiftedFan& s, Side side, bool verify_slab) {
  if (verify_slab) verify_slab_probes(s);
  Fan out;
  out.dim = s.base_dim;
  std::map<Vec, int, decltype(&vec_less)> index(&vec_less);
  std::set<ConeIdx> cones;
  for (const auto& f : boundary_faces(s, side)) {
    ConeIdx c;
    for (int i : f) {
      Vec w = primitive(base_of(s.fan.rays[i]));
      auto it = index.find(w);
      if (it == index.end()) {
        it = index.emplace(w, static_cast<int>(out.rays.size())).first;
        out.rays.push_back(w);
      }
      c.push_back(it->second);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    cones.insert(std::move(c));
  }
  out.maximal.assign(cones.begin(), cones.end());
  return out;
}

LiftedFan lifted_closed_star(const LiftedFan& s, const ConeIdx& tau) {
  return {s.base_dim, closed_star(s.fan, tau)};
}

LiftedFan vertical_flip(const LiftedFan& s) {
  LiftedFan out = s;
  for (auto& r : out.fan.rays) r.back() = -r.back();
  return out;
}

namespace {

Mat face_ray_matrix(const Fan& f, const ConeIdx& c) {
  Mat m = cone_rays_of(f, c);
  std::sort(m.begin(), m.end(), vec_less);
  return m;
}

}  // namespace

CobordismReport check_cobordism(const LiftedFan& s, const Fan& lower, const Fan& upper,
                                bool deep) {
  CobordismReport rep;
  auto fail = [&rep](std::string m) { rep.failures.push_back(std::move(m)); };

  if (s.fan.dim != s.base_dim + 1) {
    fail("lifted fan dimension must exceed the base dimension by one");
    return rep;
  }
  if (lower.dim != s.base_dim || upper.dim != s.base_dim) {
    fail("endpoint fan dimension differs from the base dimension");
    return rep;
  }
  try {
    validate_fan(lower);
  } catch (const std::exception& e) {
    fail(std::string("lower fan: ") + e.what());
  }
  try {
    validate_fan(upper);
  } catch (const std::exception& e) {
    fail(std::string("upper fan: ") + e.what());
  }
  try {
    if (deep)
      validate_fan(s.fan);
    else
      validate_fan_shape(s.fan);
  } catch (const std::exception& e) {
    fail(std::string("lifted fan: ") + e.what());
  }
  if (!rep.failures.empty()) return rep;

  for (const auto& c : s.fan.maximal)
    if (!pi_strongly_convex(s, c)) {
      std::ostringstream os;
      os << "cone {";
      for (int i : c) os << ' ' << vec_str(s.fan.rays[i]);
      os << " } is not strongly convex over the base";
      fail(os.str());
    }
  if (!rep.failures.empty()) return rep;

  try {
    verify_slab_probes(s);
  } catch (const std::exception& e) {
    fail(e.what());
    return rep;
  }

  auto check_side = [&](Side side, const Fan& target, const char* name) {
    std::set<Mat> projected;
    for (const auto& f : boundary_faces(s, side)) {
      Mat m;
      for (int i : f) m.push_back(primitive(base_of(s.fan.rays[i])));
      std::sort(m.begin(), m.end(), vec_less);
      if (!projected.insert(m).second)
        fail(std::string(name) + " boundary: two faces project onto the same cone");
    }
    std::set<Mat> wanted;
    for (const auto& c : target.maximal) wanted.insert(face_ray_matrix(target, c));
    for (const auto& m : projected)
      if (!wanted.count(m)) {
        std::ostringstream os;
        os << name << " boundary face projects onto no maximal cone of the endpoint:";
        for (const auto& r : m) os << ' ' << vec_str(r);
        fail(os.str());
      }
    for (const auto& m : wanted)
      if (!projected.count(m)) {
        std::ostringstream os;
        os << name << " endpoint cone not covered by the boundary:";
        for (const auto& r : m) os << ' ' << vec_str(r);
        fail(os.str());
      }
  };
  check_side(Side::lower, lower, "lower");
  check_side(Side::upper, upper, "upper");

  rep.valid = rep.failures.empty();
  return rep;
}

LiftedFan compose(const LiftedFan& a, const LiftedFan& b) {
  if (a.base_dim != b.base_dim || a.fan.dim != b.fan.dim)
    throw std::invalid_argument("compose: dimension mismatch");

  std::set<Mat> up_a, lo_b;
  for (const auto& f : boundary_faces(a, Side::upper, false))
    up_a.insert(face_ray_matrix(a.fan, f));
  for (const auto& f : boundary_faces(b, Side::lower, false))
    lo_b.insert(face_ray_matrix(b.fan, f));
  if (up_a != lo_b)
    throw std::runtime_error("compose: the boundaries to glue do not match");

  // the fans may share nothing beyond the glued boundary
  const std::set<Mat>& glue_faces = up_a;
  auto face_set = [](const LiftedFan& s) {
    std::set<Mat> out;
    for (const auto& c : s.fan.maximal) {
      int k = static_cast<int>(c.size());
      for (unsigned mask = 1; mask < (1u << k); ++mask) {
        ConeIdx f;
        for (int i = 0; i < k; ++i)
          if (mask & (1u << i)) f.push_back(c[i]);
        out.insert(face_ray_matrix(s.fan, f));
      }
    }
    return out;
  };
  std::set<Mat> fa = face_set(a), fb = face_set(b);
  for (const auto& m : fa)
    if (fb.count(m) && !glue_faces.count(m)) {
      std::ostringstream os;
      os << "compose: fans share a cone outside the glued boundary:";
      for (const auto& r : m) os << ' ' << vec_str(r);
      throw std::runtime_error(os.str());
    }

  LiftedFan u;
  u.base_dim = a.base_dim;
  u.fan.dim = a.fan.dim;
  std::map<Vec, int, decltype(&vec_less)> index(&vec_less);
  auto intern = [&](const Vec& v) {
    auto it = index.find(v);
    if (it == index.end()) {
      it = index.emplace(v, static_cast<int>(u.fan.rays.size())).first;
      u.fan.rays.push_back(v);
    }
    return it->second;
  };
  std::set<ConeIdx> cones;
  for (const LiftedFan* part : {&a, &b})
    for (const auto& c : part->fan.maximal) {
      ConeIdx nc;
      for (int i : c) nc.push_back(intern(part->fan.rays[i]));
      std::sort(nc.begin(), nc.end());
      cones.insert(std::move(nc));
    }
  for (const auto& c : cones) {
    bool inside = false;
    for (const auto& d : cones)
      if (c != d && subset_of(c, d)) {
        inside = true;
        break;
      }
    if (!inside) u.fan.maximal.push_back(c);
  }
  return u;
}

}  // namespace fanfactor
