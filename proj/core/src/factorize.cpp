#include "fanfactor/factorize.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "fanfactor/builder.hpp"
#include "fanfactor/collapse.hpp"
#include "fanfactor/pidesing.hpp"

namespace fanfactor {

namespace {

Mat face_rays(const Fan& f, const ConeIdx& c) {
  Mat m;
  m.reserve(c.size());
  for (int i : c) m.push_back(f.rays[i]);
  std::sort(m.begin(), m.end(), vec_less);
  return m;
}

std::string cone_str(const Fan& f, const ConeIdx& c) {
  std::ostringstream os;
  os << '<';
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << ' ';
    os << vec_str(f.rays[c[i]]);
  }
  os << '>';
  return os.str();
}

bool is_cone_of(const Fan& f, const ConeIdx& c) {
  for (const auto& m : f.maximal)
    if (subset_of(c, m)) return true;
  return false;
}

ConeIdx resolve_cone(const Fan& f, const Mat& rays) {
  ConeIdx c;
  for (const auto& v : rays) {
    int i = find_ray(f, v);
    if (i < 0) throw std::logic_error("resolve_cone: ray " + vec_str(v) + " is missing");
    c.push_back(i);
  }
  std::sort(c.begin(), c.end());
  return c;
}

Vec pi_barycenter(const LiftedFan& s, const ConeIdx& tau) {
  Vec r = zero_vec(s.base_dim);
  for (int i : tau) r = add(r, primitive(base_of(s.fan.rays[i])));
  return r;
}

// distinct circuits whose closed star contains tau
std::vector<Circuit> circuits_at(const LiftedFan& s, const ConeIdx& tau) {
  std::map<ConeIdx, Circuit> found;
  for (const auto& m : s.fan.maximal) {
    if (!subset_of(tau, m)) continue;
    auto c = circuit_of(s, m);
    if (c) found.emplace(c->rays, *c);
  }
  std::vector<Circuit> out;
  out.reserve(found.size());
  for (auto& [k, v] : found) out.push_back(std::move(v));
  return out;
}

// watches the projected upper rim while a cobordism is being subdivided and
// records each rim change, which must be a single smooth star subdivision
struct UpTracker {
  Fan upper;
  Script moves;
};

// subdividing at tau leaves every circuit of its closed star pointing up only
// when tau meets the circuit in exactly the positive face, misses the circuit,
// or sits inside the negative face; any other overlap tilts it
bool subdivision_safe(const ConeIdx& tau, const Circuit& sig) {
  ConeIdx meet = cone_meet(tau, sig.rays);
  if (meet.empty() || meet == sig.pos) return true;
  return subset_of(tau, sig.neg);
}

LiftedFan midray_subdivide(const LiftedFan& s, const ConeIdx& tau, UpTracker* track) {
  if (tau.size() <= 1) return s;
  if (!is_cone_of(s.fan, tau))
    throw std::logic_error("midray_subdivide: " + cone_str(s.fan, tau) + " is not a cone");
  Vec rho = midray(s, tau, primitive(pi_barycenter(s, tau)));
  auto sub = star_subdivide(s.fan, rho);
  if (!sub.changed) return s;
  LiftedFan out{s.base_dim, sub.fan};
  if (track) {
    Fan nu = project_boundary(out, Side::upper);
    if (!fan_equal(nu, track->upper)) {
      Vec b = primitive(base_of(rho));
      auto up = star_subdivide(track->upper, b);
      if (!up.changed || !fan_equal(up.fan, nu))
        throw std::logic_error("upper rim did not evolve by the star subdivision at " +
                               vec_str(b));
      track->moves.push_back({MoveOp::subdivide, b});
      track->upper = std::move(nu);
    }
  }
  return out;
}

// subdivide at tau after taming every circuit the cut would tilt: the join of
// a blocker's positive face with the part of tau outside it is always a face
// of the offending cone, and cutting there frees tau from the blocker's star
LiftedFan safe_subdivide(LiftedFan cur, const ConeIdx& tau, UpTracker* track, int depth) {
  if (depth > 64) throw std::logic_error("neatify: repair recursion runs too deep");
  for (int pass = 0; pass < 64; ++pass) {
    if (tau.size() <= 1 || !is_cone_of(cur.fan, tau)) return cur;
    std::optional<Circuit> block;
    for (const auto& sg : circuits_at(cur, tau))
      if (!subdivision_safe(tau, sg)) {
        block = sg;
        break;
      }
    if (!block) return midray_subdivide(cur, tau, track);
    ConeIdx mu = block->pos;
    for (int i : tau)
      if (!std::binary_search(block->rays.begin(), block->rays.end(), i))
        mu = cone_union(mu, ConeIdx{i});
    if (mu == tau)
      throw std::logic_error("neatify: cannot tame the circuit " +
                             cone_str(cur.fan, block->rays));
    cur = safe_subdivide(std::move(cur), mu, track, depth + 1);
  }
  throw std::logic_error("neatify: taming does not settle at " + cone_str(cur.fan, tau));
}

// the upper rim of the whole fan as a standalone flat cobordism
LiftedFan degenerate_upper(const LiftedFan& s) {
  LiftedFan out;
  out.base_dim = s.base_dim;
  out.fan.dim = s.fan.dim;
  std::map<Vec, int, decltype(&vec_less)> index(&vec_less);
  std::set<ConeIdx> cones;
  for (const auto& f : boundary_faces(s, Side::upper, true)) {
    ConeIdx c;
    for (int i : f) {
      const Vec& v = s.fan.rays[i];
      auto it = index.find(v);
      if (it == index.end()) {
        it = index.emplace(v, static_cast<int>(out.fan.rays.size())).first;
        out.fan.rays.push_back(v);
      }
      c.push_back(it->second);
    }
    std::sort(c.begin(), c.end());
    cones.insert(std::move(c));
  }
  out.fan.maximal.assign(cones.begin(), cones.end());
  return out;
}

// glue a piece under a partial cobordism: union of the cones, cones of one
// part swallowed by the other dropped, and every surviving cross pair must
// meet in a shared face
LiftedFan glue_below(const LiftedFan& below, const LiftedFan& above) {
  if (below.base_dim != above.base_dim || below.fan.dim != above.fan.dim)
    throw std::invalid_argument("glue: dimension mismatch");
  LiftedFan u;
  u.base_dim = below.base_dim;
  u.fan.dim = below.fan.dim;
  std::map<Vec, int, decltype(&vec_less)> index(&vec_less);
  auto intern = [&](const Vec& v) {
    auto it = index.find(v);
    if (it == index.end()) {
      it = index.emplace(v, static_cast<int>(u.fan.rays.size())).first;
      u.fan.rays.push_back(v);
    }
    return it->second;
  };
  std::map<ConeIdx, int> cones;  // cone -> bitmask of parts it came from
  const LiftedFan* parts[2] = {&below, &above};
  for (int p = 0; p < 2; ++p)
    for (const auto& c : parts[p]->fan.maximal) {
      ConeIdx nc;
      for (int i : c) nc.push_back(intern(parts[p]->fan.rays[i]));
      std::sort(nc.begin(), nc.end());
      cones[nc] |= 1 << p;
    }
  std::vector<std::pair<ConeIdx, int>> kept;
  for (const auto& [c, mask] : cones) {
    bool inside = false;
    for (const auto& [d, dm] : cones)
      if (c != d && subset_of(c, d)) {
        inside = true;
        break;
      }
    if (!inside) kept.emplace_back(c, mask);
  }
  u.fan.maximal.reserve(kept.size());
  for (const auto& [c, mask] : kept) u.fan.maximal.push_back(c);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      if ((kept[i].second ^ kept[j].second) != 3) continue;
      if (!cones_meet_in_shared_face(u.fan, kept[i].first, kept[j].first))
        throw std::runtime_error("glue: cones " + cone_str(u.fan, kept[i].first) +
                                 " and " + cone_str(u.fan, kept[j].first) +
                                 " meet outside their shared face");
    }
  return u;
}

bool points_up(const Circuit& c) {
  Pointing p = pointing(c);
  return p == Pointing::up || p == Pointing::both;
}

// the shared body of neatify: rebuild s from its upper rim downwards, and
// after gluing the star of each circuit subdivide at the joins of its
// positive face with every link cone, largest joins first
LiftedFan neatify_impl(const LiftedFan& s, UpTracker* track) {
  CircuitGraph g = circuit_graph(s);
  CollapseCheck chk = is_collapsible(g);
  if (!chk.collapsible) throw std::invalid_argument("neatify: circuit graph has a cycle");
  for (const auto& c : g.nodes)
    if (!points_up(c))
      throw std::invalid_argument("neatify: circuit " + cone_str(s.fan, c.rays) +
                                  " is not pointing up");
  std::vector<int> order = order_circuits(s, g);
  LiftedFan cur = degenerate_upper(s);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Circuit& sig = g.nodes[*it];
    cur = glue_below(lifted_closed_star(s, sig.rays), cur);
    if (track) {
      Fan u = project_boundary(cur, Side::upper);
      if (!fan_equal(u, track->upper))
        throw std::logic_error("neatify: gluing moved the upper rim");
    }
    ConeIdx sc = resolve_cone(cur.fan, face_rays(s.fan, sig.rays));
    auto c2 = circuit_of(cur, sc);
    if (!c2) throw std::logic_error("neatify: circuit vanished after gluing");
    std::set<ConeIdx> family;
    for (const auto& lam : link_of(cur.fan, sc)) {
      int k = static_cast<int>(lam.size());
      for (unsigned mask = 0; mask < (1u << k); ++mask) {
        ConeIdx nu;
        for (int i = 0; i < k; ++i)
          if (mask & (1u << i)) nu.push_back(lam[i]);
        family.insert(cone_union(c2->pos, nu));
      }
    }
    std::vector<ConeIdx> todo(family.begin(), family.end());
    std::sort(todo.begin(), todo.end(), [&](const ConeIdx& a, const ConeIdx& b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return face_rays(cur.fan, a) < face_rays(cur.fan, b);
    });
    for (const auto& tau : todo) {
      bool safe = true;
      for (const auto& sg : circuits_at(cur, tau))
        if (!subdivision_safe(tau, sg)) {
          safe = false;
          break;
        }
      if (safe) cur = midray_subdivide(cur, tau, track);
    }
  }

  // the towers raised over one circuit can leave the star of a circuit born
  // later still reaching the lower rim beyond its own negative face; shave
  // such stars by joining the positive ray against the stray rim rays
  for (int round = 0;; ++round) {
    if (round >= 200) throw std::logic_error("neatify: the star condition will not settle");
    std::vector<ConeIdx> rim = boundary_faces(cur, Side::lower, false);
    std::map<Mat, std::pair<Circuit, std::vector<ConeIdx>>> bad;
    for (const auto& sig : circuits(cur)) {
      std::vector<ConeIdx> faces;
      for (const auto& t : rim) {
        if (t.empty() || subset_of(t, sig.neg)) continue;
        bool in_star = false;
        for (const auto& m : cur.fan.maximal)
          if (subset_of(t, m) && subset_of(sig.rays, m)) {
            in_star = true;
            break;
          }
        if (in_star) faces.push_back(t);
      }
      if (!faces.empty())
        bad.emplace(face_rays(cur.fan, sig.rays), std::make_pair(sig, std::move(faces)));
    }
    if (bad.empty()) break;
    std::size_t before = cur.fan.rays.size();
    for (const auto& [key, entry] : bad) {
      const Circuit& sig = entry.first;
      std::set<ConeIdx> fam;
      for (const auto& t : entry.second) {
        ConeIdx extra;
        for (int i : t)
          if (!std::binary_search(sig.rays.begin(), sig.rays.end(), i)) extra.push_back(i);
        int k = static_cast<int>(extra.size());
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
          ConeIdx nu;
          for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) nu.push_back(extra[i]);
          ConeIdx join = cone_union(sig.pos, nu);
          if (is_cone_of(cur.fan, join) && pi_independent(cur, join)) fam.insert(join);
        }
      }
      std::vector<ConeIdx> todo(fam.begin(), fam.end());
      std::sort(todo.begin(), todo.end(), [&](const ConeIdx& a, const ConeIdx& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return face_rays(cur.fan, a) < face_rays(cur.fan, b);
      });
      for (const auto& tau : todo) cur = safe_subdivide(std::move(cur), tau, track, 0);
    }
    if (cur.fan.rays.size() == before)
      throw std::logic_error("neatify: the star condition repair is not making progress");
  }
  return cur;
}

Fan rim_surgery(const Fan& cur, const Fan& lo, const Fan& hi) {
  std::set<Mat> remove;
  for (const auto& c : lo.maximal) remove.insert(face_rays(lo, c));
  std::set<Mat> keep;
  for (const auto& c : cur.maximal) {
    Mat m = face_rays(cur, c);
    if (remove.erase(m)) continue;
    keep.insert(std::move(m));
  }
  if (!remove.empty()) {
    std::ostringstream os;
    os << "extract: lower rim cone of the star is missing from the running fan:";
    for (const auto& v : *remove.begin()) os << ' ' << vec_str(v);
    throw std::logic_error(os.str());
  }
  for (const auto& c : hi.maximal) keep.insert(face_rays(hi, c));

  Fan out;
  out.dim = cur.dim;
  std::map<Vec, int, decltype(&vec_less)> index(&vec_less);
  for (const auto& m : keep) {
    ConeIdx c;
    for (const auto& v : m) {
      auto it = index.find(v);
      if (it == index.end()) {
        it = index.emplace(v, static_cast<int>(out.rays.size())).first;
        out.rays.push_back(v);
      }
      c.push_back(it->second);
    }
    std::sort(c.begin(), c.end());
    out.maximal.push_back(std::move(c));
  }
  std::sort(out.maximal.begin(), out.maximal.end());
  return out;
}

void require_factorable(const Fan& lower, const Fan& upper, const char* who) {
  validate_fan(lower);
  validate_fan(upper);
  if (!is_smooth(lower) || !is_smooth(upper))
    throw std::invalid_argument(std::string(who) + ": the fans must be smooth");
  if (!supports_equal(lower, upper))
    throw std::invalid_argument(std::string(who) + ": the fans have different supports");
}

}  // namespace

std::string move_str(const Move& m) {
  return (m.op == MoveOp::subdivide ? "sub " : "asm ") + vec_str(m.ray);
}

Pointing pointing(const Circuit& sigma) {
  bool up = sigma.pos.size() == 1;
  bool down = sigma.neg.size() == 1;
  if (up && down) return Pointing::both;
  if (up) return Pointing::up;
  if (down) return Pointing::down;
  return Pointing::neither;
}

BistellarData bistellar(const LiftedFan& s, const Circuit& sigma) {
  LiftedFan star = lifted_closed_star(s, sigma.rays);
  for (const auto& m : star.fan.maximal) {
    Profile p = profile_cone(star, m);
    if (p.a != 1)
      throw std::invalid_argument("bistellar: the closed star is not pi-nonsingular at " +
                                  cone_str(s.fan, m));
  }
  Vec l = zero_vec(s.base_dim);
  for (int i : sigma.pos) l = add(l, primitive(base_of(s.fan.rays[i])));
  Vec l2 = zero_vec(s.base_dim);
  for (int i : sigma.neg) l2 = add(l2, primitive(base_of(s.fan.rays[i])));
  if (vec_cmp(l, l2) != 0)
    throw std::logic_error("bistellar: the sign classes disagree on the witness ray");
  if (vec_cmp(primitive(l), l) != 0)
    throw std::logic_error("bistellar: the witness ray is not primitive");

  BistellarData out;
  out.circuit = sigma.rays;
  out.ray = l;
  out.lower = project_boundary(star, Side::lower);
  out.upper = project_boundary(star, Side::upper);
  auto a = star_subdivide(out.lower, l);
  auto b = star_subdivide(out.upper, l);
  if (!fan_equal(a.fan, b.fan))
    throw std::logic_error("bistellar: the two rims do not meet at the witness subdivision");
  out.middle = a.fan;
  if (!is_smooth(out.lower) || !is_smooth(out.upper) || !is_smooth(out.middle))
    throw std::logic_error("bistellar: a rim fan is not smooth");
  return out;
}

Script extract_weak_script(const LiftedFan& s) {
  CircuitGraph g = circuit_graph(s);
  CollapseCheck chk = is_collapsible(g);
  if (!chk.collapsible) {
    std::ostringstream os;
    os << "extract: circuit graph has a cycle:";
    for (int i : chk.cycle) os << ' ' << cone_str(s.fan, g.nodes[i].rays);
    throw std::runtime_error(os.str());
  }
  std::vector<int> order = order_circuits(s, g);
  Fan cur = project_boundary(s, Side::lower);
  Fan target = project_boundary(s, Side::upper);
  Script out;
  for (int oi : order) {
    BistellarData bi = bistellar(s, g.nodes[oi]);
    if (fan_equal(bi.lower, bi.upper)) continue;
    Fan next = rim_surgery(cur, bi.lower, bi.upper);
    auto sub = star_subdivide(cur, bi.ray);
    if (!sub.changed) {
      auto back = star_subdivide(next, bi.ray);
      if (!back.changed || !fan_equal(back.fan, cur))
        throw std::logic_error(
            "extract: the witness ray exists but the rims do not assemble across it");
      out.push_back({MoveOp::assemble, bi.ray});
    } else if (fan_equal(sub.fan, next)) {
      out.push_back({MoveOp::subdivide, bi.ray});
    } else {
      auto back = star_subdivide(next, bi.ray);
      if (!back.changed || !fan_equal(back.fan, sub.fan))
        throw std::logic_error(
            "extract: subdividing both rims at the witness ray gives different fans");
      if (!is_smooth(sub.fan))
        throw std::logic_error("extract: the middle fan is not smooth");
      out.push_back({MoveOp::subdivide, bi.ray});
      out.push_back({MoveOp::assemble, bi.ray});
    }
    if (!is_smooth(next)) throw std::logic_error("extract: intermediate fan is not smooth");
    cur = std::move(next);
  }
  if (!fan_equal(cur, target))
    throw std::logic_error("extract: the walk did not end at the upper rim");
  return out;
}

Script weak_factorize(const Fan& lower, const Fan& upper) {
  require_factorable(lower, upper, "weak_factorize");
  if (fan_equal(lower, upper)) return {};
  BuildResult built = build_cobordism(lower, upper);
  LiftedFan s = projectivize(built.cobordism);
  s = pi_desingularize(s);
  Script out = extract_weak_script(s);
  ScriptReport rep = verify_script(lower, out, upper);
  if (!rep.ok) throw std::logic_error("weak_factorize: replay failed: " + rep.message);
  return out;
}

LiftedFan apply_join_closed(const LiftedFan& s, const std::vector<ConeIdx>& family) {
  std::set<ConeIdx> members;
  for (const auto& t : family) {
    if (t.empty()) continue;
    if (!is_cone_of(s.fan, t))
      throw std::invalid_argument("apply_join_closed: " + cone_str(s.fan, t) +
                                  " is not a cone of the fan");
    if (!pi_independent(s, t))
      throw std::invalid_argument("apply_join_closed: " + cone_str(s.fan, t) +
                                  " is projection-dependent");
    for (const auto& sig : circuits_at(s, t))
      if (!cone_meet(t, sig.pos).empty() && !cone_meet(t, sig.neg).empty())
        throw std::invalid_argument("apply_join_closed: " + cone_str(s.fan, t) +
                                    " meets both sides of the circuit " +
                                    cone_str(s.fan, sig.rays));
    members.insert(t);
  }
  for (const auto& a : members)
    for (const auto& b : members) {
      ConeIdx u = cone_union(a, b);
      if (is_cone_of(s.fan, u) && !members.count(u))
        throw std::invalid_argument("apply_join_closed: the family misses the join " +
                                    cone_str(s.fan, u));
    }
  std::vector<ConeIdx> order(members.begin(), members.end());
  std::sort(order.begin(), order.end(), [&](const ConeIdx& a, const ConeIdx& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return face_rays(s.fan, a) < face_rays(s.fan, b);
  });
  LiftedFan cur = s;
  for (const auto& tau : order) cur = midray_subdivide(cur, tau, nullptr);
  return cur;
}

bool check_star_condition(const LiftedFan& s, const std::vector<ConeIdx>& family) {
  for (const auto& sig : circuits(s))
    for (const auto& t : family) {
      if (t.empty()) continue;
      bool in_star = false;
      for (const auto& m : s.fan.maximal)
        if (subset_of(t, m) && subset_of(sig.rays, m)) {
          in_star = true;
          break;
        }
      if (in_star && !subset_of(t, sig.neg)) return false;
    }
  return true;
}

LiftedFan point_up_star(const LiftedFan& s, const ConeIdx& sigma) {
  auto circ = circuit_of(s, sigma);
  if (!circ || circ->rays != sigma)
    throw std::invalid_argument("point_up_star: " + cone_str(s.fan, sigma) +
                                " is not a circuit");
  LiftedFan out = midray_subdivide(s, circ->pos, nullptr);
  if (out.fan.rays.size() == s.fan.rays.size()) return out;  // already pointing up

  int apex = static_cast<int>(out.fan.rays.size()) - 1;
  ConeIdx nc = cone_union(circ->neg, ConeIdx{apex});
  auto c2 = circuit_of(out, nc);
  if (!c2 || c2->rays != nc || !points_up(*c2))
    throw std::logic_error("point_up_star: the apex circuit is not pointing up");
  bool was_star = true;
  for (const auto& m : s.fan.maximal)
    if (!subset_of(sigma, m)) {
      was_star = false;
      break;
    }
  if (was_star)
    for (const auto& m : out.fan.maximal)
      if (!subset_of(nc, m))
        throw std::logic_error("point_up_star: the result is not the closed star of " +
                               cone_str(out.fan, nc));
  return out;
}

LiftedFan neatify(const LiftedFan& s) {
  LiftedFan out = neatify_impl(s, nullptr);
  for (const auto& c : circuits(out))
    if (!points_up(c))
      throw std::logic_error("neatify: circuit " + cone_str(out.fan, c.rays) +
                             " is not pointing up afterwards");
  std::set<Mat> before, after;
  for (const auto& f : boundary_faces(s, Side::lower, false))
    before.insert(face_rays(s.fan, f));
  for (const auto& f : boundary_faces(out, Side::lower, false))
    after.insert(face_rays(out.fan, f));
  if (before != after) throw std::logic_error("neatify: the lower rim moved");
  if (!check_star_condition(out, boundary_faces(out, Side::lower, false)))
    throw std::logic_error("neatify: a lower rim cone escapes the negative faces");
  return out;
}

StrongifyResult strongify(const LiftedFan& s) {
  CircuitGraph g = circuit_graph(s);
  CollapseCheck chk = is_collapsible(g);
  if (!chk.collapsible) throw std::invalid_argument("strongify: circuit graph has a cycle");
  std::vector<int> order = order_circuits(s, g);

  Fan lower_before = project_boundary(s, Side::lower);
  UpTracker track{project_boundary(s, Side::upper), {}};
  LiftedFan cur = degenerate_upper(s);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Circuit& sig = g.nodes[*it];
    cur = glue_below(lifted_closed_star(s, sig.rays), cur);
    Fan u = project_boundary(cur, Side::upper);
    if (!fan_equal(u, track.upper))
      throw std::logic_error("strongify: gluing moved the upper rim");
    ConeIdx sc = resolve_cone(cur.fan, face_rays(s.fan, sig.rays));
    auto c2 = circuit_of(cur, sc);
    if (!c2) throw std::logic_error("strongify: circuit vanished after gluing");
    cur = safe_subdivide(std::move(cur), c2->pos, &track, 0);
  }
  for (const auto& c : circuits(cur))
    if (!points_up(c))
      throw std::logic_error("strongify: circuit " + cone_str(cur.fan, c.rays) +
                             " still points sideways");
  if (!fan_equal(project_boundary(cur, Side::lower), lower_before))
    throw std::logic_error("strongify: the lower rim moved");
  if (!fan_equal(project_boundary(cur, Side::upper), track.upper))
    throw std::logic_error("strongify: the tracked upper rim went stale");
  if (!is_collapsible(circuit_graph(cur)).collapsible)
    throw std::logic_error("strongify: the result is not collapsible");
  return {std::move(cur), std::move(track.moves)};
}

FactorizationResult strong_factorize(const Fan& lower, const Fan& upper) {
  require_factorable(lower, upper, "strong_factorize");
  FactorizationResult res;
  if (fan_equal(lower, upper)) {
    res.top = canonical(lower);
    return res;
  }
  BuildResult built = build_cobordism(lower, upper);
  LiftedFan s = projectivize(built.cobordism);
  s = pi_desingularize(s);
  StrongifyResult st = strongify(s);
  res.down = extract_weak_script(st.cobordism);
  for (const auto& m : res.down)
    if (m.op != MoveOp::subdivide)
      throw std::logic_error("strong_factorize: a pointing-up walk emitted an assembling");
  res.up = std::move(st.up);
  res.top = project_boundary(st.cobordism, Side::upper);
  ScriptReport a = verify_script(lower, res.down, res.top);
  if (!a.ok) throw std::logic_error("strong_factorize: lower replay failed: " + a.message);
  ScriptReport b = verify_script(upper, res.up, res.top);
  if (!b.ok) throw std::logic_error("strong_factorize: upper replay failed: " + b.message);
  return res;
}

ScriptReport verify_script(const Fan& start, const Script& script, const Fan& target) {
  ScriptReport rep;
  int worst = -2;  // strictly below any reachable depth
  std::string worst_msg;
  auto record = [&](int i, const std::string& msg) {
    if (i > worst) {
      worst = i;
      worst_msg = msg;
    }
  };
  std::set<std::pair<int, std::string>> seen;
  Fan final_fan;
  std::function<bool(const Fan&, int)> go = [&](const Fan& cur, int i) -> bool {
    if (i == static_cast<int>(script.size())) {
      if (fan_equal(cur, target)) {
        final_fan = cur;
        return true;
      }
      record(i, "endpoint differs from the target fan");
      return false;
    }
    if (!seen.insert({i, fan_key(cur)}).second) return false;
    const Move& m = script[i];
    if (m.op == MoveOp::subdivide) {
      Subdivision sub;
      try {
        sub = star_subdivide(cur, m.ray);
      } catch (const std::exception& e) {
        record(i, e.what());
        return false;
      }
      if (!sub.changed) {
        record(i, "subdivision ray " + vec_str(m.ray) + " is already present");
        return false;
      }
      if (!is_smooth(sub.fan)) {
        record(i, "subdivision at " + vec_str(m.ray) + " is not smooth");
        return false;
      }
      return go(sub.fan, i + 1);
    }
    std::vector<Fan> cands = star_assemble_candidates(cur, m.ray);
    bool tried = false;
    for (const auto& f : cands) {
      if (!is_smooth(f)) continue;
      tried = true;
      if (go(f, i + 1)) return true;
    }
    if (!tried) record(i, "no smooth assembling removes the ray " + vec_str(m.ray));
    return false;
  };
  rep.ok = go(start, 0);
  if (rep.ok) {
    rep.final_fan = std::move(final_fan);
  } else {
    rep.failed_move = worst;
    rep.message = std::move(worst_msg);
  }
  return rep;
}

}  // namespace fanfactor
