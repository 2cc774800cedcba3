#include "fanfactor/fan.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fanfactor/lp.hpp"

namespace fanfactor {

bool subset_of(const ConeIdx& a, const ConeIdx& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

ConeIdx cone_minus(const ConeIdx& a, const ConeIdx& b) {
  ConeIdx r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

ConeIdx cone_union(const ConeIdx& a, const ConeIdx& b) {
  ConeIdx r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

ConeIdx cone_meet(const ConeIdx& a, const ConeIdx& b) {
  ConeIdx r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

Mat cone_rays_of(const Fan& f, const ConeIdx& c) {
  Mat m;
  m.reserve(c.size());
  for (int i : c) m.push_back(f.rays.at(i));
  return m;
}

// two simplicial cones meet exactly in the span of their shared rays when no
// common point carries weight off the shared set
bool cones_meet_in_shared_face(const Fan& f, const ConeIdx& a, const ConeIdx& b) {
  ConeIdx shared = cone_meet(a, b);
  int ka = static_cast<int>(a.size()), kb = static_cast<int>(b.size());
  std::vector<LinearConstraint> cons;
  for (int j = 0; j < f.dim; ++j) {
    LinearConstraint c;
    c.a.assign(ka + kb, Rat(0));
    for (int i = 0; i < ka; ++i) c.a[i] = Rat(f.rays[a[i]][j]);
    for (int i = 0; i < kb; ++i) c.a[ka + i] = -Rat(f.rays[b[i]][j]);
    c.rel = Rel::eq;
    c.b = 0;
    cons.push_back(std::move(c));
  }
  for (int v = 0; v < ka + kb; ++v) {
    LinearConstraint c;
    c.a.assign(ka + kb, Rat(0));
    c.a[v] = 1;
    c.rel = Rel::ge;
    cons.push_back(std::move(c));
  }
  LinearConstraint off;
  off.a.assign(ka + kb, Rat(0));
  bool have_off = false;
  for (int i = 0; i < ka; ++i)
    if (!std::binary_search(shared.begin(), shared.end(), a[i])) {
      off.a[i] = 1;
      have_off = true;
    }
  for (int i = 0; i < kb; ++i)
    if (!std::binary_search(shared.begin(), shared.end(), b[i])) {
      off.a[ka + i] = 1;
      have_off = true;
    }
  if (!have_off) return true;  // identical cones
  off.rel = Rel::gt;
  off.b = 0;
  cons.push_back(std::move(off));
  return !lp_feasible(ka + kb, cons).feasible;
}

namespace {

void validate_structure_impl(const Fan& f) {
  if (f.dim < 1) throw std::invalid_argument("fan: dimension must be positive");
  std::set<Vec, decltype(&vec_less)> seen(&vec_less);
  for (const auto& r : f.rays) {
    if (static_cast<int>(r.size()) != f.dim)
      throw std::invalid_argument("fan: ray width differs from dimension");
    if (is_zero(r)) throw std::invalid_argument("fan: zero ray");
    if (vec_cmp(primitive(r), r) != 0)
      throw std::invalid_argument("fan: ray " + vec_str(r) + " is not primitive");
    if (!seen.insert(r).second)
      throw std::invalid_argument("fan: duplicate ray " + vec_str(r));
  }
  std::set<ConeIdx> cones;
  for (const auto& c : f.maximal) {
    if (c.empty()) throw std::invalid_argument("fan: empty maximal cone");
    if (!std::is_sorted(c.begin(), c.end()) ||
        std::adjacent_find(c.begin(), c.end()) != c.end())
      throw std::invalid_argument("fan: cone indices must be sorted and distinct");
    if (c.front() < 0 || c.back() >= static_cast<int>(f.rays.size()))
      throw std::invalid_argument("fan: cone index out of range");
    if (static_cast<int>(c.size()) > f.dim)
      throw std::invalid_argument("fan: cone has more rays than the dimension");
    if (rank_of(cone_rays_of(f, c)) != static_cast<int>(c.size()))
      throw std::invalid_argument("fan: cone generators are dependent");
    if (!cones.insert(c).second) throw std::invalid_argument("fan: duplicate maximal cone");
  }
  for (const auto& a : f.maximal)
    for (const auto& b : f.maximal)
      if (a != b && subset_of(a, b))
        throw std::invalid_argument("fan: maximal cone contained in another");
}

}  // namespace

void validate_fan_shape(const Fan& f) { validate_structure_impl(f); }

void validate_fan(const Fan& f) {
  validate_fan_shape(f);
  for (std::size_t i = 0; i < f.maximal.size(); ++i)
    for (std::size_t j = i + 1; j < f.maximal.size(); ++j)
      if (!cones_meet_in_shared_face(f, f.maximal[i], f.maximal[j]))
        throw std::invalid_argument(
            "fan: cones meet outside their shared face (cones " + std::to_string(i) +
            ", " + std::to_string(j) + ")");
}

Fan canonical(const Fan& f) {
  std::vector<int> order(f.rays.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return vec_less(f.rays[a], f.rays[b]); });
  std::vector<int> where(f.rays.size());
  Fan g;
  g.dim = f.dim;
  g.rays.resize(f.rays.size());
  for (std::size_t news = 0; news < order.size(); ++news) {
    g.rays[news] = f.rays[order[news]];
    where[order[news]] = static_cast<int>(news);
  }
  g.maximal.reserve(f.maximal.size());
  for (const auto& c : f.maximal) {
    ConeIdx nc;
    nc.reserve(c.size());
    for (int i : c) nc.push_back(where[i]);
    std::sort(nc.begin(), nc.end());
    g.maximal.push_back(std::move(nc));
  }
  std::sort(g.maximal.begin(), g.maximal.end());
  g.maximal.erase(std::unique(g.maximal.begin(), g.maximal.end()), g.maximal.end());
  return g;
}

bool fan_equal(const Fan& a, const Fan& b) {
  Fan ca = canonical(a), cb = canonical(b);
  return ca.dim == cb.dim && ca.rays == cb.rays && ca.maximal == cb.maximal;
}

std::string fan_key(const Fan& f) {
  Fan c = canonical(f);
  std::ostringstream os;
  os << c.dim << '#';
  for (const auto& r : c.rays) os << vec_str(r);
  os << '#';
  for (const auto& m : c.maximal) {
    os << '[';
    for (int i : m) os << i << ' ';
    os << ']';
  }
  return os.str();
}

std::vector<ConeIdx> all_faces(const Fan& f) {
  std::set<ConeIdx> out;
  for (const auto& c : f.maximal) {
    int k = static_cast<int>(c.size());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      ConeIdx face;
      for (int i = 0; i < k; ++i)
        if (mask & (1u << i)) face.push_back(c[i]);
      out.insert(std::move(face));
    }
  }
  return std::vector<ConeIdx>(out.begin(), out.end());
}

int find_ray(const Fan& f, const Vec& v) {
  for (std::size_t i = 0; i < f.rays.size(); ++i)
    if (vec_cmp(f.rays[i], v) == 0) return static_cast<int>(i);
  return -1;
}

std::vector<int> star_of(const Fan& f, const ConeIdx& tau) {
  std::vector<int> out;
  for (std::size_t i = 0; i < f.maximal.size(); ++i)
    if (subset_of(tau, f.maximal[i])) out.push_back(static_cast<int>(i));
  return out;
}

Fan closed_star(const Fan& f, const ConeIdx& tau) {
  Fan g;
  g.dim = f.dim;
  g.rays = f.rays;
  for (int i : star_of(f, tau)) g.maximal.push_back(f.maximal[i]);
  return g;
}

std::vector<ConeIdx> link_of(const Fan& f, const ConeIdx& tau) {
  std::set<ConeIdx> out;
  for (int i : star_of(f, tau)) out.insert(cone_minus(f.maximal[i], tau));
  return std::vector<ConeIdx>(out.begin(), out.end());
}

std::optional<ConeIdx> find_carrier(const Fan& f, const QVec& x) {
  for (const auto& c : f.maximal) {
    CombinationSolutions s = solve_combination(cone_rays_of(f, c), x);
    if (!s.consistent) continue;
    bool inside = true;
    ConeIdx carrier;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (s.particular[i] < 0) {
        inside = false;
        break;
      }
      if (s.particular[i] > 0) carrier.push_back(c[i]);
    }
    if (inside) return carrier;
  }
  return std::nullopt;
}

Subdivision star_subdivide(const Fan& f, const Vec& v) {
  Vec ray = primitive(v);
  auto carrier = find_carrier(f, to_q(ray));
  if (!carrier) throw std::invalid_argument("star_subdivide: ray " + vec_str(ray) +
                                            " lies outside the support");
  if (carrier->empty()) throw std::invalid_argument("star_subdivide: zero ray");
  if (carrier->size() == 1) return {f, false};
  Subdivision out;
  out.changed = true;
  out.fan.dim = f.dim;
  out.fan.rays = f.rays;
  out.fan.rays.push_back(ray);
  int nr = static_cast<int>(f.rays.size());
  for (const auto& m : f.maximal) {
    if (!subset_of(*carrier, m)) {
      out.fan.maximal.push_back(m);
      continue;
    }
    for (int t : *carrier) {
      ConeIdx c = cone_minus(m, ConeIdx{t});
      c = cone_union(c, ConeIdx{nr});
      out.fan.maximal.push_back(std::move(c));
    }
  }
  std::sort(out.fan.maximal.begin(), out.fan.maximal.end());
  return out;
}

namespace {

Fan drop_ray(const Fan& f, int r, const std::vector<ConeIdx>& replacement_star,
             const std::vector<int>& star_rows) {
  Fan g;
  g.dim = f.dim;
  for (std::size_t i = 0; i < f.rays.size(); ++i)
    if (static_cast<int>(i) != r) g.rays.push_back(f.rays[i]);
  auto remap = [&](const ConeIdx& c) {
    ConeIdx nc;
    nc.reserve(c.size());
    for (int i : c) nc.push_back(i > r ? i - 1 : i);
    std::sort(nc.begin(), nc.end());
    return nc;
  };
  std::set<int> star_set(star_rows.begin(), star_rows.end());
  std::set<ConeIdx> cones;
  for (std::size_t i = 0; i < f.maximal.size(); ++i)
    if (!star_set.count(static_cast<int>(i))) cones.insert(remap(f.maximal[i]));
  for (const auto& c : replacement_star) cones.insert(remap(c));
  g.maximal.assign(cones.begin(), cones.end());
  return g;
}

}  // namespace

std::vector<Fan> star_assemble_candidates(const Fan& f, const Vec& v) {
  Vec ray = primitive(v);
  int r = find_ray(f, ray);
  if (r < 0) return {};
  std::vector<int> star = star_of(f, ConeIdx{r});
  if (star.empty()) return {};
  ConeIdx adjacent;
  for (int i : star) adjacent = cone_union(adjacent, f.maximal[i]);
  adjacent = cone_minus(adjacent, ConeIdx{r});

  std::vector<Fan> out;
  std::set<std::string> seen;
  int na = static_cast<int>(adjacent.size());
  for (unsigned mask = 0; mask < (1u << na); ++mask) {
    ConeIdx s;
    for (int i = 0; i < na; ++i)
      if (mask & (1u << i)) s.push_back(adjacent[i]);
    if (s.size() < 2 || static_cast<int>(s.size()) > f.dim) continue;

    Mat srays = cone_rays_of(f, s);
    if (rank_of(srays) != static_cast<int>(s.size())) continue;
    CombinationSolutions sol = solve_combination(srays, to_q(ray));
    if (!sol.consistent) continue;
    bool relint = true;
    for (const auto& c : sol.particular)
      if (c <= 0) {
        relint = false;
        break;
      }
    if (!relint) continue;

    bool shape_ok = true;
    std::vector<ConeIdx> merged;
    std::set<ConeIdx> merged_set;
    for (int i : star) {
      ConeIdx rest = cone_minus(f.maximal[i], ConeIdx{r});
      if (cone_minus(s, rest).size() != 1) {
        shape_ok = false;
        break;
      }
      ConeIdx m = cone_union(rest, s);
      if (rank_of(cone_rays_of(f, m)) != static_cast<int>(m.size())) {
        shape_ok = false;
        break;
      }
      if (merged_set.insert(m).second) merged.push_back(std::move(m));
    }
    if (!shape_ok) continue;

    Fan cand = drop_ray(f, r, merged, star);

    // cones untouched by the merge were mutually compatible already; check
    // the pairs involving a merged cone
    std::set<ConeIdx> merged_new;
    for (const auto& m : merged) {
      ConeIdx nc;
      for (int i : m) nc.push_back(i > r ? i - 1 : i);
      std::sort(nc.begin(), nc.end());
      merged_new.insert(std::move(nc));
    }
    bool geom_ok = true;
    for (std::size_t i = 0; i < cand.maximal.size() && geom_ok; ++i)
      for (std::size_t j = i + 1; j < cand.maximal.size() && geom_ok; ++j) {
        if (!merged_new.count(cand.maximal[i]) && !merged_new.count(cand.maximal[j]))
          continue;
        if (cand.maximal[i] != cand.maximal[j] &&
            subset_of(cand.maximal[i], cand.maximal[j]))
          geom_ok = false;
        else if (!cones_meet_in_shared_face(cand, cand.maximal[i], cand.maximal[j]))
          geom_ok = false;
      }
    if (!geom_ok) continue;

    Subdivision redo;
    try {
      redo = star_subdivide(cand, ray);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (!redo.changed || !fan_equal(redo.fan, f)) continue;

    if (seen.insert(fan_key(cand)).second) out.push_back(std::move(cand));
  }
  return out;
}

Fan star_assemble(const Fan& f, const Vec& v) {
  std::vector<Fan> cands = star_assemble_candidates(f, v);
  if (cands.empty())
    throw std::runtime_error("star_assemble: no valid assembling at ray " +
                             vec_str(primitive(v)));
  std::size_t best = 0;
  std::string best_key = fan_key(cands[0]);
  for (std::size_t i = 1; i < cands.size(); ++i) {
    std::string k = fan_key(cands[i]);
    if (k < best_key) {
      best_key = std::move(k);
      best = i;
    }
  }
  return cands[best];
}

bool is_smooth(const Fan& f) {
  for (const auto& c : f.maximal)
    if (lattice_index(cone_rays_of(f, c)) != 1) return false;
  return true;
}

bool in_support(const Fan& f, const QVec& x) {
  for (const auto& c : f.maximal)
    if (cone_contains(cone_rays_of(f, c), x)) return true;
  return false;
}

namespace {

Vec hyperplane_normal_form(Vec u) {
  for (const auto& x : u) {
    if (x > 0) return u;
    if (x < 0) return neg(u);
  }
  return u;
}

}  // namespace

bool supports_equal(const Fan& a, const Fan& b) {
  if (a.dim != b.dim) return false;
  std::set<Vec, decltype(&vec_less)> normals(&vec_less);
  for (const Fan* f : {&a, &b})
    for (const auto& c : f->maximal) {
      HRep h = cone_hrep(cone_rays_of(*f, c), f->dim);
      for (const auto& u : h.eqs) normals.insert(hyperplane_normal_form(u));
      for (const auto& u : h.ineqs) normals.insert(hyperplane_normal_form(u));
    }
  Mat nm(normals.begin(), normals.end());
  for (const Fan* f : {&a, &b}) {
    const Fan* other = (f == &a) ? &b : &a;
    for (const auto& c : f->maximal)
      for (const auto& piece : split_cone(cone_rays_of(*f, c), nm, f->dim))
        if (!in_support(*other, cone_probe(piece))) return false;
  }
  return true;
}

PolyFan common_refinement(const Fan& a, const Fan& b) {
  std::vector<Mat> ca, cb;
  for (const auto& c : a.maximal) ca.push_back(cone_rays_of(a, c));
  for (const auto& c : b.maximal) cb.push_back(cone_rays_of(b, c));
  return common_refinement_cells(ca, cb, a.dim);
}

Fan fan_from_polyfan(const PolyFan& pf) {
  Fan f;
  f.dim = pf.dim;
  std::map<Vec, int, decltype(&vec_less)> index(&vec_less);
  for (const auto& cell : pf.cells) {
    if (static_cast<int>(cell.size()) != rank_of(cell))
      throw std::invalid_argument("fan_from_polyfan: non-simplicial cell");
    ConeIdx c;
    for (const auto& r : cell) {
      auto it = index.find(r);
      if (it == index.end()) {
        it = index.emplace(r, static_cast<int>(f.rays.size())).first;
        f.rays.push_back(r);
      }
      c.push_back(it->second);
    }
    std::sort(c.begin(), c.end());
    f.maximal.push_back(std::move(c));
  }
  std::sort(f.maximal.begin(), f.maximal.end());
  f.maximal.erase(std::unique(f.maximal.begin(), f.maximal.end()), f.maximal.end());
  return f;
}

}  // namespace fanfactor
