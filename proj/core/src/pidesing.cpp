#include "fanfactor/pidesing.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fanfactor {

bool operator==(const Profile& x, const Profile& y) {
  return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
}

bool operator!=(const Profile& x, const Profile& y) { return !(x == y); }

bool operator<(const Profile& x, const Profile& y) {
  if (x.a != y.a) return x.a < y.a;
  if (x.b != y.b) return x.b < y.b;
  if (x.c != y.c) return x.c < y.c;
  return x.d < y.d;
}

bool operator<=(const Profile& x, const Profile& y) { return !(y < x); }

std::string profile_str(const Profile& p) {
  std::ostringstream os;
  os << "(" << p.a << "," << p.b << "," << p.c << "," << p.d << ")";
  return os.str();
}

bool operator==(const FanProfile& x, const FanProfile& y) {
  return x.g == y.g && x.s == y.s;
}

bool operator<(const FanProfile& x, const FanProfile& y) {
  if (x.g != y.g) return x.g < y.g;
  return x.s < y.s;
}

std::string fan_profile_str(const FanProfile& p) {
  std::ostringstream os;
  os << "[" << profile_str(p.g) << ";" << p.s << "]";
  return os.str();
}

namespace {

// sorted ray vectors of a cone, the tie-break key used throughout
Mat cone_vec_key(const LiftedFan& s, const ConeIdx& c) {
  Mat m;
  m.reserve(c.size());
  for (int i : c) m.push_back(s.fan.rays[i]);
  std::sort(m.begin(), m.end(), vec_less);
  return m;
}

bool mat_less(const Mat& a, const Mat& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      vec_less);
}

void trace_line(std::ostream* trace, const Vec& ray, const ConeIdx& carrier,
                const Profile& attacked, const FanProfile& after) {
  if (!trace) return;
  *trace << "ray=" << vec_str(ray) << " cone=(";
  for (std::size_t i = 0; i < carrier.size(); ++i) {
    if (i) *trace << ",";
    *trace << carrier[i];
  }
  *trace << ") profile=" << profile_str(attacked) << fan_profile_str(after)
         << "\n";
}

}  // namespace

Int pi_mult(const LiftedFan& s, const ConeIdx& c) {
  if (c.empty()) return 1;
  if (!pi_independent(s, c)) return 0;
  Mat rows;
  rows.reserve(c.size());
  for (int i : c) rows.push_back(primitive(base_of(s.fan.rays[i])));
  return lattice_index(rows);
}

Profile profile_cone(const LiftedFan& s, const ConeIdx& c) {
  auto circ = circuit_of(s, c);
  Profile p;
  if (!circ) {
    // the face multiplicities all divide the full one
    p.a = pi_mult(s, c);
    return p;
  }
  // the maximal independent faces drop exactly one circuit ray each
  Int h = 0;
  int r = 0;
  for (int i : circ->rays) {
    Int m = pi_mult(s, cone_minus(c, ConeIdx{i}));
    if (m > h) {
      h = m;
      r = 1;
    } else if (m == h) {
      ++r;
    }
  }
  p.a = h;
  if (r > 1) {
    p.b = 1;
    p.c = static_cast<int>(circ->rays.size());
    p.d = r;
  }
  return p;
}

FanProfile profile_fan(const LiftedFan& s) {
  FanProfile fp;
  bool first = true;
  for (const auto& c : s.fan.maximal) {
    Profile p = profile_cone(s, c);
    if (first || fp.g < p) {
      fp.g = p;
      fp.s = 1;
      first = false;
    } else if (p == fp.g) {
      ++fp.s;
    }
  }
  return fp;
}

bool is_codefinite(const LiftedFan& s, const ConeIdx& tau, const ConeIdx& eta) {
  auto circ = circuit_of(s, eta);
  if (!circ)
    throw std::invalid_argument("is_codefinite: cone has no circuit");
  bool meets_pos = !cone_meet(tau, circ->pos).empty();
  bool meets_neg = !cone_meet(tau, circ->neg).empty();
  return !(meets_pos && meets_neg);
}

Vec midray(const LiftedFan& s, const ConeIdx& tau, const Vec& l) {
  auto fib = cone_fiber(s, tau, to_q(l));
  if (!fib)
    throw std::invalid_argument("midray: base point outside the projected cone");
  Rat t = (fib->lo + fib->hi) / 2;
  QVec lifted;
  lifted.reserve(l.size() + 1);
  for (const auto& x : l) lifted.push_back(Rat(x));
  lifted.push_back(t);
  return primitive_of_q(lifted);
}

Centers centers(const LiftedFan& s, const Circuit& sigma) {
  Centers ctr{zero_vec(s.base_dim), zero_vec(s.base_dim)};
  for (std::size_t i = 0; i < sigma.rays.size(); ++i) {
    Vec v = primitive(base_of(s.fan.rays[sigma.rays[i]]));
    if (sigma.rel[i] < 0)
      ctr.neg = add(ctr.neg, v);
    else
      ctr.pos = add(ctr.pos, v);
  }
  Mat m = projected_rays(s, sigma.rays);
  for (const Vec* y : {&ctr.neg, &ctr.pos}) {
    CombinationSolutions sol = solve_combination(m, to_q(*y));
    bool interior = false;
    if (sol.consistent && sol.kernel.size() == 1) {
      // shift along the kernel until every coefficient is positive
      bool ok = true, lo_set = false, hi_set = false;
      Rat lo, hi;
      for (std::size_t i = 0; i < sigma.rays.size(); ++i) {
        const Rat& k = sol.kernel[0][i];
        const Rat& pc = sol.particular[i];
        if (k == 0) {
          if (pc <= 0) ok = false;
        } else {
          Rat bnd = -pc / k;
          if (k > 0) {
            if (!lo_set || bnd > lo) lo = bnd, lo_set = true;
          } else {
            if (!hi_set || bnd < hi) hi = bnd, hi_set = true;
          }
        }
      }
      interior = ok && (!lo_set || !hi_set || lo < hi);
    }
    if (!interior)
      throw std::logic_error(
          "centers: sum left the relative interior of the projected circuit");
  }
  return ctr;
}

CenterSubdivision center_subdivide(const LiftedFan& s, const Circuit& sigma,
                                   std::ostream* trace) {
  if (sigma.rays.size() <= 2)
    throw std::invalid_argument("center_subdivide: circuit has only two rays");
  const long p = static_cast<long>(sigma.pos1.size());
  const long m = static_cast<long>(sigma.neg1.size());
  const long P = static_cast<long>(sigma.pos.size());
  const long M = static_cast<long>(sigma.neg.size());
  Centers ctr = centers(s, sigma);
  Int e_neg = content(ctr.neg);
  Int e_pos = content(ctr.pos);

  // the sign-pattern table: which center to use and whether an exceptional
  // piece must survive; overlaps resolved toward the negative center
  CenterSign sign;
  bool expect_b;
  if (m >= 2 && m <= p) {
    sign = CenterSign::negative, expect_b = false;
  } else if (m == 1 && p >= 2) {
    sign = CenterSign::negative, expect_b = e_neg == 1;
  } else if (m == 1 && p == 1 && P >= 2) {
    sign = CenterSign::negative, expect_b = e_neg == 1;
  } else if (p == 0 && m >= 2) {
    sign = CenterSign::negative, expect_b = false;
  } else if (p == 0 && m == 1) {
    sign = CenterSign::negative, expect_b = true;
  } else if (p >= 2 && p <= m) {
    sign = CenterSign::positive, expect_b = false;
  } else if (p == 1 && m >= 2) {
    sign = CenterSign::positive, expect_b = e_pos == 1;
  } else if (p == 1 && m == 1 && M >= 2) {
    sign = CenterSign::positive, expect_b = e_pos == 1;
  } else if (m == 0 && p >= 2) {
    sign = CenterSign::positive, expect_b = false;
  } else if (m == 0 && p == 1) {
    sign = CenterSign::positive, expect_b = true;
  } else {
    throw std::logic_error("center_subdivide: relation has no unit coefficient");
  }

  const bool negative = sign == CenterSign::negative;
  Vec rho0 = midray(s, sigma.rays, primitive(negative ? ctr.neg : ctr.pos));

  Profile base = profile_cone(s, sigma.rays);
  auto carrier = find_carrier(s.fan, to_q(rho0));
  if (!carrier || *carrier != sigma.rays)
    throw std::logic_error("center_subdivide: midray left the circuit interior");

  Subdivision sd = star_subdivide(s.fan, rho0);
  if (!sd.changed)
    throw std::logic_error("center_subdivide: midray already a ray of the fan");
  LiftedFan out{s.base_dim, std::move(sd.fan)};
  int r0 = find_ray(out.fan, rho0);

  CenterChoice choice;
  choice.sign = sign;
  choice.case_b = expect_b;
  choice.ray = rho0;
  choice.ray_index = r0;

  int exc = -1;
  if (expect_b) exc = negative ? sigma.neg1.front() : sigma.pos1.front();

  // the declared outcome must match the recomputed piece profiles
  for (int i : sigma.rays) {
    ConeIdx piece = cone_union(cone_minus(sigma.rays, ConeIdx{i}), ConeIdx{r0});
    Profile pp = profile_cone(out, piece);
    if (expect_b && i == exc) {
      if (pp != base)
        throw std::logic_error("center_subdivide: exceptional piece changed profile");
      choice.kappa = std::move(piece);
    } else if (!(pp < base)) {
      throw std::logic_error("center_subdivide: piece profile failed to drop");
    }
  }
  if (expect_b) {
    choice.gamma = cone_minus(sigma.rays, ConeIdx{exc});
    if (pi_mult(out, choice.gamma) != base.a)
      throw std::logic_error(
          "center_subdivide: exceptional facet lost maximal multiplicity");
    if (!is_codefinite(out, choice.gamma, choice.kappa))
      throw std::logic_error("center_subdivide: exceptional facet not codefinite");
  }
  if (trace) trace_line(trace, rho0, sigma.rays, base, profile_fan(out));
  return {std::move(out), std::move(choice)};
}

namespace {

// distinct circuits of cones containing tau where tau meets both relation
// signs; mark >= 0 restricts to cones containing that ray
std::map<ConeIdx, Circuit> offending_circuits(const LiftedFan& s,
                                              const ConeIdx& tau, int mark) {
  std::map<ConeIdx, Circuit> out;
  for (const auto& c : s.fan.maximal) {
    if (!subset_of(tau, c)) continue;
    if (mark >= 0 && !std::binary_search(c.begin(), c.end(), mark)) continue;
    auto circ = circuit_of(s, c);
    if (!circ) continue;
    if (is_codefinite(s, tau, c)) continue;
    out.emplace(circ->rays, *circ);
  }
  return out;
}

LiftedFan reduce_rec(LiftedFan s, const Circuit& sigma, const ConeIdx& tau,
                     std::ostream* trace) {
  bool offends = false;
  for (const auto& c : s.fan.maximal) {
    if (!subset_of(sigma.rays, c) || !subset_of(tau, c)) continue;
    if (!is_codefinite(s, tau, c)) {
      offends = true;
      break;
    }
  }
  if (!offends) return s;
  if (sigma.rays.size() == 2)
    throw std::logic_error("codefinite_reduce: offending two-ray circuit");

  Profile bound = profile_cone(s, sigma.rays);
  CenterSubdivision cs = center_subdivide(s, sigma, trace);
  s = std::move(cs.fan);

  // every cone split here or deeper carries the midray that created it, so
  // scanning for that ray catches exactly this circuit's descendants
  int guard = 0;
  for (;;) {
    auto offs = offending_circuits(s, tau, cs.choice.ray_index);
    if (offs.empty()) break;
    if (++guard > 1000)
      throw std::logic_error("codefinite_reduce: reduction failed to stabilize");
    const Circuit theta = offs.begin()->second;
    Profile tp = profile_cone(s, theta.rays);
    if (!(tp < bound))
      throw std::logic_error("codefinite_reduce: circuit profile failed to descend");
    s = reduce_rec(std::move(s), theta, tau, trace);
  }
  return s;
}

// smallest projection-singular face, ties by sorted ray vectors; the first
// size with a singular face makes every pick minimal
ConeIdx minimal_singular_face(const LiftedFan& s, const ConeIdx& gamma) {
  std::vector<int> idx(gamma.begin(), gamma.end());
  for (std::size_t sz = 1; sz <= idx.size(); ++sz) {
    ConeIdx best;
    Mat best_key;
    bool have = false;
    std::vector<std::size_t> pick(sz);
    for (std::size_t i = 0; i < sz; ++i) pick[i] = i;
    for (;;) {
      ConeIdx face;
      face.reserve(sz);
      for (std::size_t i : pick) face.push_back(idx[i]);
      if (pi_mult(s, face) > 1) {
        Mat key = cone_vec_key(s, face);
        if (!have || mat_less(key, best_key)) {
          best = std::move(face);
          best_key = std::move(key);
          have = true;
        }
      }
      // next combination
      std::size_t j = sz;
      while (j > 0 && pick[j - 1] == idx.size() - sz + j - 1) --j;
      if (j == 0) break;
      ++pick[j - 1];
      for (std::size_t i = j; i < sz; ++i) pick[i] = pick[i - 1] + 1;
    }
    if (have) return best;
  }
  throw std::logic_error("minimal_singular_face: cone is nonsingular");
}

}  // namespace

LiftedFan codefinite_reduce(const LiftedFan& s, const Circuit& sigma,
                            const ConeIdx& tau, std::ostream* trace) {
  return reduce_rec(s, sigma, tau, trace);
}

LiftedFan pi_desingularize(const LiftedFan& s, std::ostream* trace) {
  LiftedFan cur = s;
  FanProfile before = profile_fan(cur);
  while (before.g.a > 1) {
    // the worst cone, ties by sorted ray vectors
    ConeIdx eta;
    Mat eta_key;
    bool have = false;
    for (const auto& c : cur.fan.maximal) {
      if (profile_cone(cur, c) != before.g) continue;
      Mat key = cone_vec_key(cur, c);
      if (!have || mat_less(key, eta_key)) {
        eta = c;
        eta_key = std::move(key);
        have = true;
      }
    }
    if (!have)
      throw std::logic_error("pi_desingularize: no cone attains the fan profile");

    auto circ = circuit_of(cur, eta);
    LiftedFan work = cur;
    ConeIdx gamma;
    if (circ && circ->rays.size() > 2) {
      CenterSubdivision cs = center_subdivide(cur, *circ, trace);
      work = std::move(cs.fan);
      if (!cs.choice.case_b) {
        FanProfile after = profile_fan(work);
        if (!(after < before))
          throw std::logic_error("pi_desingularize: profile failed to decrease");
        cur = std::move(work);
        before = after;
        continue;
      }
      // the worst cone survives with the exceptional ray swapped for the
      // midray; its untouched facet keeps the maximal multiplicity
      int exc = -1;
      for (int i : circ->rays)
        if (!std::binary_search(cs.choice.kappa.begin(), cs.choice.kappa.end(),
                                i)) {
          exc = i;
          break;
        }
      ConeIdx eta2 =
          cone_union(cone_minus(eta, ConeIdx{exc}), ConeIdx{cs.choice.ray_index});
      if (std::find(work.fan.maximal.begin(), work.fan.maximal.end(), eta2) ==
          work.fan.maximal.end())
        throw std::logic_error("pi_desingularize: exceptional cone not maximal");
      if (profile_cone(work, eta2) != before.g)
        throw std::logic_error("pi_desingularize: exceptional cone changed profile");
      gamma = cone_minus(eta, ConeIdx{exc});
    } else if (circ) {
      // two-ray circuit: pick the worst facet
      Mat gkey;
      bool haveg = false;
      for (int i : circ->rays) {
        ConeIdx f = cone_minus(eta, ConeIdx{i});
        if (pi_mult(cur, f) != before.g.a) continue;
        Mat key = cone_vec_key(cur, f);
        if (!haveg || mat_less(key, gkey)) {
          gamma = std::move(f);
          gkey = std::move(key);
          haveg = true;
        }
      }
      if (!haveg)
        throw std::logic_error(
            "pi_desingularize: no facet attains the maximal multiplicity");
    } else {
      gamma = eta;
    }
    if (pi_mult(work, gamma) != before.g.a)
      throw std::logic_error("pi_desingularize: attacked face lost multiplicity");

    ConeIdx tau = minimal_singular_face(work, gamma);
    Mat rows;
    rows.reserve(tau.size());
    for (int i : tau) rows.push_back(primitive(base_of(work.fan.rays[i])));
    auto pts = parallelepiped_points(rows);
    if (pts.empty())
      throw std::logic_error("pi_desingularize: singular face with empty box");
    Vec q = primitive(pts.front());

    // make tau codefinite with respect to everything containing it; the
    // families of distinct circuits subdivide disjoint cones
    int guard = 0;
    for (;;) {
      auto offs = offending_circuits(work, tau, -1);
      if (offs.empty()) break;
      if (++guard > 1000)
        throw std::logic_error(
            "pi_desingularize: codefinite sweep failed to stabilize");
      work = codefinite_reduce(work, offs.begin()->second, tau, trace);
    }

    Vec rho = midray(work, tau, q);
    auto carrier = find_carrier(work.fan, to_q(rho));
    if (!carrier || *carrier != tau)
      throw std::logic_error("pi_desingularize: midray left the face interior");
    Subdivision sd = star_subdivide(work.fan, rho);
    if (!sd.changed)
      throw std::logic_error("pi_desingularize: midray already present");
    cur = LiftedFan{work.base_dim, std::move(sd.fan)};
    FanProfile after = profile_fan(cur);
    if (trace) trace_line(trace, rho, tau, before.g, after);
    if (!(after < before))
      throw std::logic_error("pi_desingularize: profile failed to decrease");
    before = after;
  }
  return cur;
}

}  // namespace fanfactor
