#include "fanfactor/polycone.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "fanfactor/lp.hpp"

namespace fanfactor {

namespace {

void sort_rows(Mat& rows) { std::sort(rows.begin(), rows.end(), vec_less); }

void sort_unique_rows(Mat& rows) {
  sort_rows(rows);
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const Vec& a, const Vec& b) { return vec_cmp(a, b) == 0; }),
             rows.end());
}

// visit every k-subset of {0..m-1}
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > m || k < 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == i + m - k) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Mat stack(const Mat& a, const Mat& b) {
  Mat m = a;
  m.insert(m.end(), b.begin(), b.end());
  return m;
}

}  // namespace

int cone_dim(const Mat& gens) { return rank_of(gens); }

HRep cone_hrep(const Mat& gens, int ambient) {
  HRep h;
  for (const auto& u : nullspace(gens, ambient)) h.eqs.push_back(primitive_of_q(u));
  sort_rows(h.eqs);
  int r = rank_of(gens);
  if (r == 0) return h;
  std::set<Vec, decltype(&vec_less)> seen(&vec_less);
  for_each_subset(static_cast<int>(gens.size()), r - 1, [&](const std::vector<int>& idx) {
    Mat m = h.eqs;
    for (int i : idx) m.push_back(gens[i]);
    if (rank_of(m) != ambient - 1) return;
    QMat line = nullspace(m, ambient);
    assert(line.size() == 1);
    Vec u = primitive_of_q(line[0]);
    int npos = 0, nneg = 0;
    for (const auto& g : gens) {
      int s = sign(dot(u, g));
      if (s > 0) ++npos;
      if (s < 0) ++nneg;
    }
    if (npos > 0 && nneg > 0) return;
    if (nneg > 0) u = neg(u);
    seen.insert(u);
  });
  h.ineqs.assign(seen.begin(), seen.end());
  return h;
}

Mat cone_rays(const HRep& h, int ambient) {
  Mat all = stack(h.eqs, h.ineqs);
  if (rank_of(all) != ambient)
    throw std::invalid_argument("cone_rays: cone contains a line");
  int s = ambient - rank_of(h.eqs);
  if (s == 0) return {};
  std::set<Vec, decltype(&vec_less)> seen(&vec_less);
  for_each_subset(static_cast<int>(h.ineqs.size()), s - 1, [&](const std::vector<int>& idx) {
    Mat m = h.eqs;
    for (int i : idx) m.push_back(h.ineqs[i]);
    if (rank_of(m) != ambient - 1) return;
    QMat line = nullspace(m, ambient);
    assert(line.size() == 1);
    Vec u = primitive_of_q(line[0]);
    for (int flip = 0; flip < 2; ++flip) {
      bool ok = true;
      for (const auto& v : h.ineqs)
        if (dot(v, u) < 0) {
          ok = false;
          break;
        }
      if (ok) {
        seen.insert(u);
        return;
      }
      u = neg(u);
    }
  });
  return Mat(seen.begin(), seen.end());
}

Mat extremal_rays(Mat gens) {
  for (auto& g : gens) g = primitive(g);
  sort_unique_rows(gens);
  std::size_t i = 0;
  while (i < gens.size() && gens.size() > 1) {
    int n = static_cast<int>(gens[0].size());
    int k = static_cast<int>(gens.size()) - 1;
    std::vector<LinearConstraint> cons;
    for (int j = 0; j < n; ++j) {
      LinearConstraint c;
      c.a.assign(k, Rat(0));
      int at = 0;
      for (std::size_t g = 0; g < gens.size(); ++g)
        if (g != i) c.a[at++] = Rat(gens[g][j]);
      c.rel = Rel::eq;
      c.b = Rat(gens[i][j]);
      cons.push_back(std::move(c));
    }
    for (int v = 0; v < k; ++v) {
      LinearConstraint c;
      c.a.assign(k, Rat(0));
      c.a[v] = 1;
      c.rel = Rel::ge;
      c.b = 0;
      cons.push_back(std::move(c));
    }
    if (lp_feasible(k, cons).feasible)
      gens.erase(gens.begin() + i);
    else
      ++i;
  }
  return gens;
}

Mat cone_intersect(const Mat& a, const Mat& b, int ambient) {
  HRep ha = cone_hrep(a, ambient);
  HRep hb = cone_hrep(b, ambient);
  HRep h;
  h.eqs = stack(ha.eqs, hb.eqs);
  h.ineqs = stack(ha.ineqs, hb.ineqs);
  sort_unique_rows(h.eqs);
  sort_unique_rows(h.ineqs);
  return cone_rays(h, ambient);
}

bool cone_contains(const Mat& gens, const QVec& x) {
  if (gens.empty()) return qis_zero(x);
  if (rank_of(gens) == static_cast<int>(gens.size())) {
    CombinationSolutions s = solve_combination(gens, x);
    if (!s.consistent) return false;
    for (const auto& c : s.particular)
      if (c < 0) return false;
    return true;
  }
  int k = static_cast<int>(gens.size());
  int n = static_cast<int>(x.size());
  std::vector<LinearConstraint> cons;
  for (int j = 0; j < n; ++j) {
    LinearConstraint c;
    c.a.resize(k);
    for (int g = 0; g < k; ++g) c.a[g] = Rat(gens[g][j]);
    c.rel = Rel::eq;
    c.b = x[j];
    cons.push_back(std::move(c));
  }
  for (int v = 0; v < k; ++v) {
    LinearConstraint c;
    c.a.assign(k, Rat(0));
    c.a[v] = 1;
    c.rel = Rel::ge;
    c.b = 0;
    cons.push_back(std::move(c));
  }
  return lp_feasible(k, cons).feasible;
}

QVec cone_probe(const Mat& gens) {
  assert(!gens.empty());
  QVec p = to_q(gens[0]);
  for (std::size_t i = 1; i < gens.size(); ++i) p = qadd(p, to_q(gens[i]));
  return p;
}

std::vector<Mat> split_cone(const Mat& gens, const Mat& normals, int ambient) {
  std::vector<Mat> cells{extremal_rays(gens)};
  for (const auto& u : normals) {
    std::vector<Mat> next;
    for (const auto& cell : cells) {
      bool pos = false, neg = false;
      for (const auto& r : cell) {
        int s = sign(dot(u, r));
        if (s > 0) pos = true;
        if (s < 0) neg = true;
      }
      if (!(pos && neg)) {
        next.push_back(cell);
        continue;
      }
      HRep h = cone_hrep(cell, ambient);
      HRep hplus = h, hminus = h;
      hplus.ineqs.push_back(u);
      hminus.ineqs.push_back(fanfactor::neg(u));
      next.push_back(cone_rays(hplus, ambient));
      next.push_back(cone_rays(hminus, ambient));
    }
    cells = std::move(next);
  }
  return cells;
}

namespace {

bool rays_subset(const Mat& a, const Mat& b) {
  // both sorted
  return std::includes(b.begin(), b.end(), a.begin(), a.end(), vec_less);
}

bool cone_subset(const Mat& a, const Mat& b) {
  for (const auto& r : a)
    if (!cone_contains(b, to_q(r))) return false;
  return true;
}

}  // namespace

PolyFan common_refinement_cells(const std::vector<Mat>& a, const std::vector<Mat>& b,
                                int ambient) {
  std::vector<Mat> cells;
  for (const auto& ca : a)
    for (const auto& cb : b) {
      Mat c = cone_intersect(ca, cb, ambient);
      if (!c.empty()) cells.push_back(std::move(c));
    }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::vector<Mat> kept;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < cells.size() && !covered; ++j)
      if (i != j && cone_subset(cells[i], cells[j]) && !cone_subset(cells[j], cells[i]))
        covered = true;
    if (!covered) kept.push_back(cells[i]);
  }
  PolyFan pf;
  pf.dim = ambient;
  pf.cells = std::move(kept);
  return pf;
}

Mat polyfan_rays(const PolyFan& pf) {
  Mat rays;
  for (const auto& cell : pf.cells)
    for (const auto& r : cell) rays.push_back(r);
  sort_unique_rows(rays);
  return rays;
}

PolyFan simplicialize(PolyFan pf) {
  // pulling refinement: subdivide at every ray in turn; uses no new rays
  Mat rays = polyfan_rays(pf);
  for (const auto& r : rays) {
    std::vector<Mat> next;
    for (const auto& cell : pf.cells) {
      if (!std::binary_search(cell.begin(), cell.end(), r, vec_less)) {
        next.push_back(cell);
        continue;
      }
      HRep h = cone_hrep(cell, pf.dim);
      std::set<Mat> facets;
      for (const auto& u : h.ineqs) {
        Mat f;
        for (const auto& g : cell)
          if (dot(u, g) == 0) f.push_back(g);
        if (!f.empty()) facets.insert(std::move(f));
      }
      for (const auto& f : facets) {
        if (std::binary_search(f.begin(), f.end(), r, vec_less)) continue;
        Mat cellnew = f;
        cellnew.push_back(r);
        sort_rows(cellnew);
        next.push_back(std::move(cellnew));
      }
    }
    pf.cells = std::move(next);
  }
  for (const auto& cell : pf.cells)
    if (static_cast<int>(cell.size()) != rank_of(cell))
      throw std::runtime_error("simplicialize: pulling left a non-simplicial cell");
  return pf;
}

}  // namespace fanfactor
