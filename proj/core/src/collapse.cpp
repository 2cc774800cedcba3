#include "fanfactor/collapse.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "fanfactor/fan.hpp"
#include "fanfactor/lp.hpp"

namespace fanfactor {

namespace {

// sorted list of the circuit's ray vectors, the tie break key everywhere
Mat circuit_key(const LiftedFan& s, const Circuit& c) {
  Mat rows;
  for (int r : c.rays) rows.push_back(s.fan.rays[r]);
  std::sort(rows.begin(), rows.end(), vec_less);
  return rows;
}

bool key_less(const Mat& a, const Mat& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      vec_less);
}

}  // namespace

CircuitGraph circuit_graph(const LiftedFan& s) {
  CircuitGraph g;
  g.nodes = circuits(s);
  int m = static_cast<int>(g.nodes.size());
  g.edges.assign(m, {});

  std::vector<std::set<ConeIdx>> up(m), lo(m);
  for (int i = 0; i < m; ++i) {
    LiftedFan star = lifted_closed_star(s, g.nodes[i].rays);
    for (auto& f : boundary_faces(star, Side::upper)) up[i].insert(f);
    for (auto& f : boundary_faces(star, Side::lower)) lo[i].insert(f);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      bool touch = false;
      for (const auto& f : up[i]) {
        if (lo[j].count(f)) { touch = true; break; }
      }
      if (touch) g.edges[i].push_back(j);
    }
  }
  return g;
}

CollapseCheck is_collapsible(const CircuitGraph& g) {
  CollapseCheck out;
  int m = static_cast<int>(g.nodes.size());
  std::vector<int> color(m, 0);  // 0 white, 1 on stack, 2 done
  std::vector<int> stack, edge_pos;

  for (int root = 0; root < m; ++root) {
    if (color[root] != 0) continue;
    stack = {root};
    edge_pos = {0};
    color[root] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      if (edge_pos.back() < static_cast<int>(g.edges[u].size())) {
        int v = g.edges[u][edge_pos.back()++];
        if (color[v] == 0) {
          color[v] = 1;
          stack.push_back(v);
          edge_pos.push_back(0);
        } else if (color[v] == 1) {
          auto it = std::find(stack.begin(), stack.end(), v);
          out.cycle.assign(it, stack.end());
          return out;
        }
      } else {
        color[u] = 2;
        stack.pop_back();
        edge_pos.pop_back();
      }
    }
  }
  out.collapsible = true;
  return out;
}

std::vector<int> order_circuits(const LiftedFan& s, const CircuitGraph& g) {
  int m = static_cast<int>(g.nodes.size());
  std::vector<int> indeg(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j : g.edges[i]) ++indeg[j];

  std::vector<Mat> keys(m);
  for (int i = 0; i < m; ++i) keys[i] = circuit_key(s, g.nodes[i]);

  std::vector<int> order;
  std::vector<char> used(m, 0);
  for (int step = 0; step < m; ++step) {
    int pick = -1;
    for (int i = 0; i < m; ++i) {
      if (used[i] || indeg[i] != 0) continue;
      if (pick < 0 || key_less(keys[i], keys[pick])) pick = i;
    }
    if (pick < 0) throw std::runtime_error("order_circuits: graph has a cycle");
    used[pick] = 1;
    order.push_back(pick);
    for (int j : g.edges[pick]) --indeg[j];
  }
  return order;
}

namespace {

// walls: facets shared by exactly two maximal cones, with each side's off ray
std::map<ConeIdx, std::vector<std::pair<int, int>>> wall_table(const Fan& f) {
  std::map<ConeIdx, std::vector<std::pair<int, int>>> walls;
  for (int p = 0; p < static_cast<int>(f.maximal.size()); ++p) {
    const ConeIdx& cone = f.maximal[p];
    for (int t : cone) {
      ConeIdx facet = cone_minus(cone, {t});
      walls[facet].push_back({p, t});
    }
  }
  return walls;
}

// a piecewise-linear function on a pure full-dimensional simplicial fan is
// pinned down by one value per ray, so the certificate LP needs only that
// many unknowns and no piece-agreement rows
SupportFunction certificate_by_ray_values(const Fan& f) {
  int nr = static_cast<int>(f.rays.size());
  std::vector<LinearConstraint> cons;
  for (const auto& [facet, at] : wall_table(f)) {
    if (at.size() != 2) continue;
    for (auto [a, b] : {std::pair<int, int>{0, 1}, {1, 0}}) {
      auto [p, rp] = at[a];
      int q = at[b].first;
      Mat rows;
      for (int j : f.maximal[q]) rows.push_back(f.rays[j]);
      CombinationSolutions cs = solve_combination(rows, to_q(f.rays[rp]));
      // the neighbour is full-dimensional, so the representation exists
      LinearConstraint c;
      c.a.assign(nr, Rat(0));
      c.a[rp] += 1;
      int k = 0;
      for (int j : f.maximal[q]) c.a[j] -= cs.particular[k++];
      c.rel = Rel::ge;
      c.b = 1;
      cons.push_back(std::move(c));
    }
  }

  SupportFunction out;
  LPResult lp = lp_feasible(nr, cons);
  if (!lp.feasible) return out;
  out.found = true;
  out.coeffs.assign(f.maximal.size(), QVec());
  for (size_t p = 0; p < f.maximal.size(); ++p) {
    // recover the linear piece from its values on the cone's rays
    Mat cols(f.dim, Vec(f.dim));
    QVec vals;
    for (int i = 0; i < f.dim; ++i) {
      int j = f.maximal[p][i];
      vals.push_back(lp.witness[j]);
      for (int k = 0; k < f.dim; ++k) cols[k][i] = f.rays[j][k];
    }
    out.coeffs[p] = solve_combination(cols, vals).particular;
  }
  return out;
}

}  // namespace

SupportFunction projectivity_certificate(const LiftedFan& s) {
  const Fan& f = s.fan;
  int n = f.dim;
  int m = static_cast<int>(f.maximal.size());

  bool pure = true;
  for (const auto& c : f.maximal)
    if (static_cast<int>(c.size()) != n) { pure = false; break; }
  if (pure && m > 0) return certificate_by_ray_values(f);

  // lower-dimensional cones do not pin their piece down by ray values, so
  // fall back to one functional per cone glued by shared-ray equalities
  int nvars = m * n;
  std::vector<LinearConstraint> cons;

  auto var = [n](int cone, int coord) { return cone * n + coord; };

  // pieces agree wherever cones share rays
  for (int p = 0; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      for (int r : cone_meet(f.maximal[p], f.maximal[q])) {
        LinearConstraint c;
        c.a.assign(nvars, Rat(0));
        for (int k = 0; k < n; ++k) {
          c.a[var(p, k)] += Rat(f.rays[r][k]);
          c.a[var(q, k)] -= Rat(f.rays[r][k]);
        }
        c.rel = Rel::eq;
        cons.push_back(std::move(c));
      }
    }
  }

  for (const auto& [facet, at] : wall_table(f)) {
    if (at.size() != 2) continue;
    auto [p, tp] = at[0];
    auto [q, tq] = at[1];
    // each side's functional beats the other's at its own off-wall ray
    for (auto [hi, lo, r] : {std::tuple<int, int, int>{p, q, tp}, {q, p, tq}}) {
      LinearConstraint c;
      c.a.assign(nvars, Rat(0));
      for (int k = 0; k < n; ++k) {
        c.a[var(hi, k)] += Rat(f.rays[r][k]);
        c.a[var(lo, k)] -= Rat(f.rays[r][k]);
      }
      c.rel = Rel::ge;
      c.b = 1;
      cons.push_back(std::move(c));
    }
  }

  SupportFunction out;
  LPResult lp = lp_feasible(nvars, cons);
  if (!lp.feasible) return out;
  out.found = true;
  out.coeffs.assign(m, QVec());
  for (int p = 0; p < m; ++p)
    out.coeffs[p] = QVec(lp.witness.begin() + p * n,
                         lp.witness.begin() + (p + 1) * n);
  return out;
}

LiftedFan projectivize(const LiftedFan& s) {
  LiftedFan cur = s;
  if (projectivity_certificate(cur).found) return cur;

  for (int round = 0; round < 20; ++round) {
    std::set<ConeIdx> rim;
    for (auto& f : boundary_faces(cur, Side::lower, false)) rim.insert(f);
    for (auto& f : boundary_faces(cur, Side::upper, false)) rim.insert(f);

    std::vector<ConeIdx> todo;
    for (auto& f : all_faces(cur.fan))
      if (f.size() >= 2 && !rim.count(f)) todo.push_back(f);
    std::stable_sort(todo.begin(), todo.end(),
                     [](const ConeIdx& a, const ConeIdx& b) {
                       if (a.size() != b.size()) return a.size() > b.size();
                       return a < b;
                     });

    bool changed = false;
    for (const auto& face : todo) {
      bool alive = false;
      for (const auto& c : cur.fan.maximal)
        if (subset_of(face, c)) { alive = true; break; }
      if (!alive) continue;
      Vec b = zero_vec(cur.fan.dim);
      for (int r : face) b = add(b, cur.fan.rays[r]);
      Subdivision sd = star_subdivide(cur.fan, b);
      if (sd.changed) {
        cur.fan = std::move(sd.fan);
        changed = true;
      }
    }

    if (projectivity_certificate(cur).found) return cur;
    if (!changed)
      throw std::runtime_error("projectivize: no interior face left to subdivide");
  }
  throw std::runtime_error("projectivize: no certificate after 20 rounds");
}

}  // namespace fanfactor
