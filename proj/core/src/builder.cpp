#include "fanfactor/builder.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "fanfactor/polycone.hpp"

namespace fanfactor {

namespace {

struct VecLess {
  bool operator()(const Vec& a, const Vec& b) const { return vec_less(a, b); }
};

using HeightMap = std::map<Vec, Rat, VecLess>;

struct Chain {
  std::vector<Fan> fans;  // one more entry than moves
  std::vector<BuildMove> moves;
};

// ---- move path search ----

struct ClosureNode {
  Fan fan;
  int parent = -1;
  Vec via;  // ray assembled away on the step from the parent
};

struct Closure {
  std::vector<ClosureNode> nodes;
  std::map<std::string, int> index;
};

Closure assemble_closure(const Fan& start, size_t cap) {
  Closure c;
  Fan root = canonical(start);
  c.index[fan_key(root)] = 0;
  c.nodes.push_back({std::move(root), -1, {}});
  for (size_t at = 0; at < c.nodes.size() && c.nodes.size() < cap; ++at) {
    Fan cur = c.nodes[at].fan;  // the nodes vector may reallocate
    for (size_t r = 0; r < cur.rays.size() && c.nodes.size() < cap; ++r) {
      for (Fan& cand : star_assemble_candidates(cur, cur.rays[r])) {
        Fan cc = canonical(cand);
        std::string key = fan_key(cc);
        if (c.index.count(key)) continue;
        c.index[key] = static_cast<int>(c.nodes.size());
        c.nodes.push_back({std::move(cc), static_cast<int>(at), cur.rays[r]});
        if (c.nodes.size() >= cap) break;
      }
    }
  }
  return c;
}

// node ids from just below the root down to id, forward order
std::vector<int> closure_path(const Closure& c, int id) {
  std::vector<int> out;
  for (int at = id; at != 0; at = c.nodes[at].parent) out.push_back(at);
  std::reverse(out.begin(), out.end());
  return out;
}

// both fans assembled down toward a common coarsening
bool meet_in_closures(const Fan& lower, const Fan& upper, Chain& chain) {
  const size_t cap = 1024;
  Closure a = assemble_closure(lower, cap);
  Closure b = assemble_closure(upper, cap);

  int besta = -1, bestb = -1;
  size_t best = 0;
  for (const auto& [key, idb] : b.index) {
    auto it = a.index.find(key);
    if (it == a.index.end()) continue;
    size_t len =
        closure_path(a, it->second).size() + closure_path(b, idb).size();
    if (besta < 0 || len < best) {
      best = len;
      besta = it->second;
      bestb = idb;
    }
  }
  if (besta < 0) return false;

  std::vector<int> pa = closure_path(a, besta);
  std::vector<int> pb = closure_path(b, bestb);
  chain.fans.push_back(a.nodes[0].fan);
  for (int id : pa) {
    chain.moves.push_back({false, a.nodes[id].via});
    chain.fans.push_back(a.nodes[id].fan);
  }
  for (int t = static_cast<int>(pb.size()) - 1; t >= 0; --t) {
    int prev = (t == 0) ? 0 : pb[t - 1];
    chain.moves.push_back({true, b.nodes[pb[t]].via});
    chain.fans.push_back(b.nodes[prev].fan);
  }
  return true;
}

// both fans pulled at every ray of a simplicial common refinement
bool pulled_refinement_path(const Fan& lower, const Fan& upper, Chain& chain) {
  Mat pool;
  try {
    pool = polyfan_rays(simplicialize(common_refinement(lower, upper)));
  } catch (const std::exception&) {
    return false;
  }
  std::sort(pool.begin(), pool.end(), vec_less);

  auto pull = [&pool](const Fan& f0) {
    Chain out;
    out.fans.push_back(canonical(f0));
    for (const Vec& v : pool) {
      Subdivision sd = star_subdivide(out.fans.back(), v);
      if (!sd.changed) continue;
      out.moves.push_back({true, v});
      out.fans.push_back(std::move(sd.fan));
    }
    return out;
  };
  Chain ca = pull(lower);
  Chain cb = pull(upper);
  if (!fan_equal(ca.fans.back(), cb.fans.back())) return false;

  chain = ca;
  for (int t = static_cast<int>(cb.moves.size()) - 1; t >= 0; --t) {
    chain.moves.push_back({false, cb.moves[t].ray});
    chain.fans.push_back(cb.fans[t]);
  }
  return true;
}

Mat sorted_cone_rays(const Fan& f, const ConeIdx& c) {
  Mat rows;
  for (int i : c) rows.push_back(f.rays[i]);
  std::sort(rows.begin(), rows.end(), vec_less);
  return rows;
}

// bounded best-first search over mixed moves, the last resort
bool searched_path(const Fan& lower, const Fan& upper, Chain& chain) {
  Mat pool;
  try {
    pool = polyfan_rays(simplicialize(common_refinement(lower, upper)));
  } catch (const std::exception&) {
    pool = lower.rays;
    pool.insert(pool.end(), upper.rays.begin(), upper.rays.end());
  }
  std::sort(pool.begin(), pool.end(), vec_less);
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  Fan goal = canonical(upper);
  std::string goal_key = fan_key(goal);
  std::set<Vec, VecLess> goal_rays(goal.rays.begin(), goal.rays.end());
  std::set<Mat> goal_cones;
  for (const ConeIdx& c : goal.maximal) goal_cones.insert(sorted_cone_rays(goal, c));

  auto score = [&](const Fan& f) {
    int s = 0;
    std::set<Vec, VecLess> fr(f.rays.begin(), f.rays.end());
    for (const Vec& v : fr) s += !goal_rays.count(v);
    for (const Vec& v : goal_rays) s += !fr.count(v);
    std::set<Mat> fc;
    for (const ConeIdx& c : f.maximal) fc.insert(sorted_cone_rays(f, c));
    for (const Mat& m : fc) s += !goal_cones.count(m);
    for (const Mat& m : goal_cones) s += !fc.count(m);
    return s;
  };

  struct Node {
    Fan fan;
    int parent = -1;
    BuildMove via;
    int depth = 0;
  };
  std::vector<Node> nodes;
  std::map<std::string, int> seen;
  std::set<std::pair<std::pair<int, int>, int>> open;  // ((priority, id), id)

  Fan root = canonical(lower);
  seen[fan_key(root)] = 0;
  open.insert({{score(root), 0}, 0});
  nodes.push_back({std::move(root), -1, {}, 0});

  auto push_child = [&](Fan&& raw, int par, BuildMove mv) {
    Fan cc = canonical(raw);
    std::string key = fan_key(cc);
    if (seen.count(key)) return;
    int id = static_cast<int>(nodes.size());
    seen[key] = id;
    int d = nodes[par].depth + 1;
    int pr = score(cc) + d;
    nodes.push_back({std::move(cc), par, std::move(mv), d});
    open.insert({{pr, id}, id});
  };

  int pops = 0;
  while (!open.empty() && pops < 800) {
    int id = open.begin()->second;
    open.erase(open.begin());
    ++pops;
    if (fan_key(nodes[id].fan) == goal_key) {
      std::vector<int> path;
      for (int at = id; at != 0; at = nodes[at].parent) path.push_back(at);
      std::reverse(path.begin(), path.end());
      chain.fans.push_back(nodes[0].fan);
      for (int p : path) {
        chain.moves.push_back(nodes[p].via);
        chain.fans.push_back(nodes[p].fan);
      }
      return true;
    }
    Fan cur = nodes[id].fan;
    for (const Vec& v : pool) {
      Subdivision sd = star_subdivide(cur, v);
      if (sd.changed) push_child(std::move(sd.fan), id, {true, v});
    }
    for (size_t r = 0; r < cur.rays.size(); ++r)
      for (Fan& cand : star_assemble_candidates(cur, cur.rays[r]))
        push_child(std::move(cand), id, {false, cur.rays[r]});
  }
  return false;
}

// ---- elementary stages over a persistent height table ----

Vec lift_ray(const Vec& v, const Rat& h) {
  Vec w = scale(rat_den(h), v);
  w.push_back(rat_num(h));
  return primitive(w);
}

LiftedFan graph_fan(const Fan& f, const HeightMap& h) {
  LiftedFan g;
  g.base_dim = f.dim;
  g.fan.dim = f.dim + 1;
  for (const Vec& v : f.rays) g.fan.rays.push_back(lift_ray(v, h.at(v)));
  g.fan.maximal = f.maximal;
  return g;
}

// tent over the star of the carrier, flat graph cones elsewhere
LiftedFan subdivide_stage(const Fan& f, HeightMap& h, const Vec& ray,
                          Rat& ceiling, const Rat& step) {
  QVec x = to_q(ray);
  auto carrier = find_carrier(f, x);
  if (!carrier || carrier->size() < 2)
    throw std::logic_error("subdivide stage: ray has no proper carrier");
  const ConeIdx& tau = *carrier;

  auto sol = solve_combination(cone_rays_of(f, tau), x);
  Rat ext = 0;
  for (size_t i = 0; i < tau.size(); ++i)
    ext += sol.particular[i] * h.at(f.rays[tau[i]]);
  Rat top = std::max(ext, ceiling) + step;
  ceiling = top;

  LiftedFan stage = graph_fan(f, h);
  int apex = static_cast<int>(stage.fan.rays.size());
  stage.fan.rays.push_back(lift_ray(ray, top));
  for (ConeIdx& m : stage.fan.maximal)
    if (subset_of(tau, m)) m.push_back(apex);
  h[ray] = top;
  return stage;
}

// re-lift one existing ray to a higher graph
LiftedFan peak_stage(const Fan& f, HeightMap& h, const Vec& ray,
                     const Rat& top) {
  int r0 = find_ray(f, ray);
  if (r0 < 0) throw std::logic_error("peak stage: unknown ray");
  LiftedFan stage = graph_fan(f, h);
  int apex = static_cast<int>(stage.fan.rays.size());
  stage.fan.rays.push_back(lift_ray(ray, top));
  for (ConeIdx& m : stage.fan.maximal)
    if (std::binary_search(m.begin(), m.end(), r0)) m.push_back(apex);
  h[ray] = top;
  return stage;
}

// close an assembling: the assembled ray sits below the merged star
LiftedFan cap_stage(const Fan& f, const Fan& next, HeightMap& h,
                    const Vec& ray) {
  int r0 = find_ray(f, ray);
  if (r0 < 0) throw std::logic_error("cap stage: unknown ray");
  auto tau0 = find_carrier(next, to_q(ray));
  if (!tau0 || tau0->size() < 2)
    throw std::logic_error("cap stage: assembled ray has no proper carrier");

  LiftedFan stage = graph_fan(f, h);
  stage.fan.maximal.clear();
  for (const ConeIdx& m : next.maximal) {
    ConeIdx mapped;
    for (int i : m) {
      int j = find_ray(f, next.rays[i]);
      if (j < 0) throw std::logic_error("cap stage: fans do not match");
      mapped.push_back(j);
    }
    if (subset_of(*tau0, m)) mapped.push_back(r0);
    std::sort(mapped.begin(), mapped.end());
    stage.fan.maximal.push_back(std::move(mapped));
  }
  h.erase(ray);
  return stage;
}

void assemble_stages(const Fan& f, const Fan& next, const Vec& ray,
                     HeightMap& h, Rat& ceiling, const Rat& step,
                     std::vector<LiftedFan>& stages) {
  auto tau0 = find_carrier(next, to_q(ray));
  if (!tau0 || tau0->size() < 2)
    throw std::logic_error("assemble stages: ray has no proper carrier");
  auto sol = solve_combination(cone_rays_of(next, *tau0), to_q(ray));
  Rat psum = 0;
  for (const Rat& c : sol.particular) psum += c;

  // raising the assembled face pushes the linear extension above the ray
  Rat need = h.at(ray) / psum;
  Rat top = std::max(ceiling, need) + step;
  ceiling = top;
  for (int i : *tau0) stages.push_back(peak_stage(f, h, next.rays[i], top));
  stages.push_back(cap_stage(f, next, h, ray));
}

}  // namespace

BuildResult build_cobordism(const Fan& lower, const Fan& upper) {
  validate_fan(lower);
  validate_fan(upper);
  if (lower.dim != upper.dim)
    throw std::runtime_error("build_cobordism: dimension mismatch");
  if (!supports_equal(lower, upper))
    throw std::runtime_error("build_cobordism: the fans have different supports");

  Chain chain;
  if (fan_equal(lower, upper)) {
    chain.fans.push_back(canonical(lower));
  } else if (meet_in_closures(lower, upper, chain) ||
             pulled_refinement_path(lower, upper, chain) ||
             searched_path(lower, upper, chain)) {
  } else {
    throw std::runtime_error(
        "build_cobordism: no elementary move path found (search capped)");
  }

  // consistency of the chain before any geometry is stacked on it
  for (size_t k = 0; k < chain.moves.size(); ++k) {
    const Fan& from = chain.moves[k].subdivide ? chain.fans[k] : chain.fans[k + 1];
    const Fan& to = chain.moves[k].subdivide ? chain.fans[k + 1] : chain.fans[k];
    Subdivision sd = star_subdivide(from, chain.moves[k].ray);
    if (!sd.changed || !fan_equal(sd.fan, to))
      throw std::logic_error("build_cobordism: inconsistent move chain");
  }

  HeightMap h;
  for (const Vec& v : chain.fans[0].rays) h[v] = Rat(-1);
  Rat ceiling(-1), step(1);

  std::vector<LiftedFan> stages;
  for (size_t k = 0; k < chain.moves.size(); ++k) {
    if (chain.moves[k].subdivide)
      stages.push_back(
          subdivide_stage(chain.fans[k], h, chain.moves[k].ray, ceiling, step));
    else
      assemble_stages(chain.fans[k], chain.fans[k + 1], chain.moves[k].ray, h,
                      ceiling, step, stages);
  }

  BuildResult out;
  out.path = chain.moves;
  if (stages.empty()) {
    out.cobordism = graph_fan(chain.fans[0], h);
  } else {
    LiftedFan acc = stages[0];
    for (size_t k = 1; k < stages.size(); ++k) acc = compose(acc, stages[k]);
    out.cobordism = std::move(acc);
  }

  CobordismReport rep = check_cobordism(out.cobordism, lower, upper, true);
  if (!rep.valid)
    throw std::logic_error("build_cobordism: stacked cobordism failed validation: " +
                           rep.failures.front());
  return out;
}

}  // namespace fanfactor
