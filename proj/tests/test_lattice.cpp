#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>

#include "fanfactor/lattice.hpp"
#include "fanfactor/lp.hpp"

using namespace fanfactor;

namespace {

// independent oracle: plain rational Gaussian elimination, kept free of the
// library's fraction-free code paths on purpose
QMat to_qmat(const Mat& m) {
  QMat q;
  for (const auto& r : m) q.push_back(to_q(r));
  return q;
}

int gauss_rank(QMat a) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[r][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

// solve sum_i c_i rows_i = target by elimination on the transpose; empty
// optional when inconsistent
std::optional<QVec> gauss_solve(const Mat& rows, const QVec& target) {
  int n = static_cast<int>(rows.size());
  int dim = n ? static_cast<int>(rows[0].size()) : static_cast<int>(target.size());
  QMat a(dim, QVec(n + 1, Rat(0)));
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < n; ++i) a[j][i] = Rat(rows[i][j]);
    a[j][n] = target[j];
  }
  int r = 0;
  std::vector<int> lead(n, -1);
  for (int c = 0; c < n && r < dim; ++c) {
    int p = -1;
    for (int i = r; i < dim; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    for (int i = 0; i < dim; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[r][c];
      for (int j = c; j <= n; ++j) a[i][j] -= f * a[r][j];
    }
    lead[c] = r;
    ++r;
  }
  for (int i = r; i < dim; ++i)
    if (a[i][n] != 0) return std::nullopt;
  QVec x(n, Rat(0));
  for (int c = 0; c < n; ++c)
    if (lead[c] >= 0) x[c] = a[lead[c]][n] / a[lead[c]][c];
  return x;
}

// cofactor expansion along the first row, the schoolbook recursion
Int cofactor_det(const Mat& m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Int acc = 0;
  for (int j = 0; j < n; ++j) {
    Mat minor;
    for (int i = 1; i < n; ++i) {
      Vec row;
      for (int k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    Int term = m[0][j] * cofactor_det(minor);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

// lattice index by brute force: integer points of the half-open
// parallelepiped of the rows, counted inside the rational span
Int coset_count(const Mat& rows) {
  int dim = static_cast<int>(rows[0].size());
  Vec lo(dim, 0), hi(dim, 0);
  for (const auto& r : rows)
    for (int j = 0; j < dim; ++j) {
      if (r[j] < 0) lo[j] += r[j];
      if (r[j] > 0) hi[j] += r[j];
    }
  Int count = 0;
  Vec x(dim, 0);
  std::function<void(int)> scan = [&](int j) {
    if (j == dim) {
      auto sol = gauss_solve(rows, to_q(x));
      if (!sol) return;
      QVec residual = to_q(x);
      for (size_t i = 0; i < rows.size(); ++i)
        residual = qsub(residual, qscale((*sol)[i], to_q(rows[i])));
      if (!qis_zero(residual)) return;
      for (const Rat& c : *sol)
        if (c < 0 || c >= 1) return;
      ++count;
      return;
    }
    for (Int v = lo[j]; v <= hi[j]; ++v) {
      x[j] = v;
      scan(j + 1);
    }
  };
  scan(0);
  return count;
}

Mat random_matrix(std::mt19937_64& rng, int rows, int cols) {
  Mat m(rows, Vec(cols));
  for (auto& r : m)
    for (auto& v : r) v = static_cast<long>(rng() % 7) - 3;
  return m;
}

}  // namespace

TEST_CASE("vector arithmetic basics") {
  Vec a{1, -2, 3}, b{4, 5, -6};
  CHECK(add(a, b) == Vec{5, 3, -3});
  CHECK(sub(a, b) == Vec{-3, -7, 9});
  CHECK(neg(a) == Vec{-1, 2, -3});
  CHECK(scale(2, a) == Vec{2, -4, 6});
  CHECK(dot(a, b) == 4 - 10 - 18);
  CHECK(is_zero(zero_vec(4)));
  CHECK_FALSE(is_zero(a));
}

TEST_CASE("primitive and content") {
  CHECK(primitive(Vec{2, 4, 6}) == Vec{1, 2, 3});
  CHECK(primitive(Vec{-2, -4}) == Vec{-1, -2});
  CHECK(primitive(Vec{0, 5, 0}) == Vec{0, 1, 0});
  CHECK(content(Vec{6, -9, 12}) == 3);
  CHECK_THROWS(primitive(Vec{0, 0}));
  CHECK(primitive_of_q({make_rat(1, 2), make_rat(3, 4)}) == Vec{2, 3});
}

TEST_CASE("vec_cmp is a strict lexicographic order") {
  CHECK(vec_cmp(Vec{1, 2}, Vec{1, 3}) < 0);
  CHECK(vec_cmp(Vec{2, 0}, Vec{1, 9}) > 0);
  CHECK(vec_cmp(Vec{1, 2}, Vec{1, 2}) == 0);
  CHECK(vec_less(Vec{-1, 5}, Vec{0, 0}));
}

TEST_CASE("det on knowns") {
  CHECK(det({{1, 0}, {0, 1}}) == 1);
  CHECK(det({{0, 1}, {1, 0}}) == -1);
  CHECK(det({{2, 0}, {0, 3}}) == 6);
  CHECK(det({{1, 2}, {2, 4}}) == 0);
  CHECK(det({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}}) == -3);
  CHECK(det({}) == 1);
}

TEST_CASE("det matches cofactor expansion on random matrices") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    int n = 1 + static_cast<int>(rng() % 4);
    Mat m = random_matrix(rng, n, n);
    CHECK(det(m) == cofactor_det(m));
  }
}

TEST_CASE("rank agrees with rational elimination") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    int rows = 1 + static_cast<int>(rng() % 4);
    int cols = 1 + static_cast<int>(rng() % 4);
    Mat m = random_matrix(rng, rows, cols);
    CHECK(rank_of(m) == gauss_rank(to_qmat(m)));
  }
}

TEST_CASE("lattice_index on knowns") {
  CHECK(lattice_index({{1, 0}, {0, 1}}) == 1);
  CHECK(lattice_index({{2, 0}, {0, 1}}) == 2);
  CHECK(lattice_index({{1, 1}, {1, -1}}) == 2);
  CHECK(lattice_index({{2, 4}}) == 2);   // the span lattice is generated by (1,2)
  CHECK(lattice_index({{1, 2}}) == 1);
  CHECK(lattice_index({{2, 0, 0}, {0, 3, 0}}) == 6);
  CHECK_THROWS(lattice_index({{1, 1}, {2, 2}}));
}

TEST_CASE("lattice_index equals the coset count oracle") {
  std::mt19937_64 rng(13);
  int done = 0;
  while (done < 100) {
    int dim = 1 + static_cast<int>(rng() % 3);
    int rows = 1 + static_cast<int>(rng() % dim);
    Mat m = random_matrix(rng, rows, dim);
    if (rank_of(m) != rows) continue;
    CHECK(lattice_index(m) == coset_count(m));
    ++done;
  }
}

TEST_CASE("solve_combination finds solutions and kernels") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    int dim = 1 + static_cast<int>(rng() % 3);
    int rows = 1 + static_cast<int>(rng() % 4);
    Mat m = random_matrix(rng, rows, dim);
    Vec target = random_matrix(rng, 1, dim)[0];
    auto got = solve_combination(m, to_q(target));
    auto oracle = gauss_solve(m, to_q(target));
    bool oracle_ok = false;
    if (oracle) {
      QVec r = to_q(target);
      for (int i = 0; i < rows; ++i) r = qsub(r, qscale((*oracle)[i], to_q(m[i])));
      oracle_ok = qis_zero(r);
    }
    CHECK(got.consistent == oracle_ok);
    if (got.consistent) {
      QVec r = to_q(target);
      for (int i = 0; i < rows; ++i) r = qsub(r, qscale(got.particular[i], to_q(m[i])));
      CHECK(qis_zero(r));
      for (const auto& k : got.kernel) {
        QVec z(dim, Rat(0));
        for (int i = 0; i < rows; ++i) z = qadd(z, qscale(k[i], to_q(m[i])));
        CHECK(qis_zero(z));
      }
      CHECK(static_cast<int>(got.kernel.size()) == rows - gauss_rank(to_qmat(m)));
    }
  }
}

TEST_CASE("kernel_vector on a circuit generator set") {
  // (1,0), (0,1), (1,1): the relation is x + y - z = 0 up to scale
  QVec k = kernel_vector({{1, 0}, {0, 1}, {1, 1}});
  REQUIRE(k.size() == 3);
  CHECK(k[0] == k[1]);
  CHECK(k[2] == -k[0]);
  CHECK(k[0] != 0);
  CHECK_THROWS(kernel_vector({{1, 0}, {0, 1}}));          // independent
  CHECK_THROWS(kernel_vector({{1, 0}, {2, 0}, {3, 0}}));  // kernel too big
}

TEST_CASE("nullspace has the right dimension and annihilates") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 100; ++t) {
    int dim = 1 + static_cast<int>(rng() % 4);
    int rows = static_cast<int>(rng() % 4);
    Mat m = random_matrix(rng, rows, dim);
    QMat ns = nullspace(m, dim);
    CHECK(static_cast<int>(ns.size()) == dim - gauss_rank(to_qmat(m)));
    for (const auto& u : ns)
      for (const auto& r : m) CHECK(qdot(to_q(r), u) == 0);
    CHECK(gauss_rank(ns) == static_cast<int>(ns.size()));
  }
}

TEST_CASE("parallelepiped_points on knowns") {
  CHECK(parallelepiped_points({{1, 0}, {0, 1}}).empty());
  auto p = parallelepiped_points({{1, 1}, {1, -1}});
  REQUIRE(p.size() == 1);
  CHECK(p[0] == Vec{1, 0});
  auto q = parallelepiped_points({{3, 1}});
  CHECK(q.empty());  // primitive segment has no interior lattice points
  auto r = parallelepiped_points({{2, 4}});
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Vec{1, 2});
}

TEST_CASE("parallelepiped_points equals the box scan oracle") {
  std::mt19937_64 rng(16);
  int done = 0;
  while (done < 100) {
    int dim = 1 + static_cast<int>(rng() % 3);
    int rows = 1 + static_cast<int>(rng() % dim);
    Mat m = random_matrix(rng, rows, dim);
    if (rank_of(m) != rows) continue;
    // oracle: scan the closed bounding box of the parallelepiped and keep
    // points whose coefficients sit strictly inside (0,1)
    Vec lo(dim, 0), hi(dim, 0);
    for (const auto& row : m)
      for (int j = 0; j < dim; ++j) {
        if (row[j] < 0) lo[j] += row[j];
        if (row[j] > 0) hi[j] += row[j];
      }
    std::vector<Vec> expect;
    Vec x(dim, 0);
    std::function<void(int)> scan = [&](int j) {
      if (j == dim) {
        auto sol = gauss_solve(m, to_q(x));
        if (!sol) return;
        QVec res = to_q(x);
        for (int i = 0; i < rows; ++i) res = qsub(res, qscale((*sol)[i], to_q(m[i])));
        if (!qis_zero(res)) return;
        for (const Rat& c : *sol)
          if (c <= 0 || c >= 1) return;
        expect.push_back(x);
        return;
      }
      for (Int v = lo[j]; v <= hi[j]; ++v) {
        x[j] = v;
        scan(j + 1);
      }
    };
    scan(0);
    std::sort(expect.begin(), expect.end(), vec_less);
    CHECK(parallelepiped_points(m) == expect);
    ++done;
  }
}

TEST_CASE("lp feasibility on knowns") {
  // x >= 1, x <= 2
  LPResult r1 = lp_feasible(1, {{{Rat(1)}, Rel::ge, Rat(1)}, {{Rat(1)}, Rel::le, Rat(2)}});
  CHECK(r1.feasible);
  CHECK(r1.witness[0] >= 1);
  CHECK(r1.witness[0] <= 2);
  // x >= 1, x <= 0
  CHECK_FALSE(lp_feasible(1, {{{Rat(1)}, Rel::ge, Rat(1)}, {{Rat(1)}, Rel::le, Rat(0)}}).feasible);
  // strict: x > 0, x < 0 infeasible; x > 0, x < 1 feasible with interior witness
  CHECK_FALSE(lp_feasible(1, {{{Rat(1)}, Rel::gt, Rat(0)}, {{Rat(1)}, Rel::lt, Rat(0)}}).feasible);
  LPResult r2 = lp_feasible(1, {{{Rat(1)}, Rel::gt, Rat(0)}, {{Rat(1)}, Rel::lt, Rat(1)}});
  CHECK(r2.feasible);
  CHECK(r2.witness[0] > 0);
  CHECK(r2.witness[0] < 1);
  // equality plus inequality: x + y = 1, x >= 3 -> y <= -2 fine, feasible
  LPResult r3 = lp_feasible(2, {{{Rat(1), Rat(1)}, Rel::eq, Rat(1)},
                                {{Rat(1), Rat(0)}, Rel::ge, Rat(3)}});
  CHECK(r3.feasible);
  CHECK(r3.witness[0] + r3.witness[1] == 1);
  CHECK(r3.witness[0] >= 3);
  // unbounded strict system is still feasible: x > 5
  CHECK(lp_feasible(1, {{{Rat(1)}, Rel::gt, Rat(5)}}).feasible);
}

TEST_CASE("lp witnesses satisfy every constraint on random systems") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    int nv = 1 + static_cast<int>(rng() % 3);
    int nc = 1 + static_cast<int>(rng() % 4);
    std::vector<LinearConstraint> cs;
    for (int i = 0; i < nc; ++i) {
      LinearConstraint c;
      for (int j = 0; j < nv; ++j) c.a.push_back(Rat(static_cast<long>(rng() % 5) - 2));
      c.b = Rat(static_cast<long>(rng() % 5) - 2);
      switch (rng() % 5) {
        case 0: c.rel = Rel::le; break;
        case 1: c.rel = Rel::ge; break;
        case 2: c.rel = Rel::eq; break;
        case 3: c.rel = Rel::lt; break;
        default: c.rel = Rel::gt; break;
      }
      cs.push_back(c);
    }
    LPResult r = lp_feasible(nv, cs);
    if (!r.feasible) continue;
    for (const auto& c : cs) {
      Rat v = qdot(c.a, r.witness);
      switch (c.rel) {
        case Rel::le: CHECK(v <= c.b); break;
        case Rel::ge: CHECK(v >= c.b); break;
        case Rel::eq: CHECK(v == c.b); break;
        case Rel::lt: CHECK(v < c.b); break;
        case Rel::gt: CHECK(v > c.b); break;
      }
    }
  }
}

TEST_CASE("qis_integral and qnumerators") {
  QVec v{make_rat(4, 2), make_rat(-3, 1)};
  CHECK(qis_integral(v));
  CHECK(qnumerators(v) == Vec{2, -3});
  CHECK_FALSE(qis_integral({make_rat(1, 2)}));
}
