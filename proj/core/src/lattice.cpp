#include "fanfactor/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace fanfactor {

Vec add(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec neg(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

Vec scale(const Int& c, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

Int dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_zero(const Vec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

Vec zero_vec(std::size_t n) { return Vec(n, Int(0)); }

QVec to_q(const Vec& a) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = Rat(a[i]);
  return r;
}

QVec qadd(const QVec& a, const QVec& b) {
  assert(a.size() == b.size());
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVec qsub(const QVec& a, const QVec& b) {
  assert(a.size() == b.size());
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

QVec qscale(const Rat& c, const QVec& a) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

Rat qdot(const QVec& a, const QVec& b) {
  assert(a.size() == b.size());
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool qis_zero(const QVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

bool qis_integral(const QVec& a) {
  for (const auto& x : a)
    if (x.get_den() != 1) return false;
  return true;
}

Vec qnumerators(const QVec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    assert(a[i].get_den() == 1);
    r[i] = a[i].get_num();
  }
  return r;
}

Int content(const Vec& a) {
  Int g = 0;
  for (const auto& x : a) g = gcd(g, x);
  return g;
}

Vec primitive(const Vec& a) {
  Int g = content(a);
  if (g == 0) throw std::invalid_argument("zero vector has no primitive representative");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] / g;
  return r;
}

Vec primitive_of_q(const QVec& a) {
  Int lcm = 1;
  for (const auto& x : a) {
    Int d = x.get_den();
    lcm = lcm / gcd(lcm, d) * d;
  }
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get_num() * (lcm / a[i].get_den());
  return primitive(v);
}

int vec_cmp(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool vec_less(const Vec& a, const Vec& b) { return vec_cmp(a, b) < 0; }

std::string vec_str(const Vec& a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ',';
    os << a[i].get_str();
  }
  os << ')';
  return os.str();
}

std::string qvec_str(const QVec& a) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ',';
    os << to_string(a[i]);
  }
  os << ')';
  return os.str();
}

Int det(Mat a) {
  std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("det: matrix not square");
  if (n == 0) return 1;
  Int prev = 1;
  int sgn_flip = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      sgn_flip = -sgn_flip;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sgn_flip < 0 ? Int(-a[n - 1][n - 1]) : a[n - 1][n - 1];
}

namespace {

// row echelon over Q in place; returns pivot columns
std::vector<int> echelon(QMat& m) {
  std::vector<int> pivots;
  std::size_t rows = m.size();
  if (rows == 0) return pivots;
  std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    Rat inv = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

}  // namespace

int qrank_of(QMat rows) { return static_cast<int>(echelon(rows).size()); }

int rank_of(const Mat& rows) {
  QMat q(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) q[i] = to_q(rows[i]);
  return qrank_of(std::move(q));
}

Int lattice_index(const Mat& rows) {
  std::size_t k = rows.size();
  if (k == 0) return 1;
  std::size_t n = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("lattice_index: ragged matrix");
  if (k > n) throw std::invalid_argument("lattice_index: rank deficient");
  // gcd over all k x k minors
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  Int g = 0;
  while (true) {
    Mat sq(k, Vec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sq[i][j] = rows[i][idx[j]];
    g = gcd(g, det(std::move(sq)));
    // next combination
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) {
        i = k + 1;
        break;
      }
    }
    if (i == k + 1 || k == 0) break;
  }
  if (g == 0) throw std::invalid_argument("lattice_index: rank deficient");
  return g;
}

CombinationSolutions solve_combination(const Mat& rows, const QVec& target) {
  std::size_t k = rows.size();
  std::size_t n = target.size();
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("solve_combination: dimension mismatch");
  // unknowns c_0..c_{k-1}; equations indexed by ambient coordinate
  QMat m(n, QVec(k + 1, Rat(0)));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) m[j][i] = Rat(rows[i][j]);
    m[j][k] = target[j];
  }
  std::vector<int> pivots = echelon(m);
  CombinationSolutions out;
  for (int p : pivots)
    if (p == static_cast<int>(k)) return out;  // inconsistent
  out.consistent = true;
  std::vector<bool> is_pivot(k, false);
  out.particular.assign(k, Rat(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    is_pivot[pivots[r]] = true;
    out.particular[pivots[r]] = m[r][k];
  }
  for (std::size_t free = 0; free < k; ++free) {
    if (is_pivot[free]) continue;
    QVec kv(k, Rat(0));
    kv[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) kv[pivots[r]] = -m[r][free];
    out.kernel.push_back(std::move(kv));
  }
  return out;
}

QVec kernel_vector(const Mat& rows) {
  if (rows.empty()) throw std::invalid_argument("kernel_vector: not a circuit relation");
  CombinationSolutions s = solve_combination(rows, QVec(rows[0].size(), Rat(0)));
  if (s.kernel.size() != 1) throw std::invalid_argument("kernel_vector: not a circuit relation");
  return s.kernel[0];
}

QMat nullspace(const Mat& rows, int ambient) {
  QMat m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != ambient)
      throw std::invalid_argument("nullspace: width mismatch");
    m[i] = to_q(rows[i]);
  }
  std::vector<int> pivots = echelon(m);
  std::vector<bool> is_pivot(ambient, false);
  for (int p : pivots) is_pivot[p] = true;
  QMat basis;
  for (int free = 0; free < ambient; ++free) {
    if (is_pivot[free]) continue;
    QVec kv(ambient, Rat(0));
    kv[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) kv[pivots[r]] = -m[r][free];
    basis.push_back(std::move(kv));
  }
  return basis;
}

std::vector<Vec> parallelepiped_points(const Mat& rows) {
  std::size_t k = rows.size();
  if (k == 0) return {};
  std::size_t n = rows[0].size();
  if (rank_of(rows) != static_cast<int>(k))
    throw std::invalid_argument("parallelepiped_points: rows not independent");
  Vec lo(n, Int(0)), hi(n, Int(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) {
      if (rows[i][j] < 0)
        lo[j] += rows[i][j];
      else
        hi[j] += rows[i][j];
    }
  }
  std::vector<Vec> found;
  Vec cur = lo;
  while (true) {
    CombinationSolutions s = solve_combination(rows, to_q(cur));
    if (s.consistent) {
      bool open = true;
      for (const auto& c : s.particular)
        if (c <= 0 || c >= 1) {
          open = false;
          break;
        }
      if (open) found.push_back(cur);
    }
    // advance odometer
    std::size_t j = 0;
    while (j < n) {
      if (cur[j] < hi[j]) {
        ++cur[j];
        break;
      }
      cur[j] = lo[j];
      ++j;
    }
    if (j == n) break;
  }
  std::sort(found.begin(), found.end(), vec_less);
  return found;
}

}  // namespace fanfactor
