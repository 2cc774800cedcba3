#include "fanfactor/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace fanfactor {

namespace {

// dense tableau for maximize c.x st A x = b, x >= 0, with b >= 0 and the
// basis columns forming an identity
struct Tableau {
  QMat A;
  QVec b;
  QVec c;
  std::vector<int> basis;

  int m() const { return static_cast<int>(A.size()); }
  int n() const { return A.empty() ? 0 : static_cast<int>(A[0].size()); }

  void pivot(int row, int col) {
    Rat p = A[row][col];
    assert(p != 0);
    for (auto& x : A[row]) x /= p;
    b[row] /= p;
    for (int i = 0; i < m(); ++i) {
      if (i == row || A[i][col] == 0) continue;
      Rat f = A[i][col];
      for (int j = 0; j < n(); ++j)
        if (A[row][j] != 0) A[i][j] -= f * A[row][j];
      b[i] -= f * b[row];
    }
    basis[row] = col;
  }

  // Bland's rule keeps this finite; returns false on an unbounded objective
  bool solve() {
    while (true) {
      int enter = -1;
      for (int j = 0; j < n() && enter < 0; ++j) {
        Rat r = c[j];
        for (int i = 0; i < m(); ++i)
          if (c[basis[i]] != 0 && A[i][j] != 0) r -= c[basis[i]] * A[i][j];
        if (r > 0) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m(); ++i) {
        if (A[i][enter] <= 0) continue;
        Rat ratio = b[i] / A[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  Rat objective() const {
    Rat v = 0;
    for (int i = 0; i < m(); ++i)
      if (c[basis[i]] != 0) v += c[basis[i]] * b[i];
    return v;
  }

  Rat value(int col) const {
    for (int i = 0; i < m(); ++i)
      if (basis[i] == col) return b[i];
    return 0;
  }
};

}  // namespace

LPResult lp_feasible(int nvars, const std::vector<LinearConstraint>& constraints) {
  bool has_strict = false;
  for (const auto& con : constraints) {
    if (static_cast<int>(con.a.size()) != nvars)
      throw std::invalid_argument("lp_feasible: constraint width mismatch");
    if (con.rel == Rel::lt || con.rel == Rel::gt) has_strict = true;
  }

  // columns: u_i, w_i (x_i = u_i - w_i), optional margin t, then slacks,
  // then artificials
  int tcol = has_strict ? 2 * nvars : -1;
  int nbase = 2 * nvars + (has_strict ? 1 : 0);
  int nrows = static_cast<int>(constraints.size()) + (has_strict ? 1 : 0);

  struct Row {
    QVec coef;
    Rat rhs;
    Rel rel;
  };
  std::vector<Row> rows;
  rows.reserve(nrows);
  for (const auto& con : constraints) {
    Row r;
    r.coef.assign(nbase, Rat(0));
    for (int i = 0; i < nvars; ++i) {
      r.coef[i] = con.a[i];
      r.coef[nvars + i] = -con.a[i];
    }
    r.rhs = con.b;
    switch (con.rel) {
      case Rel::lt:
        r.coef[tcol] = 1;
        r.rel = Rel::le;
        break;
      case Rel::gt:
        r.coef[tcol] = -1;
        r.rel = Rel::ge;
        break;
      default:
        r.rel = con.rel;
    }
    rows.push_back(std::move(r));
  }
  if (has_strict) {
    Row cap;
    cap.coef.assign(nbase, Rat(0));
    cap.coef[tcol] = 1;
    cap.rhs = 1;
    cap.rel = Rel::le;
    rows.push_back(std::move(cap));
  }

  int nslack = 0;
  for (const auto& r : rows)
    if (r.rel != Rel::eq) ++nslack;

  Tableau t;
  int total_nonart = nbase + nslack;
  t.A.assign(rows.size(), QVec(total_nonart, Rat(0)));
  t.b.assign(rows.size(), Rat(0));
  t.basis.assign(rows.size(), -1);

  int slack_at = nbase;
  std::vector<int> need_artificial;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Rat sgn = 1;
    if (rows[i].rhs < 0) sgn = -1;
    for (int j = 0; j < nbase; ++j) t.A[i][j] = sgn * rows[i].coef[j];
    t.b[i] = sgn * rows[i].rhs;
    if (rows[i].rel != Rel::eq) {
      Rat s = rows[i].rel == Rel::le ? Rat(1) : Rat(-1);
      t.A[i][slack_at] = sgn * s;
      if (t.A[i][slack_at] == 1)
        t.basis[i] = slack_at;
      ++slack_at;
    }
    if (t.basis[i] < 0) need_artificial.push_back(static_cast<int>(i));
  }

  int art_at = total_nonart;
  for (auto& row : t.A) row.resize(total_nonart + need_artificial.size(), Rat(0));
  for (int i : need_artificial) {
    t.A[i][art_at] = 1;
    t.basis[i] = art_at;
    ++art_at;
  }

  // phase 1: maximize minus the sum of artificials
  t.c.assign(t.n(), Rat(0));
  for (int j = total_nonart; j < t.n(); ++j) t.c[j] = -1;
  bool bounded = t.solve();
  assert(bounded);
  (void)bounded;
  if (t.objective() != 0) return {};

  // drive basic artificials out, dropping redundant rows
  for (int i = t.m() - 1; i >= 0; --i) {
    if (t.basis[i] < total_nonart) continue;
    int col = -1;
    for (int j = 0; j < total_nonart && col < 0; ++j)
      if (t.A[i][j] != 0) col = j;
    if (col >= 0) {
      t.pivot(i, col);
    } else {
      t.A.erase(t.A.begin() + i);
      t.b.erase(t.b.begin() + i);
      t.basis.erase(t.basis.begin() + i);
    }
  }
  for (auto& row : t.A) row.resize(total_nonart);
  t.c.assign(total_nonart, Rat(0));

  if (has_strict) {
    // phase 2: maximize the margin, capped at 1 by the extra row
    t.c[tcol] = 1;
    bounded = t.solve();
    assert(bounded);
    if (t.objective() <= 0) return {};
  }

  LPResult out;
  out.feasible = true;
  out.witness.resize(nvars);
  for (int i = 0; i < nvars; ++i) out.witness[i] = t.value(i) - t.value(nvars + i);
  return out;
}

}  // namespace fanfactor
