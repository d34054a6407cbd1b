#include "daplex/linprog.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace daplex {
namespace {

constexpr double kPivotEps = 1e-11;

// Standard two-phase tableau. Rows 0..m-1 are constraints, row m is the
// objective, row m+1 (phase one only) drives the auxiliary variable out.
struct Tableau {
  int m, n;
  std::vector<int> nonbasic;  // size n+1, last slot is the auxiliary var (-1)
  std::vector<int> basic;     // size m
  Matrix d;                   // (m+2) x (n+2)

  Tableau(const Matrix& A, const Vector& b, const Vector& c)
      : m(static_cast<int>(b.size())),
        n(static_cast<int>(c.size())),
        nonbasic(n + 1),
        basic(m),
        d(Matrix::Zero(m + 2, n + 2)) {
    d.topLeftCorner(m, n) = A;
    for (int i = 0; i < m; ++i) {
      basic[i] = n + i;
      d(i, n) = -1.0;
      d(i, n + 1) = b[i];
    }
    for (int j = 0; j < n; ++j) {
      nonbasic[j] = j;
      d(m, j) = -c[j];
    }
    nonbasic[n] = -1;
    d(m + 1, n) = 1.0;
  }

  void pivot(int r, int s) {
    const double inv = 1.0 / d(r, s);
    for (int i = 0; i < m + 2; ++i) {
      if (i == r || std::abs(d(i, s)) <= kPivotEps) continue;
      const double factor = d(i, s) * inv;
      d.row(i) -= factor * d.row(r);
      d(i, s) = d(r, s) * factor;  // undone by the column rescale below
    }
    for (int j = 0; j < n + 2; ++j) {
      if (j != s) d(r, j) *= inv;
    }
    for (int i = 0; i < m + 2; ++i) {
      if (i != r) d(i, s) *= -inv;
    }
    d(r, s) = inv;
    std::swap(basic[r], nonbasic[s]);
  }

  // Bland's rule: entering variable = improving column with the smallest
  // variable index; leaving row = smallest ratio, ties by variable index.
  // Phase 1 drives the auxiliary objective (row m+1) to feasibility; phase
  // 2 optimizes the real objective (row m).
  bool simplex(int phase, int& budget) {
    const int obj = (phase == 1) ? m + 1 : m;
    while (true) {
      if (budget-- <= 0) throw SolverError("simplex: pivot budget exhausted");
      int s = -1;
      for (int j = 0; j <= n; ++j) {
        if (phase == 2 && nonbasic[j] == -1) continue;
        if (d(obj, j) < -kPivotEps &&
            (s == -1 || nonbasic[j] < nonbasic[s])) {
          s = j;
        }
      }
      if (s == -1) return true;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (d(i, s) <= kPivotEps) continue;
        if (r == -1) {
          r = i;
          continue;
        }
        const double lhs = d(i, n + 1) * d(r, s);
        const double rhs = d(r, n + 1) * d(i, s);
        if (lhs < rhs - kPivotEps ||
            (std::abs(lhs - rhs) <= kPivotEps && basic[i] < basic[r])) {
          r = i;
        }
      }
      if (r == -1) return false;  // unbounded direction
      pivot(r, s);
    }
  }
};

}  // namespace

LpResult solve_lp(const Matrix& A, const Vector& b, const Vector& c,
                  int max_pivots) {
  if (A.rows() != b.size() || A.cols() != c.size()) {
    throw DimensionError("solve_lp: inconsistent problem dimensions");
  }
  Tableau t(A, b, c);
  int budget = max_pivots;

  int r = 0;
  for (int i = 1; i < t.m; ++i) {
    if (t.d(i, t.n + 1) < t.d(r, t.n + 1)) r = i;
  }
  if (t.m > 0 && t.d(r, t.n + 1) < -kPivotEps) {
    t.pivot(r, t.n);
    if (!t.simplex(1, budget) || t.d(t.m + 1, t.n + 1) < -kPivotEps) {
      return {LpStatus::Infeasible, 0.0, Vector()};
    }
    for (int i = 0; i < t.m; ++i) {
      if (t.basic[i] == -1) {
        int s = 0;
        for (int j = 1; j <= t.n; ++j) {
          if (t.d(i, j) < t.d(i, s) ||
              (t.d(i, j) == t.d(i, s) && t.nonbasic[j] < t.nonbasic[s])) {
            s = j;
          }
        }
        t.pivot(i, s);
      }
    }
  }

  const bool bounded = t.simplex(2, budget);
  Vector x = Vector::Zero(t.n);
  for (int i = 0; i < t.m; ++i) {
    if (t.basic[i] >= 0 && t.basic[i] < t.n) x[t.basic[i]] = t.d(i, t.n + 1);
  }
  if (!bounded) return {LpStatus::Unbounded, 0.0, x};
  return {LpStatus::Optimal, t.d(t.m, t.n + 1), x};
}

}  // namespace daplex
