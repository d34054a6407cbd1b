#pragma once

#include "daplex/common.hpp"

namespace daplex {

// Dense tableau simplex method for desk-scale problems:
//
//   maximize c^T x  subject to  A x <= b,  x >= 0.
//
// Pivots use Bland's smallest-index rule throughout, which cannot cycle and
// makes the optimal vertex a deterministic function of the input.

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status;
  double objective = 0.0;
  Vector x;
};

/// Solves the LP above. Throws SolverError if the pivot budget is exhausted.
LpResult solve_lp(const Matrix& A, const Vector& b, const Vector& c,
                  int max_pivots = 20000);

}  // namespace daplex
