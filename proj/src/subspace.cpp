#include "daplex/subspace.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "daplex/hadamard.hpp"
#include "daplex/linprog.hpp"

namespace daplex {

Subspace::Subspace(const Matrix& generators, double tol) {
  if (generators.rows() < 2 || generators.cols() < 1) {
    throw DimensionError("Subspace: need ambient dimension >= 2 and at least "
                         "one generating vector");
  }
  Eigen::JacobiSVD<Matrix> svd(generators, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const double top = sigma.size() > 0 ? sigma[0] : 0.0;
  if (top <= 0.0) {
    throw std::invalid_argument("Subspace: generating vectors are all zero");
  }
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > tol * top) ++rank;
  basis_ = svd.matrixU().leftCols(rank);
  original_ = generators;
}

Subspace Subspace::from_vectors(const std::vector<Vector>& generators,
                                double tol) {
  if (generators.empty()) {
    throw std::invalid_argument("Subspace: empty generating set");
  }
  const Eigen::Index n = generators.front().size();
  Matrix g(n, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (generators[j].size() != n) {
      throw DimensionError("Subspace: generating vectors of mixed dimension");
    }
    g.col(static_cast<Eigen::Index>(j)) = generators[j];
  }
  return Subspace(g, tol);
}

Vector Subspace::project(const Vector& x) const {
  if (x.size() != ambient_dim()) {
    throw DimensionError("Subspace::project: dimension mismatch");
  }
  return basis_ * (basis_.transpose() * x);
}

Containment Subspace::contains(const Vector& x, double tol) const {
  const Vector r = x - project(x);
  const double residual = r.norm() / std::max(1.0, x.norm());
  return {residual <= tol, residual};
}

Subspace scale_by_point(const Subspace& s, const Vector& a, bool invert) {
  if (a.size() != s.ambient_dim()) {
    throw DimensionError("scale_by_point: dimension mismatch");
  }
  if (!is_strictly_positive(a)) {
    throw std::invalid_argument("scale_by_point: point must be strictly "
                                "positive");
  }
  const Vector factor = invert ? Vector(a.cwiseInverse()) : a;
  Matrix scaled = factor.asDiagonal() * s.basis();
  return Subspace(scaled);
}

std::optional<Vector> find_positive_point(const Subspace& s) {
  const Eigen::Index n1 = s.ambient_dim();
  const Eigen::Index d = s.dim();
  const Matrix& basis = s.basis();

  // maximize t  s.t.  (B c)_i >= t,  |(B c)_i| <= 1,  with c and t free.
  // Free variables are split into positive parts for the standard-form
  // solver: columns are [c+ | c- | t+ | t-].
  const Eigen::Index vars = 2 * d + 2;
  const Eigen::Index rows = 3 * n1;
  Matrix A = Matrix::Zero(rows, vars);
  Vector b = Vector::Zero(rows);
  Vector c = Vector::Zero(vars);
  c[2 * d] = 1.0;
  c[2 * d + 1] = -1.0;

  A.block(0, 0, n1, d) = -basis;
  A.block(0, d, n1, d) = basis;
  A.block(0, 2 * d, n1, 1).setConstant(1.0);
  A.block(0, 2 * d + 1, n1, 1).setConstant(-1.0);

  A.block(n1, 0, n1, d) = basis;
  A.block(n1, d, n1, d) = -basis;
  b.segment(n1, n1).setConstant(1.0);

  A.block(2 * n1, 0, n1, d) = -basis;
  A.block(2 * n1, d, n1, d) = basis;
  b.segment(2 * n1, n1).setConstant(1.0);

  const LpResult lp = solve_lp(A, b, c);
  if (lp.status != LpStatus::Optimal) {
    throw SolverError("find_positive_point: LP did not reach an optimum");
  }
  const double best = lp.objective;
  if (std::abs(best) < 1e-10 || best < 0.0) {
    return std::nullopt;  // only boundary-touching nonnegative vectors exist
  }
  const Vector coeff =
      lp.x.segment(0, d) - lp.x.segment(d, d);
  Vector point = basis * coeff;
  if (point.minCoeff() <= 0.0) {
    throw SolverError("find_positive_point: LP reported a positive optimum "
                      "but the recovered point is not strictly positive");
  }
  return point;
}

}  // namespace daplex
