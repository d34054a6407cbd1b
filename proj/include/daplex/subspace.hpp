#pragma once

#include <optional>
#include <vector>

#include "daplex/common.hpp"

namespace daplex {

/// Outcome of a membership test: the verdict plus the scaled distance
/// ||x - Proj(x)|| / max(1, ||x||) that was compared against the tolerance.
struct Containment {
  bool contained;
  double residual;
};

/// A linear subspace of R^{n+1}, held as an orthonormal basis obtained from
/// an SVD of the generating vectors. The generators are retained for
/// reporting; their span equals the span of the basis.
class Subspace {
 public:
  /// Columns of `generators` span the subspace. The numerical rank is
  /// decided at the relative singular-value threshold `tol`.
  explicit Subspace(const Matrix& generators, double tol = kDefaultTol);

  static Subspace from_vectors(const std::vector<Vector>& generators,
                               double tol = kDefaultTol);

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }

  /// Orthonormal basis, one vector per column.
  const Matrix& basis() const { return basis_; }
  const Matrix& original_basis() const { return original_; }

  /// Orthogonal projection of x onto the subspace.
  Vector project(const Vector& x) const;

  Containment contains(const Vector& x, double tol = kDefaultTol) const;

 private:
  Matrix basis_;
  Matrix original_;
};

/// Image of S under componentwise multiplication: a^{-1} o S when `invert`,
/// a o S otherwise. a must be strictly positive.
Subspace scale_by_point(const Subspace& s, const Vector& a, bool invert);

/// A strictly positive representative of S, or nullopt when S meets the
/// positive orthant only at the boundary. The representative maximizes its
/// smallest entry subject to unit sup-norm (a Chebyshev-style LP solved by
/// the in-repo dense simplex method).
std::optional<Vector> find_positive_point(const Subspace& s);

/// Affine subspace base + direction.
struct AffineSubspace {
  Vector base;
  Subspace direction;

  Containment contains(const Vector& x, double tol = kDefaultTol) const {
    require_same_dim(base, x, "AffineSubspace::contains");
    return direction.contains(x - base, tol);
  }
};

}  // namespace daplex
