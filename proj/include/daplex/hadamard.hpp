#pragma once

#include <cmath>

#include "daplex/common.hpp"

// Componentwise algebra of R^{n+1}. The Hadamard product with identity
// e = (1,...,1) makes R^{n+1} an associative commutative algebra; fixing an
// invertible element a induces the mutated product x o_a y = x o a^{-1} o y
// whose identity is a. Everything here is a pure function over Eigen
// expressions and evaluates to a dense vector.

namespace daplex {

template <typename D>
Vector to_vector(const Eigen::MatrixBase<D>& x) {
  return x.derived();
}

/// Identity element of the componentwise product.
inline Vector ones(Eigen::Index n) { return Vector::Ones(n); }

template <typename DX, typename DY>
Vector hadamard_product(const Eigen::MatrixBase<DX>& x,
                        const Eigen::MatrixBase<DY>& y) {
  if (x.size() != y.size()) {
    throw DimensionError("hadamard_product: dimension mismatch");
  }
  return x.derived().cwiseProduct(y.derived());
}

/// Componentwise reciprocal; requires every entry nonzero.
template <typename D>
Vector hadamard_inverse(const Eigen::MatrixBase<D>& x) {
  Vector v = x.derived();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) < kZeroEntry) throw NotInvertibleError(i);
  }
  return v.cwiseInverse();
}

/// Product of the mutation by a^{-1}: (x o_a y)_i = x_i y_i / a_i.
template <typename DX, typename DY, typename DA>
Vector mutation_product(const Eigen::MatrixBase<DX>& x,
                        const Eigen::MatrixBase<DY>& y,
                        const Eigen::MatrixBase<DA>& a) {
  if (x.size() != y.size() || x.size() != a.size()) {
    throw DimensionError("mutation_product: dimension mismatch");
  }
  return hadamard_product(hadamard_product(x, hadamard_inverse(a)), y);
}

/// k-th power under the mutated product, k >= 1. The identity is a, so
/// mutation_power(a, k, a) == a for every k.
template <typename DX, typename DA>
Vector mutation_power(const Eigen::MatrixBase<DX>& x, int k,
                      const Eigen::MatrixBase<DA>& a) {
  if (k < 1) throw std::invalid_argument("mutation_power: k must be >= 1");
  Vector result = x.derived();
  for (int i = 1; i < k; ++i) {
    result = mutation_product(result, x, a);
  }
  return result;
}

/// Ratio min_i |a_i| / max_i |a_i|; small values signal an ill-conditioned
/// base point whose inverse amplifies roundoff.
template <typename D>
double conditioning_ratio(const Eigen::MatrixBase<D>& a) {
  const Vector v = a.derived().cwiseAbs();
  const double hi = v.maxCoeff();
  if (hi == 0.0) return 0.0;
  return v.minCoeff() / hi;
}

inline constexpr double kConditioningWarnRatio = 1e-8;

}  // namespace daplex
