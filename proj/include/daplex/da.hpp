#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "daplex/common.hpp"
#include "daplex/subspace.hpp"

// Decides whether M = W intersect S^n is doubly autoparallel, i.e. whether
// W is closed under the product mutated by a positive point a of W. Doubly
// autoparallel subspaces decompose, up to a coordinate permutation, into q
// free coordinates plus r rigid positive blocks; classify_blocks recovers
// that decomposition and closure_check tests the algebraic condition
// directly, so the two verdicts cross-check each other.

namespace daplex {

/// Canonical decomposition of a DA-defining subspace: permuting coordinates
/// by `permutation` sends W to R^q x R a_1 x ... x R a_r.
struct CanonicalForm {
  int q = 0;                       // number of free coordinates
  int r = 0;                       // number of rigid blocks
  std::vector<int> block_sizes;    // ascending, each >= 2, q + sum = n+1
  std::vector<int> permutation;    // canonical slot j <- original coordinate
  std::vector<Vector> block_vectors;  // positive subvectors of the base point
};

struct ClosureResult {
  bool closed;
  double max_residual;
  // Basis pair whose mutated product realized the worst residual.
  int witness_i = -1;
  int witness_j = -1;
};

enum class Verdict {
  DoublyAutoparallel,
  NotDA,
  NoPositivePoint,
  TrivialFullSpace,
};

const char* to_string(Verdict v);

struct DaReport {
  Verdict verdict = Verdict::NotDA;
  std::optional<Vector> base_point;
  double closure_residual_max = 0.0;
  std::optional<CanonicalForm> canonical;
  bool cross_check_agreed = false;
  /// Residual of the a-independence check of the log-affine hull
  /// (only set for DoublyAutoparallel verdicts).
  std::optional<double> base_independence_residual;
  std::vector<std::string> warnings;
};

/// Raised when the closure test and the block classification disagree at the
/// given tolerance; carries both pieces of evidence.
struct CriteriaDisagreement : std::runtime_error {
  CriteriaDisagreement(double closure_residual, bool classified)
      : std::runtime_error(
            "closure test and block classification disagree (closure "
            "residual " +
            std::to_string(closure_residual) +
            (classified ? ", classification succeeded)"
                        : ", classification failed)")),
        closure_residual(closure_residual),
        classified(classified) {}
  double closure_residual;
  bool classified;
};

/// Tests whether W is closed under the product mutated by a^{-1}: every
/// pairwise product of basis vectors must lie back in W. By bilinearity this
/// certifies the condition for all pairs of elements of W.
/// Pre: a strictly positive and a in W.
ClosureResult closure_check(const Subspace& w, const Vector& a,
                            double tol = kDefaultTol);

/// Recovers the canonical decomposition from the coordinate-tying pattern of
/// V = a^{-1} o W, or nullopt when the tying classes do not match dim W.
/// Pre: a strictly positive, a in W, dim W < n+1.
std::optional<CanonicalForm> classify_blocks(const Subspace& w,
                                             const Vector& a,
                                             double tol = kDefaultTol);

/// Full decision procedure: locate a positive base point, run both criteria
/// independently, cross-check, and verify that the log-affine hull is
/// independent of the base point. `seed` fixes the internal draws.
/// `base_point` overrides the LP search when the caller already has one.
DaReport analyze(const Subspace& w, double tol = kDefaultTol,
                 std::uint64_t seed = 0,
                 const std::optional<Vector>& base_point = std::nullopt);

/// Samples points a + w of the positive part of a + W and measures how far
/// log(a + w) strays from the affine space log a + a^{-1} o W. Returns the
/// maximum membership residual over `samples` draws.
double log_affine_verify(const Subspace& w, const Vector& a, int samples,
                         std::uint64_t seed, double tol = kDefaultTol);

/// Distance between two affine subspaces as the worst of the mutual
/// containment residuals (direction bases and offsets); near zero iff the
/// two affine hulls coincide.
double affine_hull_distance(const AffineSubspace& lhs,
                            const AffineSubspace& rhs);

/// The affine hull log a + a^{-1} o W of the positive part of W.
AffineSubspace log_affine_hull(const Subspace& w, const Vector& a);

/// Builds the subspace with canonical data (q, block sizes, block vectors)
/// pushed through the inverse of the given permutation.
Subspace generate_canonical(int q, const std::vector<int>& block_sizes,
                            const std::vector<Vector>& block_vectors,
                            const std::vector<int>& permutation);

/// Span of v0 and the first d simplex vertices; v0 must vanish on the first
/// d coordinates and carry positive entries summing to one elsewhere.
Subspace generate_vertex_span(int n, int d, const Vector& v0);

/// Affine chart of M = W intersect S^n: xi in R^{dim W - 1} -> p, with the
/// sum-to-one constraint eliminated. The map is affine, so the Jacobian is
/// the constant direction matrix.
class SimplexChart {
 public:
  SimplexChart(Vector base, Matrix directions);

  Eigen::Index ambient_dim() const { return base_.size(); }
  Eigen::Index dim() const { return directions_.cols(); }

  /// Base point p(0), strictly positive and summing to one.
  const Vector& base() const { return base_; }

  Vector map(const Vector& xi) const;
  const Matrix& jacobian() const { return directions_; }

  bool in_domain(const Vector& xi) const;

  /// Open box around 0 whose image is guaranteed strictly positive.
  const std::vector<std::pair<double, double>>& feasible_box() const {
    return box_;
  }

 private:
  Vector base_;
  Matrix directions_;
  std::vector<std::pair<double, double>> box_;
};

/// Chart of W intersect S^n; throws if the intersection is empty.
SimplexChart simplex_chart(const Subspace& w);

}  // namespace daplex
