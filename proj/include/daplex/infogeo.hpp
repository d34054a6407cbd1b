#pragma once

#include <cstdint>
#include <vector>

#include "daplex/common.hpp"
#include "daplex/da.hpp"
#include "daplex/subspace.hpp"

// Dualistic geometry of the open probability simplex S^n: the Fisher metric
// together with the one-parameter family of connections blending the
// exponential (+1) and mixture (-1) ones. Two global affine charts exist:
//
//   eta   : eta_i = p_i,                 i = 1..n   (mixture-affine)
//   theta : theta^i = log(p_i / p_{n+1}), i = 1..n   (exponential-affine)
//
// All tensors are expressed in one of these charts; the eta chart is the
// working default since its mixture Christoffel symbols vanish.

namespace daplex {

/// A point of the open simplex: strictly positive, entries sum to one.
class SimplexPoint {
 public:
  explicit SimplexPoint(Vector probs);

  /// Number of outcomes, n+1.
  Eigen::Index size() const { return p_.size(); }
  /// Chart dimension n.
  Eigen::Index dim() const { return p_.size() - 1; }

  const Vector& probs() const { return p_; }
  double operator[](Eigen::Index i) const { return p_[i]; }

 private:
  Vector p_;
};

enum class Chart { Eta, Theta };

Vector eta_coords(const SimplexPoint& p);
SimplexPoint eta_inverse(const Vector& eta);

Vector theta_coords(const SimplexPoint& p);
SimplexPoint theta_inverse(const Vector& theta);

Vector chart_coords(const SimplexPoint& p, Chart chart);
SimplexPoint chart_inverse(const Vector& x, Chart chart);

/// Fisher information matrix in the given chart, n x n, positive definite.
Matrix fisher_metric(const SimplexPoint& p, Chart chart);

/// Christoffel symbols of the alpha-connection, computed from the defining
/// sums over the sample space. symbols[k](i, j) = Gamma_{ij,k}, symmetric
/// in (i, j).
std::vector<Matrix> christoffel(const SimplexPoint& p, double alpha,
                                Chart chart);

/// Mixture geodesic: componentwise affine interpolation.
SimplexPoint m_geodesic(const SimplexPoint& p, const SimplexPoint& q,
                        double t);
/// Exponential geodesic: normalized componentwise geometric interpolation.
SimplexPoint e_geodesic(const SimplexPoint& p, const SimplexPoint& q,
                        double t);

struct GeodesicTrace {
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<SimplexPoint> points;
  /// Largest distance of any sample from the reference subspace, when one
  /// was supplied; 0 otherwise.
  double max_constraint_residual = 0.0;
};

/// Integrates the alpha-geodesic equation in the eta chart with a classical
/// fourth-order one-step method at fixed step. `velocity` is the initial
/// eta-velocity. Throws GeodesicExitError if the trajectory leaves the open
/// simplex. `reference` (optional) adds a containment residual per sample.
GeodesicTrace alpha_geodesic_ivp(const SimplexPoint& p, const Vector& velocity,
                                 double alpha, double t_end, int steps,
                                 const Subspace* reference = nullptr);

/// Connects p to q by shooting: Newton iteration on the initial velocity
/// until the endpoint lands within 1e-8 of q in eta coordinates.
GeodesicTrace alpha_geodesic_bvp(const SimplexPoint& p, const SimplexPoint& q,
                                 double alpha, int steps,
                                 const Subspace* reference = nullptr);

/// Largest normal component of the alpha-covariant derivative over pairs of
/// tangent basis fields of M = W intersect S^n at p; near zero iff M is
/// alpha-autoparallel at p. Pre: p lies on M.
double autoparallel_residual(const Subspace& w, const SimplexPoint& p,
                             double alpha);

/// Alpha-divergence with the 4/(1-alpha^2) normalization; the limits at
/// alpha = -1 and +1 are KL(p||q) and KL(q||p) respectively.
double alpha_divergence(const SimplexPoint& p, const SimplexPoint& q,
                        double alpha);

struct ProjectionResult {
  SimplexPoint point;
  double divergence = 0.0;
  /// Largest pairwise distance between the multi-start minimizers.
  double spread = 0.0;
  int starts = 0;
};

/// argmin over q in W intersect S^n of alpha_divergence(p, q, alpha) by
/// damped Newton in the simplex chart with `starts` independent starting
/// points. Throws SolverError on non-convergence and when the starts
/// disagree by more than 1e-4 (which would contradict uniqueness).
ProjectionResult alpha_projection(const SimplexPoint& p, const Subspace& w,
                                  double alpha, int starts = 8,
                                  std::uint64_t seed = 0);

/// Checks the duality identity of the metric against the pair of
/// connections (alpha, -alpha): the chart derivative of g (central finite
/// differences of step h) must match the corresponding Christoffel sums.
/// Returns the maximum absolute discrepancy over all index triples.
double duality_residual(const SimplexPoint& p, Chart chart, double h,
                        double alpha);

}  // namespace daplex
