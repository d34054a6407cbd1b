#include <cmath>

#include "daplex/infogeo.hpp"

// Geodesic integration is done in the eta chart, where the mixture symbols
// vanish and the alpha-symbols contract against a velocity in closed form:
//
//   Gamma^(alpha)_{ij,l} v^i v^j = (1+alpha)/2 * (-v_l^2/p_l^2 + s^2/p_tail^2)
//
// with s the coordinate sum of v. Indices are raised with the inverse Fisher
// metric diag(p) - p p^T (Sherman-Morrison form of the multinomial
// covariance). test_geodesic pins this fast path against the defining-sum
// christoffel() route.

namespace daplex {

namespace {

struct EtaState {
  Vector x;  // eta coordinates
  Vector v;  // eta velocity
};

Vector full_probs(const Vector& eta) {
  Vector p(eta.size() + 1);
  p.head(eta.size()) = eta;
  p[eta.size()] = 1.0 - eta.sum();
  return p;
}

void check_interior(const Vector& eta, double t) {
  const Vector p = full_probs(eta);
  if (p.minCoeff() < kInteriorFloor) {
    throw GeodesicExitError(t, p);
  }
}

Vector acceleration(const Vector& eta, const Vector& v, double alpha) {
  const Eigen::Index n = eta.size();
  const double tail = 1.0 - eta.sum();
  const double s = v.sum();
  const double we = 0.5 * (1.0 + alpha);
  Vector w(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    w[l] = we * (-v[l] * v[l] / (eta[l] * eta[l]) + s * s / (tail * tail));
  }
  // accel = -(diag(p) - p p^T) w
  return -(eta.cwiseProduct(w) - eta * eta.dot(w));
}

EtaState rk4_step(const EtaState& state, double t, double dt, double alpha) {
  auto deriv = [alpha, t](const EtaState& s, double stage_time) {
    check_interior(s.x, stage_time);
    return EtaState{s.v, acceleration(s.x, s.v, alpha)};
  };
  const EtaState k1 = deriv(state, t);
  const EtaState k2 = deriv({state.x + 0.5 * dt * k1.x,
                             state.v + 0.5 * dt * k1.v}, t + 0.5 * dt);
  const EtaState k3 = deriv({state.x + 0.5 * dt * k2.x,
                             state.v + 0.5 * dt * k2.v}, t + 0.5 * dt);
  const EtaState k4 = deriv({state.x + dt * k3.x, state.v + dt * k3.v},
                            t + dt);
  return {state.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
          state.v + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

/// Endpoint-only integration used inside the shooting loop.
Vector integrate_endpoint(const Vector& x0, const Vector& v0, double alpha,
                          double t_end, int steps) {
  EtaState state{x0, v0};
  const double dt = t_end / steps;
  for (int k = 0; k < steps; ++k) {
    state = rk4_step(state, k * dt, dt, alpha);
  }
  check_interior(state.x, t_end);
  return state.x;
}

}  // namespace

GeodesicTrace alpha_geodesic_ivp(const SimplexPoint& p, const Vector& velocity,
                                 double alpha, double t_end, int steps,
                                 const Subspace* reference) {
  if (steps < 16) {
    throw std::invalid_argument("alpha_geodesic_ivp: need at least 16 steps");
  }
  if (velocity.size() != p.dim()) {
    throw DimensionError("alpha_geodesic_ivp: velocity must live in the "
                         "eta chart");
  }

  GeodesicTrace trace;
  trace.alpha = alpha;
  trace.times.reserve(steps + 1);
  trace.points.reserve(steps + 1);

  EtaState state{eta_coords(p), velocity};
  const double dt = t_end / steps;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    check_interior(state.x, t);
    trace.times.push_back(t);
    trace.points.emplace_back(full_probs(state.x));
    if (reference != nullptr) {
      trace.max_constraint_residual =
          std::max(trace.max_constraint_residual,
                   reference->contains(trace.points.back().probs()).residual);
    }
    if (k < steps) state = rk4_step(state, t, dt, alpha);
  }
  return trace;
}

GeodesicTrace alpha_geodesic_bvp(const SimplexPoint& p, const SimplexPoint& q,
                                 double alpha, int steps,
                                 const Subspace* reference) {
  require_same_dim(p.probs(), q.probs(), "alpha_geodesic_bvp");
  const Vector x0 = eta_coords(p);
  const Vector target = eta_coords(q);
  const Eigen::Index n = x0.size();

  constexpr double kMissTol = 1e-8;
  constexpr double kJacobianStep = 1e-6;
  constexpr int kMaxIterations = 50;

  auto miss = [&](const Vector& v) -> Vector {
    return integrate_endpoint(x0, v, alpha, 1.0, steps) - target;
  };

  Vector v = target - x0;
  Vector f;
  try {
    f = miss(v);
  } catch (const GeodesicExitError&) {
    // Straight-chart guess escapes; retreat toward the trivial solution.
    v *= 0.25;
    f = miss(v);
  }

  double best_norm = f.norm();
  for (int it = 0; it < kMaxIterations && best_norm > kMissTol; ++it) {
    Matrix jac(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Vector vj = v;
      vj[j] += kJacobianStep;
      jac.col(j) = (miss(vj) - f) / kJacobianStep;
    }
    const Vector delta = jac.fullPivLu().solve(-f);

    // Damped update: halve the step while the miss distance grows.
    double lambda = 1.0;
    bool improved = false;
    for (int halved = 0; halved < 30; ++halved) {
      const Vector trial = v + lambda * delta;
      try {
        const Vector ft = miss(trial);
        if (ft.norm() < best_norm) {
          v = trial;
          f = ft;
          best_norm = ft.norm();
          improved = true;
          break;
        }
      } catch (const GeodesicExitError&) {
        // treat an escaping trial as a failed step
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }

  if (best_norm > kMissTol) {
    throw SolverError("alpha_geodesic_bvp: shooting did not converge, final "
                      "miss distance " + std::to_string(best_norm));
  }
  return alpha_geodesic_ivp(p, v, alpha, 1.0, steps, reference);
}

double autoparallel_residual(const Subspace& w, const SimplexPoint& p,
                             double alpha) {
  const Containment membership = w.contains(p.probs());
  if (!membership.contained) {
    throw std::invalid_argument(
        "autoparallel_residual: point is not on the submanifold (residual " +
        std::to_string(membership.residual) + ")");
  }
  const Eigen::Index n = p.dim();

  // Tangent space of M = W n S^n in the eta chart: sum-zero vectors of W
  // with the last coordinate dropped. It is the same subspace at every
  // point, so constant fields are genuine tangent fields.
  const Matrix& basis = w.basis();
  const Eigen::Index d = w.dim();
  if (d <= 1) return 0.0;      // zero-dimensional submanifold
  if (d - 1 >= n) return 0.0;  // tangent fills the chart, no normal space

  Eigen::JacobiSVD<Matrix> svd(basis.colwise().sum(), Eigen::ComputeFullV);
  const Matrix tangent_ambient = basis * svd.matrixV().rightCols(d - 1);
  const Subspace tangent(tangent_ambient.topRows(n));
  const Matrix& frame = tangent.basis();  // n x (d-1), orthonormal

  const auto gamma = christoffel(p, alpha, Chart::Eta);
  const Matrix g = fisher_metric(p, Chart::Eta);
  const auto solver = g.ldlt();

  double worst = 0.0;
  for (Eigen::Index a = 0; a < frame.cols(); ++a) {
    for (Eigen::Index b = a; b < frame.cols(); ++b) {
      Vector lowered(n);
      for (Eigen::Index l = 0; l < n; ++l) {
        lowered[l] = frame.col(a).dot(gamma[l] * frame.col(b));
      }
      const Vector covariant = solver.solve(lowered);
      const Vector normal = covariant - frame * (frame.transpose() * covariant);
      worst = std::max(worst, normal.norm());
    }
  }
  return worst;
}

}  // namespace daplex
