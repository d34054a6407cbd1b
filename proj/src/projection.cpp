#include <cmath>
#include <vector>

#include "daplex/infogeo.hpp"
#include "daplex/rng.hpp"

namespace daplex {

namespace {

// Divergence q -> D^(alpha)(p || q) restricted to the affine chart
// q(xi) = base + U xi, with closed-form gradient and Hessian. The chart
// directions are sum-zero, so constant terms drop out of the gradient.
struct PulledBackDivergence {
  const Vector& p;
  const SimplexChart& chart;
  double alpha;

  double value(const Vector& q) const {
    if (alpha == -1.0) {
      return (p.array() * (p.array() / q.array()).log()).sum();
    }
    if (alpha == 1.0) {
      return (q.array() * (q.array() / p.array()).log()).sum();
    }
    const double ep = 0.5 * (1.0 - alpha);
    const double eq = 0.5 * (1.0 + alpha);
    return 4.0 / (1.0 - alpha * alpha) *
           (1.0 - (p.array().pow(ep) * q.array().pow(eq)).sum());
  }

  Vector gradient(const Vector& q) const {
    const Matrix& u = chart.jacobian();
    if (alpha == -1.0) {
      return -u.transpose() * (p.cwiseQuotient(q));
    }
    if (alpha == 1.0) {
      return u.transpose() *
             ((q.array() / p.array()).log() + 1.0).matrix();
    }
    const double ep = 0.5 * (1.0 - alpha);
    const double eq = 0.5 * (1.0 + alpha);
    const Vector inner =
        (p.array().pow(ep) * q.array().pow(eq - 1.0)).matrix();
    return -4.0 / (1.0 - alpha * alpha) * eq * (u.transpose() * inner);
  }

  Matrix hessian(const Vector& q) const {
    const Matrix& u = chart.jacobian();
    Vector diag;
    if (alpha == -1.0) {
      diag = p.cwiseQuotient(q.cwiseProduct(q));
    } else if (alpha == 1.0) {
      diag = q.cwiseInverse();
    } else {
      const double ep = 0.5 * (1.0 - alpha);
      const double eq = 0.5 * (1.0 + alpha);
      diag = 4.0 / (1.0 - alpha * alpha) * eq * (1.0 - eq) *
             (p.array().pow(ep) * q.array().pow(eq - 2.0)).matrix();
    }
    return u.transpose() * diag.asDiagonal() * u;
  }
};

constexpr double kGradientTol = 1e-10;
constexpr double kSpreadErrorTol = 1e-4;
constexpr int kMaxNewtonIterations = 200;

std::optional<Vector> newton_minimize(const PulledBackDivergence& objective,
                                      const SimplexChart& chart,
                                      Vector xi) {
  Vector q = chart.map(xi);
  if (q.minCoeff() <= 0.0) return std::nullopt;
  double f = objective.value(q);

  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const Vector grad = objective.gradient(q);
    if (grad.lpNorm<Eigen::Infinity>() <= kGradientTol) return xi;

    const Matrix hess = objective.hessian(q);
    Vector step;
    const Eigen::LLT<Matrix> llt(hess);
    if (llt.info() == Eigen::Success) {
      step = llt.solve(-grad);
    } else {
      step = -grad;
    }

    double lambda = 1.0;
    bool moved = false;
    for (int halved = 0; halved < 60; ++halved) {
      const Vector trial = xi + lambda * step;
      const Vector q_trial = chart.map(trial);
      if (q_trial.minCoeff() > 0.0) {
        const double f_trial = objective.value(q_trial);
        if (f_trial < f) {
          xi = trial;
          q = q_trial;
          f = f_trial;
          moved = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!moved) {
      // No descent left at double precision; accept if the gradient is
      // merely an order above the target, otherwise report failure.
      return grad.lpNorm<Eigen::Infinity>() <= 1e-9 ? std::optional<Vector>(xi)
                                                    : std::nullopt;
    }
  }
  const Vector grad = objective.gradient(chart.map(xi));
  return grad.lpNorm<Eigen::Infinity>() <= 1e-9 ? std::optional<Vector>(xi)
                                                : std::nullopt;
}

}  // namespace

ProjectionResult alpha_projection(const SimplexPoint& p, const Subspace& w,
                                  double alpha, int starts,
                                  std::uint64_t seed) {
  if (starts < 1) {
    throw std::invalid_argument("alpha_projection: need at least one start");
  }
  const SimplexChart chart = simplex_chart(w);
  if (p.size() != chart.ambient_dim()) {
    throw DimensionError("alpha_projection: dimension mismatch");
  }

  if (chart.dim() == 0) {
    const SimplexPoint only(chart.base());
    return {only, alpha_divergence(p, only, alpha), 0.0, starts};
  }

  const PulledBackDivergence objective{p.probs(), chart, alpha};

  Rng rng(seed);
  std::vector<Vector> minimizers;
  for (int s = 0; s < starts; ++s) {
    Vector xi = Vector::Zero(chart.dim());
    if (s > 0) {
      const auto& box = chart.feasible_box();
      for (Eigen::Index j = 0; j < chart.dim(); ++j) {
        xi[j] = uniform(rng, box[j].first, box[j].second);
      }
    }
    const auto result = newton_minimize(objective, chart, xi);
    if (!result) {
      throw SolverError("alpha_projection: Newton iteration failed to "
                        "converge from start " + std::to_string(s));
    }
    minimizers.push_back(chart.map(*result));
  }

  double spread = 0.0;
  for (std::size_t i = 0; i < minimizers.size(); ++i) {
    for (std::size_t j = i + 1; j < minimizers.size(); ++j) {
      spread = std::max(
          spread,
          (minimizers[i] - minimizers[j]).lpNorm<Eigen::Infinity>());
    }
  }
  if (spread > kSpreadErrorTol) {
    throw SolverError(
        "alpha_projection: multi-start minimizers disagree by " +
        std::to_string(spread) + ", contradicting projection uniqueness");
  }

  int best = 0;
  double best_value = objective.value(minimizers[0]);
  for (std::size_t i = 1; i < minimizers.size(); ++i) {
    const double value = objective.value(minimizers[i]);
    if (value < best_value) {
      best_value = value;
      best = static_cast<int>(i);
    }
  }
  const SimplexPoint point(Vector(minimizers[best] / minimizers[best].sum()));
  return {point, alpha_divergence(p, point, alpha), spread, starts};
}

}  // namespace daplex
