#include "daplex/infogeo.hpp"

#include <cmath>
#include <memory>

namespace daplex {

SimplexPoint::SimplexPoint(Vector probs) : p_(std::move(probs)) {
  if (p_.size() < 2) {
    throw DimensionError("SimplexPoint: need at least two outcomes");
  }
  if (!(p_.array() > 0.0).all()) {
    throw std::invalid_argument("SimplexPoint: probabilities must be "
                                "strictly positive");
  }
  if (std::abs(p_.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("SimplexPoint: probabilities must sum to one");
  }
}

Vector eta_coords(const SimplexPoint& p) {
  return p.probs().head(p.dim());
}

SimplexPoint eta_inverse(const Vector& eta) {
  const double tail = 1.0 - eta.sum();
  if (!(eta.array() > 0.0).all() || tail <= 0.0) {
    throw std::invalid_argument(
        "eta_inverse: coordinates outside the open simplex");
  }
  Vector p(eta.size() + 1);
  p.head(eta.size()) = eta;
  p[eta.size()] = tail;
  return SimplexPoint(std::move(p));
}

Vector theta_coords(const SimplexPoint& p) {
  const double ref = std::log(p[p.dim()]);
  Vector theta(p.dim());
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    theta[i] = std::log(p[i]) - ref;
  }
  return theta;
}

SimplexPoint theta_inverse(const Vector& theta) {
  // p_i = exp(theta_i - psi), psi = log(1 + sum exp theta); computed with a
  // max shift so large coordinates do not overflow.
  const Eigen::Index n = theta.size();
  Vector logits(n + 1);
  logits.head(n) = theta;
  logits[n] = 0.0;
  const double shift = logits.maxCoeff();
  Vector w = (logits.array() - shift).exp();
  return SimplexPoint(w / w.sum());
}

Vector chart_coords(const SimplexPoint& p, Chart chart) {
  return chart == Chart::Eta ? eta_coords(p) : theta_coords(p);
}

SimplexPoint chart_inverse(const Vector& x, Chart chart) {
  return chart == Chart::Eta ? eta_inverse(x) : theta_inverse(x);
}

namespace {

// Chart-specific derivative tables at p, indexed by outcome m = 0..n.
//   dlog(i, m)  = d/dx_i log p(m)
//   d2log(i, j, m) and d2p(i, j, m) = second derivatives of log p(m), p(m)
struct DerivativeTables {
  Eigen::Index n;
  Vector probs;
  Matrix dlog;  // n x (n+1)

  virtual ~DerivativeTables() = default;
  virtual double d2log(Eigen::Index i, Eigen::Index j,
                       Eigen::Index m) const = 0;
  virtual double d2p(Eigen::Index i, Eigen::Index j,
                     Eigen::Index m) const = 0;
};

struct EtaTables final : DerivativeTables {
  explicit EtaTables(const SimplexPoint& p) {
    n = p.dim();
    probs = p.probs();
    dlog = Matrix::Zero(n, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      dlog(i, i) = 1.0 / probs[i];
      dlog(i, n) = -1.0 / probs[n];
    }
  }
  double d2log(Eigen::Index i, Eigen::Index j, Eigen::Index m) const override {
    if (m < n) return (i == m && j == m) ? -1.0 / (probs[m] * probs[m]) : 0.0;
    return -1.0 / (probs[n] * probs[n]);
  }
  double d2p(Eigen::Index, Eigen::Index, Eigen::Index) const override {
    return 0.0;  // p(m) is affine in the eta coordinates
  }
};

struct ThetaTables final : DerivativeTables {
  explicit ThetaTables(const SimplexPoint& p) {
    n = p.dim();
    probs = p.probs();
    dlog = Matrix::Zero(n, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index m = 0; m <= n; ++m) {
        dlog(i, m) = ((i == m) ? 1.0 : 0.0) - probs[i];
      }
    }
  }
  double d2log(Eigen::Index i, Eigen::Index j, Eigen::Index) const override {
    return probs[i] * probs[j] - ((i == j) ? probs[i] : 0.0);
  }
  double d2p(Eigen::Index i, Eigen::Index j, Eigen::Index m) const override {
    return probs[m] * (dlog(i, m) * dlog(j, m) + d2log(i, j, m));
  }
};

std::unique_ptr<DerivativeTables> make_tables(const SimplexPoint& p,
                                              Chart chart) {
  if (chart == Chart::Eta) return std::make_unique<EtaTables>(p);
  return std::make_unique<ThetaTables>(p);
}

}  // namespace

Matrix fisher_metric(const SimplexPoint& p, Chart chart) {
  const auto tables = make_tables(p, chart);
  const Eigen::Index n = tables->n;
  Matrix g = Matrix::Zero(n, n);
  for (Eigen::Index m = 0; m <= n; ++m) {
    g += tables->probs[m] * tables->dlog.col(m) *
         tables->dlog.col(m).transpose();
  }
  return g;
}

std::vector<Matrix> christoffel(const SimplexPoint& p, double alpha,
                                Chart chart) {
  const auto tables = make_tables(p, chart);
  const Eigen::Index n = tables->n;
  const double we = 0.5 * (1.0 + alpha);  // exponential weight
  const double wm = 0.5 * (1.0 - alpha);  // mixture weight

  std::vector<Matrix> symbols(n, Matrix::Zero(n, n));
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        double gamma_e = 0.0;
        double gamma_m = 0.0;
        for (Eigen::Index m = 0; m <= n; ++m) {
          gamma_e +=
              tables->probs[m] * tables->d2log(i, j, m) * tables->dlog(k, m);
          gamma_m += tables->d2p(i, j, m) * tables->dlog(k, m);
        }
        const double value = we * gamma_e + wm * gamma_m;
        symbols[k](i, j) = value;
        symbols[k](j, i) = value;
      }
    }
  }
  return symbols;
}

SimplexPoint m_geodesic(const SimplexPoint& p, const SimplexPoint& q,
                        double t) {
  require_same_dim(p.probs(), q.probs(), "m_geodesic");
  return SimplexPoint((1.0 - t) * p.probs() + t * q.probs());
}

SimplexPoint e_geodesic(const SimplexPoint& p, const SimplexPoint& q,
                        double t) {
  require_same_dim(p.probs(), q.probs(), "e_geodesic");
  const Vector mix = (1.0 - t) * p.probs().array().log().matrix() +
                     t * q.probs().array().log().matrix();
  const Vector w = (mix.array() - mix.maxCoeff()).exp();
  return SimplexPoint(w / w.sum());
}

double alpha_divergence(const SimplexPoint& p, const SimplexPoint& q,
                        double alpha) {
  require_same_dim(p.probs(), q.probs(), "alpha_divergence");
  if (alpha == -1.0) {
    return (p.probs().array() * (p.probs().array() / q.probs().array()).log())
        .sum();
  }
  if (alpha == 1.0) {
    return (q.probs().array() * (q.probs().array() / p.probs().array()).log())
        .sum();
  }
  const double ep = 0.5 * (1.0 - alpha);
  const double eq = 0.5 * (1.0 + alpha);
  const double mass =
      (p.probs().array().pow(ep) * q.probs().array().pow(eq)).sum();
  return 4.0 / (1.0 - alpha * alpha) * (1.0 - mass);
}

double duality_residual(const SimplexPoint& p, Chart chart, double h,
                        double alpha) {
  if (h <= 0.0) throw std::invalid_argument("duality_residual: need h > 0");
  const Eigen::Index n = p.dim();
  const Vector x0 = chart_coords(p, chart);

  // LHS: chart derivative of the metric by central differences.
  std::vector<Matrix> dg(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector xp = x0, xm = x0;
    xp[k] += h;
    xm[k] -= h;
    dg[k] = (fisher_metric(chart_inverse(xp, chart), chart) -
             fisher_metric(chart_inverse(xm, chart), chart)) /
            (2.0 * h);
  }

  const auto gamma_pos = christoffel(p, alpha, chart);
  const auto gamma_neg = christoffel(p, -alpha, chart);

  double worst = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double rhs = gamma_pos[j](k, i) + gamma_neg[i](k, j);
        worst = std::max(worst, std::abs(dg[k](i, j) - rhs));
      }
    }
  }
  return worst;
}

}  // namespace daplex
