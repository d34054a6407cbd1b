#include <doctest.h>

#include <cmath>
#include <limits>

#include "daplex/infogeo.hpp"
#include "daplex/rng.hpp"

using namespace daplex;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Subspace diagonal_family() {
  // M = {(s, s, 1-2s) : s in (0, 1/2)}
  return Subspace::from_vectors({vec({1, 1, 0}), vec({0, 0, 1})});
}

// Exhaustive search over the one-dimensional family at the given resolution.
double grid_minimizer(const SimplexPoint& p, double alpha, double step) {
  double best_s = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double s = step; s < 0.5; s += step) {
    const SimplexPoint q(vec({s, s, 1.0 - 2.0 * s}));
    const double value = alpha_divergence(p, q, alpha);
    if (value < best) {
      best = value;
      best_s = s;
    }
  }
  return best_s;
}

}  // namespace

TEST_CASE("worked projection onto the diagonal family") {
  const SimplexPoint p(vec({0.7, 0.2, 0.1}));
  const Subspace w = diagonal_family();

  // Stationarity of KL(p || q(s)): -0.9/s + 0.2/(1-2s) = 0 at s = 0.45.
  const ProjectionResult proj = alpha_projection(p, w, -1.0);
  CHECK((proj.point.probs() - vec({0.45, 0.45, 0.10}))
            .lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK(proj.spread < 1e-6);
  CHECK(proj.divergence ==
        doctest::Approx(alpha_divergence(p, proj.point, -1.0)));

  CHECK(std::abs(grid_minimizer(p, -1.0, 1e-5) - 0.45) <= 2e-5);
}

TEST_CASE("projections agree with grid search for the other directions") {
  const SimplexPoint p(vec({0.7, 0.2, 0.1}));
  const Subspace w = diagonal_family();

  for (double alpha : {1.0, 0.0, -0.5}) {
    const ProjectionResult proj = alpha_projection(p, w, alpha);
    const double s_grid = grid_minimizer(p, alpha, 1e-5);
    CHECK(std::abs(proj.point[0] - s_grid) <= 2e-5);
    CHECK(proj.spread < 1e-6);
  }
}

TEST_CASE("points already on the model project to themselves") {
  const Subspace w = diagonal_family();
  const SimplexPoint on_model(vec({0.3, 0.3, 0.4}));
  for (double alpha : {-1.0, 0.0, 1.0}) {
    const ProjectionResult proj = alpha_projection(on_model, w, alpha);
    CHECK((proj.point.probs() - on_model.probs()).lpNorm<Eigen::Infinity>() <
          1e-7);
    CHECK(proj.divergence < 1e-12);
  }
}

TEST_CASE("projection onto a single-point model returns that point") {
  const Subspace line = Subspace::from_vectors({vec({1, 1, 1})});
  const SimplexPoint p(vec({0.6, 0.3, 0.1}));
  const ProjectionResult proj = alpha_projection(p, line, 0.0);
  CHECK((proj.point.probs() - vec({1, 1, 1}) / 3.0).lpNorm<Eigen::Infinity>() <
        1e-12);
  CHECK(proj.spread == 0.0);
}

TEST_CASE("multi-start projections are reproducible under a seed") {
  Rng rng(31);
  Vector raw = uniform_vector(rng, 4, 0.1, 1.0);
  const SimplexPoint p(Vector(raw / raw.sum()));
  const Subspace w = Subspace::from_vectors(
      {vec({1, 0, 0, 0}), vec({0, 0.5, 0.5, 0}), vec({0, 0, 0, 1})});

  const ProjectionResult first = alpha_projection(p, w, 0.5, 8, 1234);
  const ProjectionResult second = alpha_projection(p, w, 0.5, 8, 1234);
  CHECK((first.point.probs() - second.point.probs()).norm() == 0.0);
  CHECK(first.divergence == second.divergence);
  CHECK(first.spread == second.spread);
  CHECK(first.starts == 8);
}
