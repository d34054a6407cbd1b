#include <doctest.h>

#include <cmath>

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

SimplexPoint random_point(Rng& rng, int n1, double floor = 0.02) {
  Vector raw = uniform_vector(rng, n1, floor, 1.0);
  return SimplexPoint(Vector(raw / raw.sum()));
}

}  // namespace

TEST_CASE("simplex point validation") {
  CHECK_THROWS(SimplexPoint(vec({0.5, 0.5, 0.1})));   // sum != 1
  CHECK_THROWS(SimplexPoint(vec({1.2, -0.2})));       // negative entry
  CHECK_THROWS(SimplexPoint(vec({1.0})));             // too short
  CHECK_NOTHROW(SimplexPoint(vec({0.2, 0.3, 0.5})));
}

TEST_CASE("eta coordinates") {
  const SimplexPoint uniform_p(vec({1, 1, 1}) / 3.0);
  CHECK((eta_coords(uniform_p) - vec({1, 1}) / 3.0).lpNorm<Eigen::Infinity>() <
        1e-15);

  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SimplexPoint p = random_point(rng, 4);
    const SimplexPoint back = eta_inverse(eta_coords(p));
    CHECK((back.probs() - p.probs()).lpNorm<Eigen::Infinity>() == 0.0);
  }

  CHECK_THROWS(eta_inverse(vec({0.5, 0.6})));  // exceeds the simplex
  CHECK_THROWS(eta_inverse(vec({0.5, -0.1})));
}

TEST_CASE("theta coordinates") {
  const SimplexPoint uniform_p(vec({1, 1, 1}) / 3.0);
  CHECK(theta_coords(uniform_p).lpNorm<Eigen::Infinity>() < 1e-14);

  const SimplexPoint p(vec({0.5, 0.25, 0.25}));
  const Vector theta = theta_coords(p);
  CHECK(theta[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(theta[1] == doctest::Approx(0.0));

  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const SimplexPoint q = random_point(rng, 5);
    const Vector t = theta_coords(q);
    const Vector round = theta_coords(theta_inverse(t));
    CHECK((round - t).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("fisher metric") {
  SUBCASE("closed values on the 1-simplex") {
    CHECK(fisher_metric(SimplexPoint(vec({0.5, 0.5})), Chart::Eta)(0, 0) ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(fisher_metric(SimplexPoint(vec({0.25, 0.75})), Chart::Eta)(0, 0) ==
          doctest::Approx(16.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("eta chart closed form") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      const SimplexPoint p = random_point(rng, 4);
      const Matrix g = fisher_metric(p, Chart::Eta);
      const Eigen::Index n = p.dim();
      Matrix expected =
          Matrix::Constant(n, n, 1.0 / p[n]);
      for (Eigen::Index i = 0; i < n; ++i) expected(i, i) += 1.0 / p[i];
      CHECK((g - expected).lpNorm<Eigen::Infinity>() <
            1e-12 * expected.lpNorm<Eigen::Infinity>());
    }
  }
  SUBCASE("positive definite at random points in both charts") {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
      const int n1 = uniform_int(rng, 2, 6);
      const SimplexPoint p = random_point(rng, n1);
      for (Chart chart : {Chart::Eta, Chart::Theta}) {
        const Matrix g = fisher_metric(p, chart);
        CHECK((g - g.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> eigen(g);
        CHECK(eigen.eigenvalues().minCoeff() > 0.0);
      }
    }
  }
}

TEST_CASE("christoffel symbols") {
  Rng rng(9);
  SUBCASE("affine charts have vanishing symbols") {
    for (int trial = 0; trial < 10; ++trial) {
      const SimplexPoint p = random_point(rng, 4);
      for (const auto& slab : christoffel(p, -1.0, Chart::Eta)) {
        CHECK(slab.lpNorm<Eigen::Infinity>() < 1e-12);
      }
      for (const auto& slab : christoffel(p, 1.0, Chart::Theta)) {
        CHECK(slab.lpNorm<Eigen::Infinity>() < 1e-12);
      }
    }
  }
  SUBCASE("symmetric in the lower pair") {
    for (int trial = 0; trial < 10; ++trial) {
      const SimplexPoint p = random_point(rng, 5);
      const double alpha = uniform(rng, -1.0, 1.0);
      for (Chart chart : {Chart::Eta, Chart::Theta}) {
        for (const auto& slab : christoffel(p, alpha, chart)) {
          CHECK((slab - slab.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
        }
      }
    }
  }
  SUBCASE("exponential symbols in eta match the direct evaluation") {
    // Gamma^(e)_{ij,k} = -[i==j==k]/p_i^2 + 1/p_{n+1}^2 from the defining
    // sum, worked by hand for the eta chart.
    const SimplexPoint p(vec({0.2, 0.3, 0.5}));
    const auto gamma = christoffel(p, 1.0, Chart::Eta);
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const double expected = (i == j && j == k ? -1.0 / (p[i] * p[i]) : 0.0) +
                                  1.0 / (p[2] * p[2]);
          CHECK(gamma[k](i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
    // the 1-simplex symmetric point: the two contributions cancel
    const auto flat = christoffel(SimplexPoint(vec({0.5, 0.5})), 1.0,
                                  Chart::Eta);
    CHECK(std::abs(flat[0](0, 0)) < 1e-12);
  }
}

TEST_CASE("duality identity") {
  SUBCASE("uniform fixture") {
    const SimplexPoint uniform_p(vec({1, 1, 1}) / 3.0);
    CHECK(duality_residual(uniform_p, Chart::Eta, 1e-4, 1.0) < 1e-6);
    CHECK(duality_residual(uniform_p, Chart::Theta, 1e-4, 1.0) < 1e-6);
    CHECK(duality_residual(uniform_p, Chart::Theta, 1e-4, 0.0) < 1e-6);
  }
  SUBCASE("quadratic step scaling") {
    const SimplexPoint p(vec({0.5, 0.3, 0.2}));
    for (Chart chart : {Chart::Eta, Chart::Theta}) {
      const double coarse = duality_residual(p, chart, 1e-3, 0.5);
      const double fine = duality_residual(p, chart, 5e-4, 0.5);
      CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
    }
  }
}

TEST_CASE("closed-form geodesics") {
  const SimplexPoint p(vec({0.8, 0.2}));
  const SimplexPoint q(vec({0.2, 0.8}));

  SUBCASE("endpoints and midpoints") {
    CHECK((m_geodesic(p, q, 0.0).probs() - p.probs()).norm() == 0.0);
    CHECK((m_geodesic(p, q, 1.0).probs() - q.probs()).norm() == 0.0);
    CHECK((e_geodesic(p, q, 0.0).probs() - p.probs()).norm() < 1e-15);
    CHECK((e_geodesic(p, q, 1.0).probs() - q.probs()).norm() < 1e-15);

    CHECK((m_geodesic(p, q, 0.5).probs() - vec({0.5, 0.5})).norm() < 1e-15);
    CHECK((e_geodesic(p, q, 0.5).probs() - vec({0.5, 0.5})).norm() < 1e-14);
  }
  SUBCASE("m-interpolation sums to one") {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
      const double t = uniform01(rng);
      CHECK(m_geodesic(p, q, t).probs().sum() == doctest::Approx(1.0));
    }
  }
  SUBCASE("e-geodesics are straight in theta") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const SimplexPoint a = random_point(rng, 4);
      const SimplexPoint b = random_point(rng, 4);
      const double t = uniform01(rng);
      const Vector expected =
          (1.0 - t) * theta_coords(a) + t * theta_coords(b);
      const Vector actual = theta_coords(e_geodesic(a, b, t));
      CHECK((actual - expected).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }
}

TEST_CASE("alpha divergence") {
  Rng rng(12);
  SUBCASE("identity of indiscernibles") {
    for (double alpha : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
      const SimplexPoint p = random_point(rng, 4);
      CHECK(alpha_divergence(p, p, alpha) == doctest::Approx(0.0));
      const SimplexPoint q = random_point(rng, 4);
      CHECK(alpha_divergence(p, q, alpha) > 0.0);
    }
  }
  SUBCASE("worked KL value") {
    const double kl = alpha_divergence(SimplexPoint(vec({0.5, 0.5})),
                                       SimplexPoint(vec({0.25, 0.75})), -1.0);
    const double expected = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
    CHECK(kl == doctest::Approx(expected).epsilon(1e-12));
    CHECK(kl == doctest::Approx(0.14384).epsilon(1e-4));
  }
  SUBCASE("continuity at the KL limits") {
    const SimplexPoint p(vec({0.5, 0.5}));
    const SimplexPoint q(vec({0.25, 0.75}));
    CHECK(alpha_divergence(p, q, -1.0 + 1e-8) ==
          doctest::Approx(alpha_divergence(p, q, -1.0)).epsilon(1e-6));
    CHECK(alpha_divergence(p, q, 1.0 - 1e-8) ==
          doctest::Approx(alpha_divergence(p, q, 1.0)).epsilon(1e-6));
  }
  SUBCASE("duality of the arguments") {
    for (int trial = 0; trial < 20; ++trial) {
      const SimplexPoint p = random_point(rng, 5);
      const SimplexPoint q = random_point(rng, 5);
      const double alpha = uniform(rng, -0.95, 0.95);
      CHECK(alpha_divergence(p, q, alpha) ==
            doctest::Approx(alpha_divergence(q, p, -alpha)).epsilon(1e-12));
    }
  }
  SUBCASE("second order expansion matches the Fisher quadratic form") {
    for (int trial = 0; trial < 20; ++trial) {
      const SimplexPoint p = random_point(rng, 4, 0.1);
      Vector offset = normal_vector(rng, p.dim());
      offset *= 1e-3 / offset.norm();
      const SimplexPoint q = eta_inverse(Vector(eta_coords(p) + offset));

      const Matrix g = fisher_metric(p, Chart::Eta);
      const double quadratic = 0.5 * offset.dot(g * offset);
      for (double alpha : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const double divergence = alpha_divergence(p, q, alpha);
        CHECK(std::abs(divergence - quadratic) < 0.05 * quadratic);
      }
    }
  }
}

TEST_CASE("denormalization is log-affine along the ones direction") {
  // For a DA model, log(tau * p) stays in log a + V because e lies in V.
  const Subspace w = generate_vertex_span(3, 2, vec({0, 0, 0.3, 0.7}));
  const Vector a = vec({1, 2, 0.3, 0.7});
  const AffineSubspace hull = log_affine_hull(w, a);

  const SimplexChart chart = simplex_chart(w);
  Rng rng(13);
  const auto& box = chart.feasible_box();
  for (int trial = 0; trial < 10; ++trial) {
    Vector xi(chart.dim());
    for (Eigen::Index j = 0; j < chart.dim(); ++j) {
      xi[j] = 0.7 * uniform(rng, box[j].first, box[j].second);
    }
    const Vector p = chart.map(xi);
    for (double tau : {0.5, 2.0}) {
      const Vector log_scaled = (tau * p).array().log().matrix();
      CHECK(hull.contains(log_scaled, 1e-9).contained);
    }
  }
}
