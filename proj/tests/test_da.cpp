#include <doctest.h>

#include <algorithm>
#include <limits>

#include "daplex/da.hpp"
#include "daplex/hadamard.hpp"
#include "daplex/instances.hpp"
#include "daplex/rng.hpp"

using namespace daplex;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Subspace vandermonde() {
  return Subspace::from_vectors({vec({1, 1, 1}), vec({1, 2, 4})});
}

Subspace running_example() {
  return generate_vertex_span(3, 2, vec({0, 0, 0.3, 0.7}));
}

}  // namespace

TEST_CASE("closure check on fixtures") {
  SUBCASE("vandermonde plane is not closed") {
    const auto result = closure_check(vandermonde(), ones(3));
    CHECK_FALSE(result.closed);
    CHECK(result.max_residual > 1e-3);
    CHECK(result.witness_i >= 0);
  }
  SUBCASE("idempotent pair is closed") {
    const Subspace w =
        Subspace::from_vectors({vec({1, 1, 1}), vec({1, 1, 0})});
    const auto result = closure_check(w, ones(3));
    CHECK(result.closed);
    CHECK(result.max_residual < 1e-12);
  }
  SUBCASE("running example with the worked base point") {
    const auto result =
        closure_check(running_example(), vec({1, 2, 0.3, 0.7}));
    CHECK(result.closed);
    CHECK(result.max_residual < 1e-12);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(closure_check(vandermonde(), vec({1, 1, 2})),
                    std::invalid_argument);  // not a member
    CHECK_THROWS_AS(closure_check(vandermonde(), vec({-1, -1, -1})),
                    std::invalid_argument);  // not positive
  }
}

TEST_CASE("block classification") {
  SUBCASE("running example decomposes as q=2, one block of two") {
    const auto form =
        classify_blocks(running_example(), vec({1, 2, 0.3, 0.7}));
    REQUIRE(form.has_value());
    CHECK(form->q == 2);
    CHECK(form->r == 1);
    CHECK(form->block_sizes == std::vector<int>{2});
    CHECK(form->permutation == std::vector<int>{0, 1, 2, 3});
    CHECK((form->block_vectors[0] - vec({0.3, 0.7}))
              .lpNorm<Eigen::Infinity>() < 1e-14);
  }
  SUBCASE("a single line with distinct entries is one big block") {
    const Vector a = vec({0.1, 0.2, 0.3, 0.4});
    const Subspace w = Subspace::from_vectors({a});
    const auto form = classify_blocks(w, a);
    REQUIRE(form.has_value());
    CHECK(form->q == 0);
    CHECK(form->r == 1);
    CHECK(form->block_sizes == std::vector<int>{4});
  }
  SUBCASE("vandermonde plane fails: three classes, dimension two") {
    CHECK_FALSE(classify_blocks(vandermonde(), ones(3)).has_value());
  }
  SUBCASE("full space is rejected") {
    const Subspace full = Subspace::from_vectors(
        {vec({1, 0}), vec({0, 1})});
    CHECK_THROWS_AS(classify_blocks(full, vec({1, 1})),
                    std::invalid_argument);
  }
}

TEST_CASE("analyze verdicts") {
  CHECK(analyze(running_example()).verdict == Verdict::DoublyAutoparallel);
  CHECK(analyze(vandermonde()).verdict == Verdict::NotDA);
  CHECK(analyze(Subspace::from_vectors({vec({1, -1, 0}), vec({0, 0, 1})}))
            .verdict == Verdict::NoPositivePoint);

  const Subspace full =
      Subspace::from_vectors({vec({1, 0}), vec({0, 1})});
  const DaReport trivial = analyze(full);
  CHECK(trivial.verdict == Verdict::TrivialFullSpace);
  CHECK_FALSE(trivial.warnings.empty());

  const DaReport da = analyze(running_example(), kDefaultTol, 5);
  CHECK(da.cross_check_agreed);
  REQUIRE(da.base_independence_residual.has_value());
  CHECK(*da.base_independence_residual < 1e-8);

  // determinism under a fixed seed
  const DaReport again = analyze(running_example(), kDefaultTol, 5);
  CHECK(*again.base_independence_residual == *da.base_independence_residual);
}

TEST_CASE("log affinity sampling") {
  const Subspace w = running_example();
  const Vector a = vec({1, 2, 0.3, 0.7});
  CHECK(log_affine_verify(w, a, 200, 99) < 1e-9);

  const Subspace bad = vandermonde();
  const auto a_bad = find_positive_point(bad);
  REQUIRE(a_bad.has_value());
  CHECK(log_affine_verify(bad, *a_bad, 200, 99) > 1e-3);
}

TEST_CASE("generate_canonical") {
  SUBCASE("running example shape") {
    const Subspace w = generate_canonical(2, {2}, {vec({0.3, 0.7})},
                                          {0, 1, 2, 3});
    CHECK(w.dim() == 3);
    CHECK(w.contains(vec({1, 0, 0, 0})).contained);
    CHECK(w.contains(vec({0, 1, 0, 0})).contained);
    CHECK(w.contains(vec({0, 0, 0.3, 0.7})).contained);
    CHECK_FALSE(w.contains(vec({0, 0, 1, 0})).contained);
  }
  SUBCASE("single block spans one line") {
    const Vector a = vec({0.1, 0.2, 0.3, 0.4});
    const Subspace w = generate_canonical(0, {4}, {a}, {0, 1, 2, 3});
    CHECK(w.dim() == 1);
    CHECK(w.contains(a).contained);
  }
  SUBCASE("round trip through classification") {
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
      const CanonicalInstance inst = make_canonical_instance(
          rng, 1, {2, 2});  // n+1 = 5, random blocks and permutation
      const auto form = classify_blocks(inst.subspace, inst.base_point);
      REQUIRE(form.has_value());
      CHECK(form->q == 1);
      CHECK(form->r == 2);
      CHECK(form->block_sizes == std::vector<int>({2, 2}));
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS(generate_canonical(2, {1}, {vec({1.0})}, {0, 1, 2}));
    CHECK_THROWS(generate_canonical(0, {}, {}, {}));
    CHECK_THROWS(generate_canonical(1, {2}, {vec({0.5, -0.5})}, {0, 1, 2}));
    CHECK_THROWS(generate_canonical(1, {2}, {vec({0.5, 0.5})}, {0, 1, 1}));
    CHECK_THROWS(generate_canonical(1, {2}, {vec({0.5, 0.5})}, {0, 1}));
  }
}

TEST_CASE("generate_vertex_span") {
  SUBCASE("small instance is DA with q=d") {
    const Subspace w = generate_vertex_span(2, 1, vec({0, 0.5, 0.5}));
    const DaReport report = analyze(w);
    CHECK(report.verdict == Verdict::DoublyAutoparallel);
    REQUIRE(report.canonical.has_value());
    CHECK(report.canonical->q == 1);
    CHECK(report.canonical->r == 1);
    CHECK(report.canonical->block_sizes == std::vector<int>{2});
  }
  SUBCASE("running example is DA with q=2, n_1 = n-1") {
    const DaReport report = analyze(running_example());
    REQUIRE(report.canonical.has_value());
    CHECK(report.canonical->q == 2);
    CHECK(report.canonical->block_sizes == std::vector<int>{2});
  }
  SUBCASE("pattern violations") {
    CHECK_THROWS(generate_vertex_span(2, 2, vec({0, 0, 1})));  // d = n
    CHECK_THROWS(generate_vertex_span(3, 2, vec({0, 0.1, 0.4, 0.5})));
    CHECK_THROWS(generate_vertex_span(3, 2, vec({0, 0, 0.4, 0.5})));
    CHECK_THROWS(generate_vertex_span(3, 2, vec({0, 0, -0.2, 1.2})));
  }
}

TEST_CASE("simplex chart") {
  SUBCASE("a line gives a zero-dimensional chart at its normalized point") {
    const SimplexChart chart = simplex_chart(Subspace::from_vectors({ones(3)}));
    CHECK(chart.dim() == 0);
    CHECK((chart.base() - vec({1, 1, 1}) / 3.0).lpNorm<Eigen::Infinity>() <
          1e-12);
  }
  SUBCASE("one-parameter family (s, s, 1-2s)") {
    const Subspace w =
        Subspace::from_vectors({vec({1, 1, 0}), vec({0, 0, 1})});
    const SimplexChart chart = simplex_chart(w);
    REQUIRE(chart.dim() == 1);

    const auto& box = chart.feasible_box();
    for (double f : {-0.9, -0.4, 0.0, 0.4, 0.9}) {
      Vector xi(1);
      xi << (f >= 0 ? f * box[0].second : -f * box[0].first);
      const Vector p = chart.map(xi);
      CHECK(p.sum() == doctest::Approx(1.0));
      CHECK(p.minCoeff() > 0.0);
      CHECK(p[0] == doctest::Approx(p[1]));          // the (s, s, .) shape
      CHECK(p[2] == doctest::Approx(1.0 - 2 * p[0]));
      CHECK(chart.in_domain(xi));
    }
    // jacobian is the constant direction matrix
    CHECK(chart.jacobian().cols() == 1);
    CHECK(chart.jacobian().col(0).sum() == doctest::Approx(0.0));
  }
  SUBCASE("running example chart matches the convex combination family") {
    const Subspace w = running_example();
    const SimplexChart chart = simplex_chart(w);
    REQUIRE(chart.dim() == 2);

    Rng rng(3);
    const auto& box = chart.feasible_box();
    for (int trial = 0; trial < 20; ++trial) {
      Vector xi(2);
      for (int j = 0; j < 2; ++j) {
        xi[j] = uniform(rng, box[j].first, box[j].second);
      }
      const Vector p = chart.map(xi);
      CHECK(p.minCoeff() > 0.0);
      CHECK(p.sum() == doctest::Approx(1.0));
      CHECK(w.contains(p).contained);
      // p = xi_1 v1 + xi_2 v2 + (1 - xi_1 - xi_2) v0 for some parameters:
      // equivalently p_3/0.3 == p_4/0.7.
      CHECK(p[2] / 0.3 == doctest::Approx(p[3] / 0.7));
    }
  }
  SUBCASE("no chart without a positive point") {
    CHECK_THROWS(simplex_chart(
        Subspace::from_vectors({vec({1, -1, 0}), vec({0, 0, 1})})));
  }
}

TEST_CASE("criterion equivalence on a random mix") {
  Rng rng(77);
  int da_seen = 0, non_da_seen = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n1 = uniform_int(rng, 3, 7);
    const bool canonical_case = trial % 2 == 0;
    const Subspace w =
        canonical_case
            ? random_canonical_instance(rng, n1).subspace
            : random_generic_instance(rng, n1, uniform_int(rng, 1, n1 - 1))
                  .subspace;
    const auto a = find_positive_point(w);
    REQUIRE(a.has_value());

    const bool closed = closure_check(w, *a).closed;
    const bool classified = classify_blocks(w, *a).has_value();
    CHECK(closed == classified);
    (closed ? da_seen : non_da_seen)++;
    if (canonical_case) CHECK(closed);
  }
  CHECK(da_seen >= 30);
  CHECK(non_da_seen >= 10);
}

TEST_CASE("vandermonde necessity: members of V have a tied pair") {
  Rng rng(88);
  for (int trial = 0; trial < 30; ++trial) {
    const int n1 = uniform_int(rng, 3, 8);
    const CanonicalInstance inst = random_canonical_instance(rng, n1);
    const Subspace v =
        scale_by_point(inst.subspace, inst.base_point, /*invert=*/true);

    const Vector x = v.basis() * normal_vector(rng, v.dim());
    const Vector scaled = x / x.lpNorm<Eigen::Infinity>();
    double closest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < scaled.size(); ++i) {
      for (Eigen::Index j = i + 1; j < scaled.size(); ++j) {
        closest = std::min(closest, std::abs(scaled[i] - scaled[j]));
      }
    }
    CHECK(closest < 1e-9);
  }
}

TEST_CASE("base-point independence across positive points") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int n1 = uniform_int(rng, 3, 8);
    const CanonicalInstance inst = random_canonical_instance(rng, n1);
    const auto lp_point = find_positive_point(inst.subspace);
    REQUIRE(lp_point.has_value());
    const double gap =
        affine_hull_distance(log_affine_hull(inst.subspace, inst.base_point),
                             log_affine_hull(inst.subspace, *lp_point));
    CHECK(gap < 1e-8);
  }
}
