#include "daplex/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>

#include "daplex/infogeo.hpp"
#include "daplex/model_io.hpp"
#include "daplex/report_builder.hpp"

namespace daplex {

namespace {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct CaseRecorder {
  SuiteResult& result;
  std::uint64_t seed;
  void check(bool ok, double residual = 0.0) {
    ++result.cases;
    result.worst = std::max(result.worst, residual);
    if (!ok) {
      ++result.failures;
      if (result.failing_seeds.size() < 20) {
        result.failing_seeds.push_back(seed);
      }
    }
  }
};

Vector running_example_v0() {
  Vector v0(4);
  v0 << 0.0, 0.0, 0.3, 0.7;
  return v0;
}

Subspace vandermonde_subspace() {
  Matrix generators(3, 2);
  generators << 1.0, 1.0, 1.0, 2.0, 1.0, 4.0;
  return Subspace(generators);
}

ModelSpec running_example_spec() {
  ModelSpec spec;
  spec.ambient_dim = 4;
  Vector e1 = Vector::Zero(4), e2 = Vector::Zero(4);
  e1[0] = 1.0;
  e2[1] = 1.0;
  spec.basis_rows = {running_example_v0(), e1, e2};
  Vector a(4);
  a << 1.0, 2.0, 0.3, 0.7;
  spec.base_point = a;
  return spec;
}

}  // namespace

SelftestConfig SelftestConfig::with_cases(int cases) {
  SelftestConfig cfg;
  cfg.equivalence_cases_per_dim = std::max(1, cases);
  cfg.round_trip_cases = std::max(1, cases / 2);
  cfg.prop1_instances = std::max(1, cases / 20);
  cfg.duality_points = std::max(1, std::min(20, cases));
  return cfg;
}

SuiteResult run_criterion_equivalence(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"criterion_equivalence"};
  int da_count = 0;
  for (int n1 = 3; n1 <= 9; ++n1) {
    for (int i = 0; i < cfg.equivalence_cases_per_dim; ++i) {
      const std::uint64_t seed =
          derive_seed(cfg.seed, 0xE0000000ULL + n1 * 1000003ULL + i);
      CaseRecorder rec{result, seed};
      try {
        Rng rng(seed);
        const bool canonical_case = uniform01(rng) < 0.5;

        Subspace w = canonical_case
                         ? random_canonical_instance(rng, n1).subspace
                         : random_generic_instance(
                               rng, n1, uniform_int(rng, 1, n1 - 1)).subspace;

        const auto a = find_positive_point(w);
        if (!a) {
          rec.check(false);
          continue;
        }
        const ClosureResult closure = closure_check(w, *a, cfg.tol);
        const auto form = classify_blocks(w, *a, cfg.tol);
        bool ok = closure.closed == form.has_value();
        if (canonical_case) {
          ok = ok && closure.closed;
          rec.check(ok, closure.max_residual);
        } else {
          rec.check(ok);
        }
        if (closure.closed) ++da_count;
      } catch (const std::exception&) {
        rec.check(false);
      }
    }
  }
  result.detail = std::to_string(da_count) + " DA / " +
                  std::to_string(result.cases) + " cases";
  result.seconds = timer.seconds();
  return result;
}

CanonicalInstance round_trip_instance(const SelftestConfig& cfg, int index,
                                      std::uint64_t* case_seed) {
  const std::uint64_t seed = derive_seed(cfg.seed, 0xC0000000ULL + index);
  if (case_seed != nullptr) *case_seed = seed;
  Rng rng(seed);
  const int n1 = uniform_int(rng, 3, 10);
  return random_canonical_instance(rng, n1);
}

SuiteResult run_canonical_round_trip(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"canonical_round_trip"};
  for (int i = 0; i < cfg.round_trip_cases; ++i) {
    std::uint64_t seed = 0;
    const CanonicalInstance inst = round_trip_instance(cfg, i, &seed);
    CaseRecorder rec{result, seed};
    try {
      const DaReport report = analyze(inst.subspace, cfg.tol, seed);
      bool ok = report.verdict == Verdict::DoublyAutoparallel &&
                report.canonical.has_value();
      double gap = 0.0;
      if (ok) {
        const CanonicalForm& form = *report.canonical;
        std::vector<int> expected_sizes = inst.block_sizes;
        std::sort(expected_sizes.begin(), expected_sizes.end());
        ok = form.q == inst.q &&
             form.r == static_cast<int>(inst.block_sizes.size()) &&
             form.block_sizes == expected_sizes;

        gap = affine_hull_distance(
            log_affine_hull(inst.subspace, inst.base_point),
            log_affine_hull(inst.subspace, *report.base_point));
        ok = ok && gap < 1e-8;
      }
      rec.check(ok, gap);
    } catch (const std::exception&) {
      rec.check(false);
    }
  }
  result.seconds = timer.seconds();
  return result;
}

SuiteResult run_running_example(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"running_example"};
  CaseRecorder rec{result, cfg.seed};

  try {
  const Subspace w = generate_vertex_span(3, 2, running_example_v0());
  const DaReport report = analyze(w, cfg.tol, cfg.seed);
  rec.check(report.verdict == Verdict::DoublyAutoparallel);
  if (report.canonical) {
    const CanonicalForm& form = *report.canonical;
    rec.check(form.q == 2);
    rec.check(form.r == 1);
    rec.check(form.block_sizes == std::vector<int>{2});
    rec.check(form.permutation == std::vector<int>{0, 1, 2, 3});
  } else {
    rec.check(false);
  }

  // Same model with the worked base point a = (1, 2, 0.3, 0.7).
  Vector a(4);
  a << 1.0, 2.0, 0.3, 0.7;
  const auto form = classify_blocks(w, a, cfg.tol);
  rec.check(form.has_value());
  if (form) {
    rec.check(form->q == 2 && form->r == 1 && form->block_sizes[0] == 2);
    Vector a1(2);
    a1 << 0.3, 0.7;
    rec.check((form->block_vectors[0] - a1).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  const ClosureResult closure = closure_check(w, a, cfg.tol);
  rec.check(closure.closed, closure.max_residual);
  } catch (const std::exception&) {
    rec.check(false);
  }

  result.seconds = timer.seconds();
  return result;
}

SuiteResult run_vandermonde_counterexample(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"vandermonde_counterexample"};
  CaseRecorder rec{result, cfg.seed};

  try {
  const Subspace w = vandermonde_subspace();
  const auto a = find_positive_point(w);
  rec.check(a.has_value());
  if (!a) {
    result.seconds = timer.seconds();
    return result;
  }

  const ClosureResult closure = closure_check(w, *a, cfg.tol);
  rec.check(!closure.closed);
  rec.check(!classify_blocks(w, *a, cfg.tol).has_value());
  rec.check(analyze(w, cfg.tol, cfg.seed).verdict == Verdict::NotDA);

  const double violation = log_affine_verify(
      w, *a, cfg.log_affine_samples, derive_seed(cfg.seed, 0x7a11ULL));
  rec.check(violation >= 1e-3, violation);

  // Autoparallel failure at alpha = 0 at a generic point of M.
  const SimplexChart chart = simplex_chart(w);
  Vector xi(1);
  xi << 0.4 * chart.feasible_box()[0].second;
  const double residual_center =
      autoparallel_residual(w, SimplexPoint(chart.base()), 0.0);
  const double residual_offset =
      autoparallel_residual(w, SimplexPoint(chart.map(xi)), 0.0);
  rec.check(std::max(residual_center, residual_offset) > 1e-3);
  } catch (const std::exception&) {
    rec.check(false);
  }

  result.seconds = timer.seconds();
  return result;
}

SuiteResult run_log_affinity(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"log_affinity"};
  for (int i = 0; i < cfg.round_trip_cases; ++i) {
    std::uint64_t seed = 0;
    const CanonicalInstance inst = round_trip_instance(cfg, i, &seed);
    CaseRecorder rec{result, seed};
    try {
      const double residual =
          log_affine_verify(inst.subspace, inst.base_point,
                            cfg.log_affine_samples, derive_seed(seed, 1));
      rec.check(residual < 1e-9, residual);

      // Independence of the base point: the constructed point vs the LP one.
      const auto lp_point = find_positive_point(inst.subspace);
      if (!lp_point) {
        rec.check(false);
        continue;
      }
      const double gap = affine_hull_distance(
          log_affine_hull(inst.subspace, inst.base_point),
          log_affine_hull(inst.subspace, *lp_point));
      rec.check(gap < 1e-8, gap);
    } catch (const std::exception&) {
      rec.check(false);
    }
  }
  result.seconds = timer.seconds();
  return result;
}

SuiteResult run_proposition1(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"proposition1"};
  double worst_auto = 0.0, worst_geo = 0.0, worst_proj = 0.0;

  for (int i = 0; i < cfg.prop1_instances; ++i) {
    const std::uint64_t seed = derive_seed(cfg.seed, 0xA0000000ULL + i);
    CaseRecorder rec{result, seed};
    try {
    Rng rng(seed);
    const int n1 = uniform_int(rng, 3, 8);
    const CanonicalInstance inst =
        random_canonical_instance(rng, n1, /*min_dim=*/2);
    const Subspace& w = inst.subspace;
    const SimplexChart chart = simplex_chart(w);

    // Items 1-3: autoparallel for every alpha.
    const SimplexPoint center(chart.base());
    for (double alpha : kAlphaGrid) {
      const double residual = autoparallel_residual(w, center, alpha);
      worst_auto = std::max(worst_auto, residual);
      rec.check(residual < 1e-8, residual);
    }

    // Item 4: connecting alpha-geodesics stay on M.
    Vector xi1(chart.dim()), xi2(chart.dim());
    const auto& box = chart.feasible_box();
    for (Eigen::Index j = 0; j < chart.dim(); ++j) {
      xi1[j] = 0.8 * uniform(rng, box[j].first, box[j].second);
      xi2[j] = 0.8 * uniform(rng, box[j].first, box[j].second);
    }
    const SimplexPoint p(chart.map(xi1));
    const SimplexPoint q(chart.map(xi2));
    for (double alpha : kAlphaGrid) {
      try {
        const GeodesicTrace trace = alpha_geodesic_bvp(p, q, alpha, 256, &w);
        worst_geo = std::max(worst_geo, trace.max_constraint_residual);
        rec.check(trace.max_constraint_residual < 1e-6,
                  trace.max_constraint_residual);
      } catch (const std::exception&) {
        rec.check(false);
      }
    }

    // Uniqueness of projections: independent starts agree.
    Vector ambient = uniform_vector(rng, n1, 0.05, 1.0);
    const SimplexPoint outside(Vector(ambient / ambient.sum()));
    for (double alpha : {-1.0, 0.0, 1.0}) {
      try {
        const ProjectionResult proj = alpha_projection(
            outside, w, alpha, cfg.projection_starts, derive_seed(seed, 2));
        worst_proj = std::max(worst_proj, proj.spread);
        rec.check(proj.spread < 1e-6, proj.spread);
      } catch (const std::exception&) {
        rec.check(false);
      }
    }
    } catch (const std::exception&) {
      rec.check(false);
    }
  }

  result.detail = "worst autoparallel " + format_double(worst_auto) +
                  ", geodesic containment " + format_double(worst_geo) +
                  ", projection spread " + format_double(worst_proj);
  result.seconds = timer.seconds();
  return result;
}

namespace {

// Initial eta-velocity of the exponential geodesic from p to q, from the
// closed form p_i(t) ~ exp((1-t) log p_i + t log q_i).
Vector e_geodesic_velocity(const SimplexPoint& p, const SimplexPoint& q) {
  const Vector delta =
      (q.probs().array().log() - p.probs().array().log()).matrix();
  const double mean = p.probs().dot(delta);
  Vector v(p.dim());
  for (Eigen::Index i = 0; i < p.dim(); ++i) {
    v[i] = p[i] * (delta[i] - mean);
  }
  return v;
}

double ivp_error_vs_closed_form(const SimplexPoint& p, const SimplexPoint& q,
                                double alpha, int steps) {
  const Vector velocity = alpha == 1.0 ? e_geodesic_velocity(p, q)
                                       : Vector(eta_coords(q) - eta_coords(p));
  const GeodesicTrace trace = alpha_geodesic_ivp(p, velocity, alpha, 1.0,
                                                 steps);
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.points.size(); ++k) {
    const double t = trace.times[k];
    const SimplexPoint reference =
        alpha == 1.0 ? e_geodesic(p, q, t) : m_geodesic(p, q, t);
    worst = std::max(worst, (trace.points[k].probs() - reference.probs())
                                .lpNorm<Eigen::Infinity>());
  }
  return worst;
}

}  // namespace

SuiteResult run_integrator_calibration(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"integrator_calibration"};
  CaseRecorder rec{result, cfg.seed};

  std::vector<std::pair<Vector, Vector>> fixtures;
  {
    Vector p(3), q(3);
    p << 0.6, 0.25, 0.15;
    q << 0.2, 0.5, 0.3;
    fixtures.emplace_back(p, q);
  }
  {
    Vector p(4), q(4);
    p << 0.4, 0.3, 0.2, 0.1;
    q << 0.1, 0.2, 0.3, 0.4;
    fixtures.emplace_back(p, q);
  }

  for (const auto& [pv, qv] : fixtures) {
    try {
    const SimplexPoint p(pv), q(qv);

    // Closed-form agreement at 256 steps for both flat directions.
    const double err_e = ivp_error_vs_closed_form(p, q, 1.0, 256);
    const double err_m = ivp_error_vs_closed_form(p, q, -1.0, 256);
    rec.check(err_e < 1e-6, err_e);
    rec.check(err_m < 1e-10, err_m);

    // Fourth-order convergence, measured where truncation still dominates.
    const double coarse = ivp_error_vs_closed_form(p, q, 1.0, 64);
    const double fine = ivp_error_vs_closed_form(p, q, 1.0, 128);
    const double ratio = coarse / fine;
    rec.check(ratio > 8.0 && ratio < 32.0);
    if (result.detail.empty()) {
      result.detail = "step-doubling ratio " + format_double(ratio);
    }
    } catch (const std::exception&) {
      rec.check(false);
    }
  }

  result.seconds = timer.seconds();
  return result;
}

SuiteResult run_duality_identity(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"duality_identity"};
  const double h = 1e-4;

  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < cfg.duality_points; ++i) {
      const std::uint64_t seed =
          derive_seed(cfg.seed, 0xD0000000ULL + n * 1001ULL + i);
      CaseRecorder rec{result, seed};
      try {
      Rng rng(seed);
      Vector raw = uniform_vector(rng, n + 1, 0.05, 1.0);
      const SimplexPoint p(Vector(raw / raw.sum()));

      for (double alpha : {-1.0, 0.0, 1.0}) {
        const double coarse = duality_residual(p, Chart::Theta, h, alpha);
        const double fine = duality_residual(p, Chart::Theta, h / 2.0, alpha);
        rec.check(coarse < 1e-6, coarse);
        const double ratio = coarse / fine;
        rec.check(ratio > 3.5 && ratio < 4.5);
      }
      } catch (const std::exception&) {
        rec.check(false);
      }
    }
  }
  result.seconds = timer.seconds();
  return result;
}

SuiteResult run_worked_projection(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"worked_projection"};
  CaseRecorder rec{result, cfg.seed};

  try {
  // M = {(s, s, 1-2s)}, p = (0.7, 0.2, 0.1). Minimizing KL(p||q) over M
  // stations at s = 0.45.
  Matrix generators(3, 2);
  generators << 1.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  const Subspace w = Subspace(generators);
  Vector pv(3);
  pv << 0.7, 0.2, 0.1;
  const SimplexPoint p(pv);

  const ProjectionResult proj =
      alpha_projection(p, w, -1.0, cfg.projection_starts, cfg.seed);
  Vector expected(3);
  expected << 0.45, 0.45, 0.10;
  const double miss = (proj.point.probs() - expected).lpNorm<Eigen::Infinity>();
  rec.check(miss < 1e-6, miss);

  // Grid oracle at 1e-5 resolution over s in (0, 1/2).
  auto kl_to_curve = [&](double s) {
    Vector q(3);
    q << s, s, 1.0 - 2.0 * s;
    return alpha_divergence(p, SimplexPoint(q), -1.0);
  };
  double best_s = 0.0, best_value = std::numeric_limits<double>::infinity();
  for (double s = 1e-5; s < 0.5; s += 1e-5) {
    const double value = kl_to_curve(s);
    if (value < best_value) {
      best_value = value;
      best_s = s;
    }
  }
  rec.check(std::abs(best_s - 0.45) <= 2e-5);
  rec.check(std::abs(proj.point[0] - best_s) <= 2e-5);
  rec.check(proj.spread < 1e-6, proj.spread);
  } catch (const std::exception&) {
    rec.check(false);
  }

  result.seconds = timer.seconds();
  return result;
}

SuiteResult run_report_determinism(const SelftestConfig& cfg) {
  Timer timer;
  SuiteResult result{"report_determinism"};
  CaseRecorder rec{result, cfg.seed};

  try {
  const ModelSpec spec = running_example_spec();
  const std::string text = model_spec_to_string(spec);

  auto render = [&]() {
    const ModelSpec parsed = parse_model_spec(text);
    const Report report =
        build_report(parsed.to_subspace(cfg.tol), parsed.base_point, cfg.tol,
                     cfg.seed, cfg.log_affine_samples);
    return report_to_string(report);
  };
  const std::string first = render();
  const std::string second = render();
  rec.check(first == second);
  rec.check(parse_model_spec(model_spec_to_string(parse_model_spec(text)))
                .base_point.has_value());

  // Lossless round trip of the report document itself.
  const Report parsed_report = parse_report(first);
  rec.check(report_to_string(parsed_report) == first);
  } catch (const std::exception&) {
    rec.check(false);
  }

  result.seconds = timer.seconds();
  return result;
}

std::vector<SuiteResult> run_selftest(const SelftestConfig& cfg) {
  return {
      run_criterion_equivalence(cfg),
      run_canonical_round_trip(cfg),
      run_running_example(cfg),
      run_vandermonde_counterexample(cfg),
      run_log_affinity(cfg),
      run_proposition1(cfg),
      run_integrator_calibration(cfg),
      run_duality_identity(cfg),
      run_worked_projection(cfg),
      run_report_determinism(cfg),
  };
}

}  // namespace daplex
