#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "daplex/infogeo.hpp"
#include "daplex/instances.hpp"
#include "daplex/model_io.hpp"
#include "daplex/report_builder.hpp"
#include "daplex/selftest.hpp"
#include "daplex/version.hpp"

namespace {

using namespace daplex;

// Exit codes: 0 doubly autoparallel (incl. the trivial full space),
// 1 not DA, 2 no positive point, 3 input/validation error, 4 numerical
// failure, 64 usage error.
constexpr int kExitNotDa = 1;
constexpr int kExitNoPositivePoint = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitUsage = 64;

int verdict_exit_code(const std::string& verdict) {
  if (verdict == "DoublyAutoparallel" || verdict == "TrivialFullSpace") {
    return 0;
  }
  if (verdict == "NotDA") return kExitNotDa;
  if (verdict == "NoPositivePoint") return kExitNoPositivePoint;
  return kExitNumerical;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << text;
}

Vector parse_point_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    std::size_t used = 0;
    values.push_back(std::stod(item, &used));
  }
  Vector v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

SimplexPoint parse_simplex_point(const std::string& text) {
  Vector v = parse_point_list(text);
  if (!(v.array() > 0.0).all()) {
    throw ParseError("point entries must be strictly positive: " + text);
  }
  if (std::abs(v.sum() - 1.0) > 1e-9) {
    throw ParseError("point entries must sum to one: " + text);
  }
  return SimplexPoint(Vector(v / v.sum()));
}

struct AnalyzeOptions {
  std::string input;
  std::string output;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int samples = 200;
};

int run_analyze(const AnalyzeOptions& opt, bool canonical_only) {
  const ModelSpec spec = read_model_spec(opt.input);
  const Subspace w = spec.to_subspace(opt.tol);
  const Report report =
      build_report(w, spec.base_point, opt.tol, opt.seed, opt.samples);

  if (canonical_only) {
    std::ostringstream out;
    if (report.canonical) {
      Report slim;
      slim.version = report.version;
      slim.verdict = report.verdict;
      slim.canonical = report.canonical;
      slim.cross_check_agreed = report.cross_check_agreed;
      slim.tolerance = report.tolerance;
      slim.seed = report.seed;
      emit(opt.output, report_to_string(slim));
    } else {
      emit(opt.output, "{\n  \"verdict\": \"" + report.verdict + "\"\n}\n");
    }
  } else {
    emit(opt.output, report_to_string(report));
  }
  return verdict_exit_code(report.verdict);
}

struct GeodesicOptions {
  std::string input;
  std::string output;
  std::string from;
  std::string to;
  double alpha = 0.0;
  int steps = 256;
  double tol = kDefaultTol;
};

int run_geodesic(const GeodesicOptions& opt) {
  const SimplexPoint p = parse_simplex_point(opt.from);
  const SimplexPoint q = parse_simplex_point(opt.to);
  if (p.size() != q.size()) {
    throw ParseError("endpoints have different dimensions");
  }

  std::optional<Subspace> model;
  if (!opt.input.empty()) {
    model = read_model_spec(opt.input).to_subspace(opt.tol);
    for (const auto* endpoint : {&p, &q}) {
      const Containment membership =
          model->contains(endpoint->probs(), opt.tol);
      if (!membership.contained) {
        throw ParseError("endpoint is not on the model (residual " +
                         format_double(membership.residual) + ")");
      }
    }
  }

  const Subspace* reference = model ? &*model : nullptr;
  const GeodesicTrace trace =
      alpha_geodesic_bvp(p, q, opt.alpha, opt.steps, reference);

  std::ostringstream out;
  out << "t";
  for (Eigen::Index i = 0; i < p.size(); ++i) out << ",p_" << (i + 1);
  out << ",constraint_residual\n";
  for (std::size_t k = 0; k < trace.points.size(); ++k) {
    out << format_double(trace.times[k]);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      out << "," << format_double(trace.points[k][i]);
    }
    if (reference != nullptr) {
      out << ","
          << format_double(
                 reference->contains(trace.points[k].probs()).residual);
    } else {
      out << ",nan";
    }
    out << "\n";
  }
  out << "# max_constraint_residual = "
      << format_double(trace.max_constraint_residual) << "\n";
  emit(opt.output, out.str());
  if (!opt.output.empty()) {
    std::cout << "max_constraint_residual = "
              << format_double(trace.max_constraint_residual) << "\n";
  }
  return 0;
}

struct ProjectOptions {
  std::string input;
  std::string output;
  std::string point;
  double alpha = -1.0;
  int starts = 8;
  std::uint64_t seed = 0;
  double tol = kDefaultTol;
};

int run_project(const ProjectOptions& opt) {
  const ModelSpec spec = read_model_spec(opt.input);
  const Subspace w = spec.to_subspace(opt.tol);
  const SimplexPoint p = parse_simplex_point(opt.point);

  const ProjectionResult result =
      alpha_projection(p, w, opt.alpha, opt.starts, opt.seed);

  std::ostringstream out;
  out << "{\n  \"alpha\": " << format_double(opt.alpha) << ",\n";
  out << "  \"minimizer\": [";
  for (Eigen::Index i = 0; i < result.point.size(); ++i) {
    if (i) out << ", ";
    out << format_double(result.point[i]);
  }
  out << "],\n";
  out << "  \"divergence\": " << format_double(result.divergence) << ",\n";
  out << "  \"agreement_diameter\": " << format_double(result.spread)
      << ",\n";
  out << "  \"starts\": " << result.starts << "\n}\n";
  emit(opt.output, out.str());
  return 0;
}

struct GenerateOptions {
  std::string output;
  int q = -1;
  std::vector<int> sizes;
  std::vector<int> vertex_span;
  std::uint64_t seed = 0;
};

int run_generate(const GenerateOptions& opt) {
  Rng rng(derive_seed(opt.seed, 0x9e4eULL));
  ModelSpec spec;

  if (!opt.vertex_span.empty()) {
    if (opt.vertex_span.size() != 2) {
      throw ParseError("--vertex-span expects two integers: n d");
    }
    const int n = opt.vertex_span[0];
    const int d = opt.vertex_span[1];
    if (n < 1 || d < 0 || d >= n) {
      throw ParseError("--vertex-span: require n >= 1 and 0 <= d < n");
    }
    Vector v0 = Vector::Zero(n + 1);
    Vector tail = uniform_vector(rng, n + 1 - d, 0.1, 1.0);
    v0.tail(n + 1 - d) = tail / tail.sum();
    const Subspace w = generate_vertex_span(n, d, v0);

    spec.ambient_dim = n + 1;
    spec.basis_rows.push_back(v0);
    for (int k = 0; k < d; ++k) {
      Vector vertex = Vector::Zero(n + 1);
      vertex[k] = 1.0;
      spec.basis_rows.push_back(vertex);
    }
    Vector a = v0;
    for (int k = 0; k < d; ++k) a[k] = uniform(rng, 0.2, 1.2);
    spec.base_point = a;
    (void)w;
  } else {
    if (opt.q < 0 || opt.sizes.empty()) {
      throw ParseError("generate: provide --vertex-span or both --q and "
                       "--sizes");
    }
    for (int size : opt.sizes) {
      if (size < 2) throw ParseError("--sizes entries must be >= 2");
    }
    const CanonicalInstance inst =
        make_canonical_instance(rng, opt.q, opt.sizes);
    spec.ambient_dim = static_cast<int>(inst.subspace.ambient_dim());
    const Matrix& generators = inst.subspace.original_basis();
    for (Eigen::Index j = 0; j < generators.cols(); ++j) {
      spec.basis_rows.push_back(generators.col(j));
    }
    spec.base_point = inst.base_point;
  }

  emit(opt.output, model_spec_to_string(spec));
  return 0;
}

struct SelftestOptions {
  int cases = 1000;
  std::uint64_t seed = 20240817;
  double tol = 1e-9;
};

int run_selftest_cmd(const SelftestOptions& opt) {
  SelftestConfig cfg = SelftestConfig::with_cases(opt.cases);
  cfg.seed = opt.seed;
  cfg.tol = opt.tol;

  const auto results = run_selftest(cfg);
  bool all_passed = true;
  for (const auto& suite : results) {
    std::cout << suite.name << ": "
              << (suite.passed() ? "PASS" : "FAIL") << " ("
              << suite.cases - suite.failures << "/" << suite.cases
              << " checks";
    if (suite.worst > 0.0) {
      std::cout << ", worst residual " << format_double(suite.worst);
    }
    std::cout << ", " << format_double(suite.seconds) << " s)";
    if (!suite.detail.empty()) std::cout << " [" << suite.detail << "]";
    if (!suite.failing_seeds.empty()) {
      std::cout << " failing seeds:";
      for (auto s : suite.failing_seeds) std::cout << " " << s;
    }
    std::cout << "\n";
    all_passed = all_passed && suite.passed();
  }
  std::cout << (all_passed ? "selftest: all suites passed"
                           : "selftest: FAILURES present")
            << "\n";
  return all_passed ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doubly autoparallel submanifolds of the probability simplex: "
               "analysis, classification, and geometric verification"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  AnalyzeOptions analyze_opt;
  for (const char* name : {"analyze", "classify"}) {
    CLI::App* cmd = app.add_subcommand(
        name, name == std::string("analyze")
                  ? "decide double autoparallelism and write a full report"
                  : "like analyze, but print only the canonical form");
    cmd->add_option("--input", analyze_opt.input, "model spec file (JSON)")
        ->required();
    cmd->add_option("--output", analyze_opt.output,
                    "report file (default: stdout)");
    cmd->add_option("--tol", analyze_opt.tol, "membership tolerance");
    cmd->add_option("--seed", analyze_opt.seed, "seed for internal draws");
    cmd->add_option("--samples", analyze_opt.samples,
                    "log-affinity sample count");
  }

  GeodesicOptions geodesic_opt;
  {
    CLI::App* cmd = app.add_subcommand(
        "geodesic", "integrate the alpha-geodesic between two points");
    cmd->add_option("--input", geodesic_opt.input,
                    "optional model spec; endpoints must lie on it");
    cmd->add_option("--alpha", geodesic_opt.alpha, "connection parameter")
        ->required();
    cmd->add_option("--from", geodesic_opt.from,
                    "start point, comma-separated probabilities")
        ->required();
    cmd->add_option("--to", geodesic_opt.to, "end point")->required();
    cmd->add_option("--steps", geodesic_opt.steps, "integration steps");
    cmd->add_option("--tol", geodesic_opt.tol, "membership tolerance");
    cmd->add_option("--output", geodesic_opt.output,
                    "trace CSV file (default: stdout)");
  }

  ProjectOptions project_opt;
  {
    CLI::App* cmd = app.add_subcommand(
        "project", "alpha-projection of a point onto the model");
    cmd->add_option("--input", project_opt.input, "model spec file")
        ->required();
    cmd->add_option("--alpha", project_opt.alpha,
                    "divergence parameter (-1: KL(p||q), +1: KL(q||p))");
    cmd->add_option("--point", project_opt.point,
                    "point to project, comma-separated probabilities")
        ->required();
    cmd->add_option("--starts", project_opt.starts, "multi-start count");
    cmd->add_option("--seed", project_opt.seed, "seed for the starts");
    cmd->add_option("--tol", project_opt.tol, "membership tolerance");
    cmd->add_option("--output", project_opt.output,
                    "output file (default: stdout)");
  }

  GenerateOptions generate_opt;
  {
    CLI::App* cmd = app.add_subcommand(
        "generate", "generate a doubly autoparallel model spec");
    cmd->add_option("--q", generate_opt.q, "number of free coordinates");
    cmd->add_option("--sizes", generate_opt.sizes,
                    "block sizes, comma-separated")
        ->delimiter(',');
    cmd->add_option("--vertex-span", generate_opt.vertex_span,
                    "vertex-span family: n d")
        ->delimiter(',')
        ->expected(2);
    cmd->add_option("--seed", generate_opt.seed, "generator seed");
    cmd->add_option("--output", generate_opt.output,
                    "spec file (default: stdout)");
  }

  SelftestOptions selftest_opt;
  {
    CLI::App* cmd = app.add_subcommand(
        "selftest", "run the full invariant battery");
    cmd->add_option("--cases", selftest_opt.cases,
                    "cases per dimension for the randomized suites");
    cmd->add_option("--seed", selftest_opt.seed, "master seed");
    cmd->add_option("--tol", selftest_opt.tol, "membership tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand("analyze")) {
      return run_analyze(analyze_opt, /*canonical_only=*/false);
    }
    if (app.got_subcommand("classify")) {
      return run_analyze(analyze_opt, /*canonical_only=*/true);
    }
    if (app.got_subcommand("geodesic")) return run_geodesic(geodesic_opt);
    if (app.got_subcommand("project")) return run_project(project_opt);
    if (app.got_subcommand("generate")) return run_generate(generate_opt);
    if (app.got_subcommand("selftest")) return run_selftest_cmd(selftest_opt);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
