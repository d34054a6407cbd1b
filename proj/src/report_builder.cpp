#include "daplex/report_builder.hpp"

#include "daplex/infogeo.hpp"
#include "daplex/rng.hpp"
#include "daplex/version.hpp"

namespace daplex {

Report build_report(const Subspace& w,
                    const std::optional<Vector>& base_point, double tol,
                    std::uint64_t seed, int log_affine_samples) {
  Report report;
  report.version = kVersion;
  report.tolerance = tol;
  report.seed = seed;
  report.log_affine_samples = log_affine_samples;

  const DaReport analysis = analyze(w, tol, seed, base_point);
  report.verdict = to_string(analysis.verdict);
  report.base_point = analysis.base_point;
  report.canonical = analysis.canonical;
  report.cross_check_agreed = analysis.cross_check_agreed;
  report.warnings = analysis.warnings;
  if (analysis.verdict == Verdict::DoublyAutoparallel ||
      analysis.verdict == Verdict::NotDA) {
    report.closure_residual = analysis.closure_residual_max;
  }
  report.base_independence_residual = analysis.base_independence_residual;

  if (!analysis.base_point) return report;

  report.log_affine_residual =
      log_affine_verify(w, *analysis.base_point, log_affine_samples,
                        derive_seed(seed, 1), tol);

  const SimplexChart chart = simplex_chart(w);
  const SimplexPoint center(chart.base());
  for (double alpha : kAlphaGrid) {
    report.autoparallel_residuals.push_back(
        {alpha, autoparallel_residual(w, center, alpha)});
  }
  return report;
}

}  // namespace daplex
