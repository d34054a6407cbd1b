#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "daplex/instances.hpp"

// The invariant battery: every numerical claim the library makes, run at
// configurable scale with per-case seeds so failures are reproducible. The
// CLI `selftest` command and the acceptance suite both drive these.

namespace daplex {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // worst residual observed where the suite has one
  std::string detail;
  std::vector<std::uint64_t> failing_seeds;
  double seconds = 0.0;

  bool passed() const { return failures == 0; }
};

struct SelftestConfig {
  std::uint64_t seed = 20240817;
  double tol = 1e-9;
  int equivalence_cases_per_dim = 1000;  // ambient dims 3..9
  int round_trip_cases = 500;
  int log_affine_samples = 200;
  int prop1_instances = 50;
  int duality_points = 20;
  int projection_starts = 8;

  /// Quick-mode scaling used by `selftest --cases`.
  static SelftestConfig with_cases(int cases);
};

SuiteResult run_criterion_equivalence(const SelftestConfig& cfg);
SuiteResult run_canonical_round_trip(const SelftestConfig& cfg);
SuiteResult run_running_example(const SelftestConfig& cfg);
SuiteResult run_vandermonde_counterexample(const SelftestConfig& cfg);
SuiteResult run_log_affinity(const SelftestConfig& cfg);
SuiteResult run_proposition1(const SelftestConfig& cfg);
SuiteResult run_integrator_calibration(const SelftestConfig& cfg);
SuiteResult run_duality_identity(const SelftestConfig& cfg);
SuiteResult run_worked_projection(const SelftestConfig& cfg);
SuiteResult run_report_determinism(const SelftestConfig& cfg);

std::vector<SuiteResult> run_selftest(const SelftestConfig& cfg);

/// The seeded instance used by round-trip and log-affinity suites; exposed
/// so both see exactly the same models.
CanonicalInstance round_trip_instance(const SelftestConfig& cfg, int index,
                                      std::uint64_t* case_seed = nullptr);

}  // namespace daplex
