#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "daplex/common.hpp"
#include "daplex/da.hpp"

// File formats of the CLI. Both are JSON documents; they are parsed with a
// standard JSON reader but written by hand so that every number carries 17
// significant digits and key order is fixed, making reports byte-stable and
// round-trip lossless.

namespace daplex {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model specification: a subspace given by generating rows, with an
/// optional positive base point (must lie in the span) and optional
/// coordinate labels.
struct ModelSpec {
  int ambient_dim = 0;
  std::vector<Vector> basis_rows;
  std::optional<Vector> base_point;
  std::vector<std::string> labels;

  Subspace to_subspace(double tol = kDefaultTol) const;
};

ModelSpec parse_model_spec(const std::string& text);
ModelSpec read_model_spec(const std::string& path);
std::string model_spec_to_string(const ModelSpec& spec);
void write_model_spec(const std::string& path, const ModelSpec& spec);

struct AlphaResidual {
  double alpha;
  double residual;
};

/// Analysis report: verdict, evidence residuals, canonical form if one
/// exists, and the knobs that produced it.
struct Report {
  std::string version;
  std::string verdict;
  std::optional<Vector> base_point;
  std::optional<CanonicalForm> canonical;
  std::optional<double> closure_residual;
  std::optional<double> base_independence_residual;
  std::optional<double> log_affine_residual;
  std::vector<AlphaResidual> autoparallel_residuals;
  bool cross_check_agreed = false;
  std::vector<std::string> warnings;
  double tolerance = kDefaultTol;
  std::uint64_t seed = 0;
  int log_affine_samples = 0;
};

Report parse_report(const std::string& text);
std::string report_to_string(const Report& report);
void write_report(const std::string& path, const Report& report);

/// Shortest text with 17 significant digits; round-trips any finite double.
std::string format_double(double value);

}  // namespace daplex
