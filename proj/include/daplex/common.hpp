#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace daplex {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Default relative tolerance for rank decisions and membership tests.
inline constexpr double kDefaultTol = 1e-9;

/// Entries with magnitude below this count as exactly zero for inversion.
inline constexpr double kZeroEntry = 1e-300;

/// Points whose smallest probability falls below this are treated as
/// having left the interior of the simplex.
inline constexpr double kInteriorFloor = 1e-12;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a vector with a zero entry is inverted componentwise.
struct NotInvertibleError : std::runtime_error {
  explicit NotInvertibleError(Eigen::Index index)
      : std::runtime_error("vector is not invertible: entry " +
                           std::to_string(index) + " is zero"),
        index(index) {}
  Eigen::Index index;
};

/// Iterative procedure (LP pivoting, Newton, line search) failed to converge.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A geodesic trajectory left the open simplex during integration.
struct GeodesicExitError : std::runtime_error {
  GeodesicExitError(double exit_time, Vector last_state)
      : std::runtime_error("geodesic left the simplex at t = " +
                           std::to_string(exit_time)),
        exit_time(exit_time),
        last_state(std::move(last_state)) {}
  double exit_time;
  Vector last_state;  // last interior point, probability coordinates
};

inline void require_same_dim(const Vector& x, const Vector& y,
                             const char* what) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
}

inline bool is_strictly_positive(const Vector& x) {
  return x.size() > 0 && (x.array() > 0.0).all();
}

}  // namespace daplex
