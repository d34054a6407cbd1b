#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "daplex/model_io.hpp"

namespace daplex {

/// Alpha values at which reports measure autoparallelism.
inline constexpr std::array<double, 5> kAlphaGrid{-1.0, -0.5, 0.0, 0.5, 1.0};

/// Runs the full verification pass over W and assembles the report: the
/// DA decision with its closure and classification evidence, the log-affine
/// sampling residual, and autoparallel residuals over the alpha grid at the
/// chart base point.
Report build_report(const Subspace& w,
                    const std::optional<Vector>& base_point, double tol,
                    std::uint64_t seed, int log_affine_samples);

}  // namespace daplex
