#pragma once

#include <vector>

#include "daplex/da.hpp"
#include "daplex/rng.hpp"

// Seeded generators for canonical DA instances, shared by the CLI `generate`
// command and the selftest battery.

namespace daplex {

struct CanonicalInstance {
  int q = 0;
  std::vector<int> block_sizes;
  std::vector<Vector> block_vectors;
  std::vector<int> permutation;
  Vector base_point;  // strictly positive member of the subspace
  Subspace subspace;
};

/// Positive block vectors of the given sizes, each normalized to sum one.
std::vector<Vector> random_blocks(Rng& rng, const std::vector<int>& sizes);

/// Builds the instance for a given partition with seeded blocks and
/// permutation (identity when `permute` is false).
CanonicalInstance make_canonical_instance(Rng& rng, int q,
                                          const std::vector<int>& sizes,
                                          bool permute = true);

/// Random partition of an ambient dimension n1 into q free coordinates and
/// blocks of size >= 2, with dim W = q + r at least `min_dim`.
CanonicalInstance random_canonical_instance(Rng& rng, int n1,
                                            int min_dim = 1);

/// Gaussian-generated subspace that contains the returned strictly positive
/// vector; almost surely not doubly autoparallel for 2 <= dim <= n.
struct GenericInstance {
  Vector positive_member;
  Subspace subspace;
};
GenericInstance random_generic_instance(Rng& rng, int n1, int dim);

}  // namespace daplex
