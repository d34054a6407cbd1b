#include "daplex/instances.hpp"

#include <algorithm>
#include <numeric>

namespace daplex {

std::vector<Vector> random_blocks(Rng& rng, const std::vector<int>& sizes) {
  std::vector<Vector> blocks;
  blocks.reserve(sizes.size());
  for (int size : sizes) {
    Vector block = uniform_vector(rng, size, 0.1, 1.0);
    blocks.push_back(block / block.sum());
  }
  return blocks;
}

CanonicalInstance make_canonical_instance(Rng& rng, int q,
                                          const std::vector<int>& sizes,
                                          bool permute) {
  const int n1 = q + std::accumulate(sizes.begin(), sizes.end(), 0);

  std::vector<Vector> blocks = random_blocks(rng, sizes);
  std::vector<int> perm(n1);
  std::iota(perm.begin(), perm.end(), 0);
  if (permute) perm = random_permutation(rng, n1);

  // Base point: positive free coefficients plus a positive multiple of each
  // block vector, pushed through the permutation.
  Vector a(n1);
  for (int j = 0; j < q; ++j) {
    a[perm[j]] = uniform(rng, 0.2, 1.2);
  }
  int offset = q;
  for (std::size_t l = 0; l < sizes.size(); ++l) {
    const double t = uniform(rng, 0.5, 1.5);
    for (int m = 0; m < sizes[l]; ++m) {
      a[perm[offset + m]] = t * blocks[l][m];
    }
    offset += sizes[l];
  }

  Subspace w = generate_canonical(q, sizes, blocks, perm);
  return {q, sizes, std::move(blocks), std::move(perm), std::move(a),
          std::move(w)};
}

CanonicalInstance random_canonical_instance(Rng& rng, int n1, int min_dim) {
  if (n1 < 3) throw std::invalid_argument("need ambient dimension >= 3");
  while (true) {
    const int r = uniform_int(rng, 1, n1 / 2);
    std::vector<int> sizes(r, 2);
    int q = 0;
    for (int spare = n1 - 2 * r; spare > 0; --spare) {
      const int slot = uniform_int(rng, 0, r);
      if (slot == 0) {
        ++q;
      } else {
        ++sizes[slot - 1];
      }
    }
    if (q + r < min_dim || q + r >= n1) continue;
    std::sort(sizes.begin(), sizes.end());
    return make_canonical_instance(rng, q, sizes);
  }
}

GenericInstance random_generic_instance(Rng& rng, int n1, int dim) {
  if (dim < 1 || dim > n1 - 1) {
    throw std::invalid_argument("generic instance: need 1 <= dim <= n");
  }
  Matrix generators(n1, dim);
  Vector positive = uniform_vector(rng, n1, 0.2, 1.0);
  generators.col(0) = positive;
  for (int j = 1; j < dim; ++j) {
    generators.col(j) = normal_vector(rng, n1);
  }
  return {std::move(positive), Subspace(generators)};
}

}  // namespace daplex
