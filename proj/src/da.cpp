#include "daplex/da.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "daplex/hadamard.hpp"
#include "daplex/rng.hpp"

namespace daplex {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::DoublyAutoparallel: return "DoublyAutoparallel";
    case Verdict::NotDA: return "NotDA";
    case Verdict::NoPositivePoint: return "NoPositivePoint";
    case Verdict::TrivialFullSpace: return "TrivialFullSpace";
  }
  return "?";
}

namespace {

void require_base_point(const Subspace& w, const Vector& a, double tol) {
  if (a.size() != w.ambient_dim()) {
    throw DimensionError("base point dimension does not match the subspace");
  }
  if (!is_strictly_positive(a)) {
    throw std::invalid_argument("base point must be strictly positive");
  }
  const Containment membership = w.contains(a, tol);
  if (!membership.contained) {
    throw std::invalid_argument(
        "base point is not a member of the subspace (residual " +
        std::to_string(membership.residual) + ")");
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

ClosureResult closure_check(const Subspace& w, const Vector& a, double tol) {
  require_base_point(w, a, tol);
  const Matrix& basis = w.basis();
  const Vector a_inv = hadamard_inverse(a);

  ClosureResult result{true, 0.0, -1, -1};
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    const Vector scaled = basis.col(i).cwiseProduct(a_inv);
    for (Eigen::Index j = i; j < basis.cols(); ++j) {
      const Vector product = scaled.cwiseProduct(basis.col(j));
      const Containment membership = w.contains(product, tol);
      if (membership.residual > result.max_residual) {
        result.max_residual = membership.residual;
        result.witness_i = static_cast<int>(i);
        result.witness_j = static_cast<int>(j);
      }
      if (!membership.contained) result.closed = false;
    }
  }
  return result;
}

std::optional<CanonicalForm> classify_blocks(const Subspace& w,
                                             const Vector& a, double tol) {
  require_base_point(w, a, tol);
  const Eigen::Index n1 = w.ambient_dim();
  if (w.dim() >= n1) {
    throw std::invalid_argument(
        "classify_blocks: classification assumes dim W < n+1");
  }

  const Subspace v = scale_by_point(w, a, /*invert=*/true);
  const Matrix& rows = v.basis();  // (n+1) x d, rows compared below

  // Coordinates i, j are tied when every basis vector of V agrees on them.
  // Rows are compared after normalizing the whole set by the largest row
  // norm so the test is scale-free.
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n1; ++i) {
    scale = std::max(scale, rows.row(i).norm());
  }
  if (scale <= 0.0) scale = 1.0;

  UnionFind classes(static_cast<int>(n1));
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = i + 1; j < n1; ++j) {
      const double gap =
          (rows.row(i) - rows.row(j)).cwiseAbs().maxCoeff() / scale;
      if (gap <= tol) classes.unite(static_cast<int>(i), static_cast<int>(j));
    }
  }

  std::vector<std::vector<int>> groups(n1);
  for (int i = 0; i < n1; ++i) groups[classes.find(i)].push_back(i);
  std::vector<std::vector<int>> blocks;
  std::vector<int> free_coords;
  int class_count = 0;
  for (auto& g : groups) {
    if (g.empty()) continue;
    ++class_count;
    if (g.size() == 1) {
      free_coords.push_back(g.front());
    } else {
      blocks.push_back(std::move(g));
    }
  }

  if (class_count != static_cast<int>(w.dim())) return std::nullopt;

  // Deterministic representative: blocks ascending by size, ties by their
  // smallest original coordinate; within blocks and the free part the
  // original coordinate order is kept.
  std::sort(free_coords.begin(), free_coords.end());
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) {
    return std::make_pair(x.size(), x.front()) <
           std::make_pair(y.size(), y.front());
  });

  CanonicalForm form;
  form.q = static_cast<int>(free_coords.size());
  form.r = static_cast<int>(blocks.size());
  form.permutation = free_coords;
  for (const auto& b : blocks) {
    form.block_sizes.push_back(static_cast<int>(b.size()));
    Vector sub(b.size());
    for (std::size_t m = 0; m < b.size(); ++m) sub[m] = a[b[m]];
    form.block_vectors.push_back(std::move(sub));
    form.permutation.insert(form.permutation.end(), b.begin(), b.end());
  }
  return form;
}

double log_affine_verify(const Subspace& w, const Vector& a, int samples,
                         std::uint64_t seed, double tol) {
  require_base_point(w, a, tol);
  if (samples < 1) {
    throw std::invalid_argument("log_affine_verify: need samples >= 1");
  }
  const AffineSubspace log_hull = log_affine_hull(w, a);

  Rng rng(seed);
  const double base_scale = a.minCoeff();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    double scale = base_scale;
    Vector shifted;
    bool found = false;
    for (int attempt = 0; attempt < 64; ++attempt) {
      const Vector coeff = normal_vector(rng, w.dim()) * scale;
      shifted = a + w.basis() * coeff;
      if (shifted.minCoeff() > 0.0) {
        found = true;
        break;
      }
      scale *= 0.5;
    }
    if (!found) {
      throw SolverError("log_affine_verify: rejection sampling failed to "
                        "produce a positive point");
    }
    const Vector log_point = shifted.array().log().matrix();
    worst = std::max(worst, log_hull.contains(log_point, tol).residual);
  }
  return worst;
}

double affine_hull_distance(const AffineSubspace& lhs,
                            const AffineSubspace& rhs) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < rhs.direction.dim(); ++j) {
    worst = std::max(
        worst, lhs.direction.contains(rhs.direction.basis().col(j)).residual);
  }
  for (Eigen::Index j = 0; j < lhs.direction.dim(); ++j) {
    worst = std::max(
        worst, rhs.direction.contains(lhs.direction.basis().col(j)).residual);
  }
  worst = std::max(worst, lhs.contains(rhs.base).residual);
  worst = std::max(worst, rhs.contains(lhs.base).residual);
  return worst;
}

AffineSubspace log_affine_hull(const Subspace& w, const Vector& a) {
  return {a.array().log().matrix(), scale_by_point(w, a, /*invert=*/true)};
}

DaReport analyze(const Subspace& w, double tol, std::uint64_t seed,
                 const std::optional<Vector>& base_point) {
  DaReport report;

  std::optional<Vector> a = base_point;
  if (!a) {
    a = find_positive_point(w);
    if (!a) {
      report.verdict = Verdict::NoPositivePoint;
      report.cross_check_agreed = true;
      return report;
    }
  }
  report.base_point = a;
  if (conditioning_ratio(*a) < kConditioningWarnRatio) {
    report.warnings.push_back(
        "base point is ill-conditioned: min/max entry ratio below 1e-8");
  }

  if (w.dim() == w.ambient_dim()) {
    report.verdict = Verdict::TrivialFullSpace;
    report.cross_check_agreed = true;
    report.warnings.push_back(
        "W is the full ambient space; M is the whole simplex and the "
        "canonical decomposition does not apply");
    return report;
  }

  const ClosureResult closure = closure_check(w, *a, tol);
  report.closure_residual_max = closure.max_residual;
  std::optional<CanonicalForm> canonical = classify_blocks(w, *a, tol);

  report.cross_check_agreed = (closure.closed == canonical.has_value());
  if (!report.cross_check_agreed) {
    throw CriteriaDisagreement(closure.max_residual, canonical.has_value());
  }

  if (!closure.closed) {
    report.verdict = Verdict::NotDA;
    return report;
  }

  report.verdict = Verdict::DoublyAutoparallel;
  report.canonical = std::move(canonical);

  // The log-affine hull must not depend on which positive point of W is
  // used. Move to a' = a + eps * w along a random basis direction and
  // compare the two hulls.
  Rng rng(derive_seed(seed, 0x5eedULL));
  const Eigen::Index pick =
      static_cast<Eigen::Index>(uniform_int(rng, 0, int(w.dim()) - 1));
  const Vector dir = w.basis().col(pick);
  const double eps = 0.1 * a->minCoeff() / dir.cwiseAbs().maxCoeff();
  const Vector a_prime = *a + eps * dir;

  report.base_independence_residual = affine_hull_distance(
      log_affine_hull(w, *a), log_affine_hull(w, a_prime));

  return report;
}

Subspace generate_canonical(int q, const std::vector<int>& block_sizes,
                            const std::vector<Vector>& block_vectors,
                            const std::vector<int>& permutation) {
  if (q < 0) throw std::invalid_argument("generate_canonical: q must be >= 0");
  if (block_sizes.empty()) {
    throw std::invalid_argument("generate_canonical: need at least one block");
  }
  if (block_sizes.size() != block_vectors.size()) {
    throw std::invalid_argument(
        "generate_canonical: block size and vector counts differ");
  }
  int total = q;
  for (std::size_t l = 0; l < block_sizes.size(); ++l) {
    if (block_sizes[l] < 2) {
      throw std::invalid_argument("generate_canonical: block sizes must be "
                                  ">= 2");
    }
    if (block_vectors[l].size() != block_sizes[l]) {
      throw std::invalid_argument(
          "generate_canonical: block vector length does not match its size");
    }
    if (!is_strictly_positive(block_vectors[l])) {
      throw std::invalid_argument(
          "generate_canonical: block vectors must be strictly positive");
    }
    total += block_sizes[l];
  }
  const int n1 = total;
  std::vector<int> seen(n1, 0);
  if (static_cast<int>(permutation.size()) != n1) {
    throw std::invalid_argument(
        "generate_canonical: permutation length must be q + sum of sizes");
  }
  for (int v : permutation) {
    if (v < 0 || v >= n1 || seen[v]++) {
      throw std::invalid_argument(
          "generate_canonical: permutation is not a bijection");
    }
  }

  Matrix generators = Matrix::Zero(n1, q + int(block_sizes.size()));
  for (int j = 0; j < q; ++j) {
    generators(permutation[j], j) = 1.0;
  }
  int offset = q;
  for (std::size_t l = 0; l < block_sizes.size(); ++l) {
    for (int m = 0; m < block_sizes[l]; ++m) {
      generators(permutation[offset + m], q + int(l)) = block_vectors[l][m];
    }
    offset += block_sizes[l];
  }
  return Subspace(generators);
}

Subspace generate_vertex_span(int n, int d, const Vector& v0) {
  if (n < 1 || d < 0 || d >= n) {
    throw std::invalid_argument(
        "generate_vertex_span: require n >= 1 and 0 <= d < n");
  }
  if (v0.size() != n + 1) {
    throw DimensionError("generate_vertex_span: v0 must have length n+1");
  }
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    if (i < d) {
      if (v0[i] != 0.0) {
        throw std::invalid_argument(
            "generate_vertex_span: v0 must vanish on the first d "
            "coordinates");
      }
    } else {
      if (v0[i] <= 0.0) {
        throw std::invalid_argument(
            "generate_vertex_span: v0 must be positive past the first d "
            "coordinates");
      }
      sum += v0[i];
    }
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "generate_vertex_span: positive entries of v0 must sum to one");
  }

  Matrix generators = Matrix::Zero(n + 1, d + 1);
  generators.col(0) = v0;
  for (int k = 0; k < d; ++k) generators(k, k + 1) = 1.0;
  return Subspace(generators);
}

SimplexChart::SimplexChart(Vector base, Matrix directions)
    : base_(std::move(base)), directions_(std::move(directions)) {
  const Eigen::Index k = directions_.cols();
  box_.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    // Range of t with base + t * dir_j strictly positive, shrunk by the
    // number of axes so that box corners stay positive by convexity.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < base_.size(); ++i) {
      const double dir = directions_(i, j);
      if (dir > 0.0) {
        lo = std::max(lo, -base_[i] / dir);
      } else if (dir < 0.0) {
        hi = std::min(hi, -base_[i] / dir);
      }
    }
    const double shrink = 0.95 / static_cast<double>(std::max<Eigen::Index>(k, 1));
    box_[j] = {lo * shrink, hi * shrink};
  }
}

Vector SimplexChart::map(const Vector& xi) const {
  if (xi.size() != dim()) {
    throw DimensionError("SimplexChart::map: parameter dimension mismatch");
  }
  return base_ + directions_ * xi;
}

bool SimplexChart::in_domain(const Vector& xi) const {
  return map(xi).minCoeff() > 0.0;
}

SimplexChart simplex_chart(const Subspace& w) {
  const auto positive = find_positive_point(w);
  if (!positive) {
    throw std::invalid_argument(
        "simplex_chart: W does not meet the open simplex");
  }
  const Vector base = *positive / positive->sum();

  // Directions span W intersected with the sum-zero hyperplane; the chart
  // then stays inside the affine slice sum(p) = 1.
  const Matrix& basis = w.basis();
  const Eigen::Index d = w.dim();
  if (d == 1) {
    return SimplexChart(base, Matrix::Zero(w.ambient_dim(), 0));
  }
  Vector sums = basis.colwise().sum();
  // Householder-style: build d-1 combinations of basis columns whose
  // coefficient vectors are orthogonal to `sums`.
  Eigen::JacobiSVD<Matrix> svd(sums.transpose(), Eigen::ComputeFullV);
  const Matrix null_coeffs = svd.matrixV().rightCols(d - 1);
  Matrix directions = basis * null_coeffs;
  // Orthonormalize for a well-scaled parameter domain.
  const Subspace tangent(directions);
  if (tangent.dim() != d - 1) {
    throw SolverError("simplex_chart: degenerate tangent space");
  }
  return SimplexChart(base, tangent.basis());
}

}  // namespace daplex
