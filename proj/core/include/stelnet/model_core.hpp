#pragma once

// Core value types shared by every stage of the estimator: precision and
// partial-correlation matrices, undirected edge sets and datasets.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace stelnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative tolerance used to accept a matrix as symmetric.
inline constexpr double kSymmetryTolerance = 1e-8;
/// Minimum Cholesky pivot for a matrix to count as positive definite.
inline constexpr double kPivotTolerance = 1e-12;

/// Symmetric positive-definite matrix. Holds either a precision matrix or the
/// inverse scatter of a t distribution; both share the same invariants.
class PrecisionMatrix {
 public:
  /// Throws ShapeError if `m` is not square or asymmetric beyond tolerance,
  /// DomainError if it is not positive definite. The stored copy is exactly
  /// symmetric.
  explicit PrecisionMatrix(Matrix m);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index j, Eigen::Index k) const { return m_(j, k); }

 private:
  Matrix m_;
};

/// Symmetric matrix of partial correlations with an exactly zero diagonal.
class PartialCorrelationMatrix {
 public:
  /// Validates symmetry, a (numerically) zero diagonal and entries in [-1, 1].
  explicit PartialCorrelationMatrix(Matrix m);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index j, Eigen::Index k) const { return m_(j, k); }

 private:
  Matrix m_;
};

/// Unordered pair of distinct nodes, stored with first < second.
struct Edge {
  int first;
  int second;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on nodes 0..p-1.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::size_t p) : p_(p) {}
  /// Pairs may come in any orientation and may repeat; they are canonicalized.
  /// Self-loops or out-of-range indices throw ShapeError.
  EdgeSet(std::size_t p, const std::vector<std::pair<int, int>>& pairs);

  /// Complete graph on p nodes.
  static EdgeSet complete(std::size_t p);
  /// Edges where the off-diagonal entry of `m` is nonzero (upper triangle read).
  static EdgeSet from_support(const Matrix& m);

  std::size_t nodes() const noexcept { return p_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool contains(int j, int k) const;
  /// Sorted neighbor list of node j.
  std::vector<int> neighbors(int j) const;
  /// Dense 0/1 adjacency, zero diagonal.
  Eigen::MatrixXi adjacency() const;

  bool is_subset_of(const EdgeSet& other) const;

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::size_t p_ = 0;
  std::vector<Edge> edges_;
};

/// n x p observations with optional positive per-row weights.
class Dataset {
 public:
  /// Throws DataError on n < 2, p < 1, non-finite values, or non-positive
  /// weights; ShapeError if the weight length differs from n.
  explicit Dataset(Matrix values, std::optional<Vector> weights = std::nullopt);

  Eigen::Index rows() const noexcept { return x_.rows(); }
  Eigen::Index cols() const noexcept { return x_.cols(); }
  const Matrix& values() const noexcept { return x_; }
  const std::optional<Vector>& weights() const noexcept { return w_; }

 private:
  Matrix x_;
  std::optional<Vector> w_;
};

/// p_jk = -theta_jk / sqrt(theta_jj theta_kk), zero diagonal.
PartialCorrelationMatrix precision_to_partial_correlation(const PrecisionMatrix& theta);
/// Same, for a raw symmetric matrix; only requires a positive diagonal.
/// Throws DomainError naming the first non-positive diagonal index.
PartialCorrelationMatrix precision_to_partial_correlation(const Matrix& theta);

/// Theta = (nu - 2) / nu * Psi. Throws DomainError for nu <= 2.
PrecisionMatrix scatter_to_precision(const PrecisionMatrix& psi, double nu);

/// True iff a Cholesky factorization succeeds with every pivot above
/// kPivotTolerance. Throws ShapeError for non-square or asymmetric input.
bool is_positive_definite(const Matrix& m);

/// Throws ShapeError unless `m` is square and symmetric within
/// kSymmetryTolerance (relative to its largest entry).
void require_symmetric(const Matrix& m, const char* what);

/// log det of a PD matrix via Cholesky. Throws DomainError if not PD.
double log_determinant(const Matrix& m);

}  // namespace stelnet
