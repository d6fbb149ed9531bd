#include "stelnet/model_core.hpp"

#include "stelnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stelnet {

void require_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected square");
  }
  if (m.size() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSymmetryTolerance * scale)) {
    throw ShapeError(std::string(what) + ": matrix is not symmetric (max asymmetry " +
                     std::to_string(asym) + ")");
  }
}

bool is_positive_definite(const Matrix& m) {
  require_symmetric(m, "is_positive_definite");
  if (m.size() == 0) return false;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) return false;
  const Matrix& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double pivot = l(i, i) * l(i, i);
    if (!(pivot > kPivotTolerance)) return false;
  }
  return true;
}

double log_determinant(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw DomainError("log_determinant: matrix is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

PrecisionMatrix::PrecisionMatrix(Matrix m) : m_(std::move(m)) {
  require_symmetric(m_, "PrecisionMatrix");
  m_ = (0.5 * (m_ + m_.transpose())).eval();
  if (!is_positive_definite(m_)) throw DomainError("PrecisionMatrix: matrix is not positive definite");
}

PartialCorrelationMatrix::PartialCorrelationMatrix(Matrix m) : m_(std::move(m)) {
  require_symmetric(m_, "PartialCorrelationMatrix");
  m_ = (0.5 * (m_ + m_.transpose())).eval();
  for (Eigen::Index j = 0; j < m_.rows(); ++j) {
    if (std::abs(m_(j, j)) > 1e-12) {
      throw DomainError("PartialCorrelationMatrix: diagonal entry " + std::to_string(j) + " is not zero");
    }
    m_(j, j) = 0.0;
  }
  for (Eigen::Index j = 0; j < m_.rows(); ++j) {
    for (Eigen::Index k = 0; k < m_.cols(); ++k) {
      const double v = m_(j, k);
      if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-10) {
        throw DomainError("PartialCorrelationMatrix: entry (" + std::to_string(j) + "," + std::to_string(k) +
                          ") outside [-1, 1]");
      }
      m_(j, k) = std::clamp(v, -1.0, 1.0);
    }
  }
}

EdgeSet::EdgeSet(std::size_t p, const std::vector<std::pair<int, int>>& pairs) : p_(p) {
  edges_.reserve(pairs.size());
  for (auto [j, k] : pairs) {
    if (j == k) throw ShapeError("EdgeSet: self-loop on node " + std::to_string(j));
    if (j < 0 || k < 0 || static_cast<std::size_t>(j) >= p || static_cast<std::size_t>(k) >= p) {
      throw ShapeError("EdgeSet: edge (" + std::to_string(j) + "," + std::to_string(k) + ") out of range for p=" +
                       std::to_string(p));
    }
    edges_.push_back({std::min(j, k), std::max(j, k)});
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

EdgeSet EdgeSet::complete(std::size_t p) {
  EdgeSet e(p);
  const int n = static_cast<int>(p);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) e.edges_.push_back({j, k});
  return e;
}

EdgeSet EdgeSet::from_support(const Matrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("EdgeSet::from_support: matrix is not square");
  EdgeSet e(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index k = j + 1; k < m.cols(); ++k)
      if (m(j, k) != 0.0) e.edges_.push_back({static_cast<int>(j), static_cast<int>(k)});
  return e;
}

bool EdgeSet::contains(int j, int k) const {
  if (j == k) return false;
  const Edge e{std::min(j, k), std::max(j, k)};
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

std::vector<int> EdgeSet::neighbors(int j) const {
  std::vector<int> out;
  for (const auto& e : edges_) {
    if (e.first == j) out.push_back(e.second);
    else if (e.second == j) out.push_back(e.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXi EdgeSet::adjacency() const {
  const auto n = static_cast<Eigen::Index>(p_);
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(n, n);
  for (const auto& e : edges_) {
    a(e.first, e.second) = 1;
    a(e.second, e.first) = 1;
  }
  return a;
}

bool EdgeSet::is_subset_of(const EdgeSet& other) const {
  return p_ == other.p_ && std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
}

Dataset::Dataset(Matrix values, std::optional<Vector> weights) : x_(std::move(values)), w_(std::move(weights)) {
  if (x_.rows() < 2) throw DataError("Dataset: need at least 2 rows, got " + std::to_string(x_.rows()));
  if (x_.cols() < 1) throw DataError("Dataset: need at least 1 column");
  for (Eigen::Index i = 0; i < x_.rows(); ++i)
    for (Eigen::Index j = 0; j < x_.cols(); ++j)
      if (!std::isfinite(x_(i, j))) {
        throw DataError("Dataset: non-finite value at row " + std::to_string(i) + ", column " + std::to_string(j));
      }
  if (w_) {
    if (w_->size() != x_.rows()) throw ShapeError("Dataset: weight vector length differs from row count");
    for (Eigen::Index i = 0; i < w_->size(); ++i)
      if (!(std::isfinite((*w_)(i)) && (*w_)(i) > 0.0)) {
        throw DataError("Dataset: weight at row " + std::to_string(i) + " is not strictly positive");
      }
  }
}

PartialCorrelationMatrix precision_to_partial_correlation(const Matrix& theta) {
  require_symmetric(theta, "precision_to_partial_correlation");
  const Eigen::Index p = theta.rows();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!(theta(j, j) > 0.0)) {
      throw DomainError("precision_to_partial_correlation: diagonal entry " + std::to_string(j) +
                        " is not positive");
    }
  }
  const Vector inv_sd = theta.diagonal().array().sqrt().inverse();
  Matrix pc = -(inv_sd.asDiagonal() * theta * inv_sd.asDiagonal());
  pc = (0.5 * (pc + pc.transpose())).eval();
  pc.diagonal().setZero();
  return PartialCorrelationMatrix(std::move(pc));
}

PartialCorrelationMatrix precision_to_partial_correlation(const PrecisionMatrix& theta) {
  return precision_to_partial_correlation(theta.matrix());
}

PrecisionMatrix scatter_to_precision(const PrecisionMatrix& psi, double nu) {
  if (!(nu > 2.0)) throw DomainError("scatter_to_precision: nu must exceed 2 (covariance undefined)");
  return PrecisionMatrix(((nu - 2.0) / nu) * psi.matrix());
}

}  // namespace stelnet
