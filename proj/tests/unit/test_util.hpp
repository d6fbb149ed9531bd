#pragma once

#include "stelnet/model_core.hpp"

#include <random>

namespace stelnet::testing {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = z(rng);
  return m;
}

/// Wishart-like SPD matrix, well conditioned.
inline Matrix random_spd(Eigen::Index p, std::mt19937_64& rng, double ridge = 0.5) {
  const Matrix a = random_matrix(p + 3, p, rng);
  Matrix s = a.transpose() * a / static_cast<double>(p + 3);
  s.diagonal().array() += ridge;
  return 0.5 * (s + s.transpose());
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace stelnet::testing
