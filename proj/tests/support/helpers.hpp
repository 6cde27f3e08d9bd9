#pragma once

#include "hdbwdm/hdbwdm.hpp"
#include "oracles.hpp"

#include <cmath>
#include <vector>

namespace testing_support {

inline hdbwdm::DataMatrix rows_to_matrix(const oracle::Rows& rows) {
  hdbwdm::DataMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

inline oracle::Rows matrix_to_rows(const hdbwdm::DataMatrix& m) {
  oracle::Rows rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows[static_cast<std::size_t>(i)].assign(m.row(i).begin(), m.row(i).end());
  return rows;
}

inline hdbwdm::DataMatrix column(std::initializer_list<double> v) {
  hdbwdm::DataMatrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

inline hdbwdm::DataMatrix random_matrix(hdbwdm::Rng& rng, Eigen::Index n, Eigen::Index d, double scale = 1.0) {
  hdbwdm::DataMatrix m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = scale * rng.normal();
  return m;
}

/// Random orthogonal d x d matrix from a QR-free Gram-Schmidt pass.
inline Eigen::MatrixXd random_rotation(hdbwdm::Rng& rng, Eigen::Index d) {
  Eigen::MatrixXd q(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.normal();
    for (Eigen::Index k = 0; k < j; ++k) v -= q.col(k).dot(v) * q.col(k);
    q.col(j) = v.normalized();
  }
  return q;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
