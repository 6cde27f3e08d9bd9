#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hdbwdm {

/// n observations by d features, one observation per row.
using DataMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Point = Eigen::VectorXd;
using Seed = std::uint64_t;

/// Invalid or inconsistent input data (shape mismatch, non-finite values,
/// empty sets, out-of-range parameters).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not produce a usable result (every clustering
/// restart failed, too many failed replications, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_finite(const DataMatrix& x, const char* what);
void require_finite(const Eigen::Ref<const Eigen::VectorXd>& x, const char* what);

}  // namespace hdbwdm
