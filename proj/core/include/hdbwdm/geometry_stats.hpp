#pragma once

#include "hdbwdm/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hdbwdm {

/// Euclidean distance. Throws DataError on dimension mismatch or non-finite input.
double pairwise_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

/// Median of a sequence; even counts average the two central order statistics.
double median(std::span<const double> values);

/// Per-column median of the rows of `points`.
Point componentwise_median(const DataMatrix& points);

/// Sum of Euclidean distances from `center` to every row of `points`.
double distance_sum(const DataMatrix& points, const Eigen::Ref<const Eigen::VectorXd>& center);

struct SpatialMedianOptions {
  double tol = 1e-8;
  int max_iter = 500;
};

/// Tighter setting used for index centers, where distances between centers
/// feed the index to first order.
inline constexpr SpatialMedianOptions kIndexCenterOptions{1e-10, 2000};

struct SpatialMedianResult {
  Point point;
  bool converged = false;
  int iterations = 0;
};

/// Geometric (L1) median of the rows of `points`.
///
/// Weiszfeld iteration started from the componentwise median, with the
/// Vardi-Zhang step when an iterate lands on data points. Stops when the
/// step length, and the remaining distance extrapolated from the contraction
/// rate, fall below `tol` times the median distance from the start to the
/// rows. The relative threshold keeps the estimate scale-equivariant. With one or two rows the componentwise
/// median (the midpoint for two rows) is returned directly. On hitting
/// `max_iter` the iterate with the smallest objective seen is returned with
/// `converged == false`.
SpatialMedianResult spatial_median(const DataMatrix& points, SpatialMedianOptions opts = {});

struct MedoidResult {
  std::size_t index = 0;
  Point point;
};

/// Row minimizing the summed distance to all rows; ties go to the lowest index.
MedoidResult medoid(const DataMatrix& points);

struct RobustScaleModel {
  Eigen::VectorXd centers;
  Eigen::VectorXd scales;
  std::vector<bool> fallback_mask;  // raw MAD was zero, divisor replaced by 1

  std::size_t dim() const { return static_cast<std::size_t>(centers.size()); }
};

/// Column medians and raw MADs (no consistency constant).
RobustScaleModel robust_scale_fit(const DataMatrix& x);
DataMatrix robust_scale_apply(const DataMatrix& x, const RobustScaleModel& model);
DataMatrix robust_scale_invert(const DataMatrix& scaled, const RobustScaleModel& model);

}  // namespace hdbwdm
