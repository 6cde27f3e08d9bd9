#include "hdbwdm/geometry_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hdbwdm {

void require_finite(const DataMatrix& x, const char* what) {
  if (!x.allFinite()) throw DataError(std::string(what) + ": non-finite entry");
}

void require_finite(const Eigen::Ref<const Eigen::VectorXd>& x, const char* what) {
  if (!x.allFinite()) throw DataError(std::string(what) + ": non-finite entry");
}

double pairwise_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw DataError("pairwise_distance: dimension mismatch (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  require_finite(a, "pairwise_distance");
  require_finite(b, "pairwise_distance");
  return (a - b).norm();
}

double median(std::span<const double> values) {
  if (values.empty()) throw DataError("median: empty input");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Point componentwise_median(const DataMatrix& points) {
  if (points.rows() == 0 || points.cols() == 0) throw DataError("componentwise_median: empty input");
  Point out(points.cols());
  std::vector<double> column(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) column[static_cast<std::size_t>(i)] = points(i, j);
    out(j) = median(column);
  }
  return out;
}

double distance_sum(const DataMatrix& points, const Eigen::Ref<const Eigen::VectorXd>& center) {
  return (points.rowwise() - center.transpose()).rowwise().norm().sum();
}

SpatialMedianResult spatial_median(const DataMatrix& points, SpatialMedianOptions opts) {
  if (points.rows() == 0) throw DataError("spatial_median: empty input");
  if (!(opts.tol > 0.0) || opts.max_iter < 1)
    throw DataError("spatial_median: tol must be > 0 and max_iter >= 1");
  require_finite(points, "spatial_median");

  SpatialMedianResult result;
  Point y = componentwise_median(points);
  if (points.rows() <= 2) {
    result.point = std::move(y);
    result.converged = true;
    return result;
  }

  // Tolerances are relative to the cloud's spread around the start so the
  // result scales with the data. Median distance, or the largest one when
  // most points sit on the start.
  const Eigen::VectorXd start_dist = (points.rowwise() - y.transpose()).rowwise().norm();
  double scale = median(std::span<const double>(start_dist.data(), static_cast<std::size_t>(start_dist.size())));
  if (scale == 0.0) scale = start_dist.maxCoeff();
  if (scale == 0.0) {
    result.point = std::move(y);
    result.converged = true;
    return result;
  }
  const double coincide = 1e-12 * scale;
  const double tol = opts.tol * scale;

  Point best = y;
  double best_obj = distance_sum(points, y);
  const Eigen::Index n = points.rows();
  Eigen::VectorXd weighted(points.cols());
  Eigen::VectorXd resid(points.cols());
  double prev_step = 0.0;

  for (int it = 1; it <= opts.max_iter; ++it) {
    weighted.setZero();
    resid.setZero();
    double inv_sum = 0.0;
    int coincident = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dist = (points.row(i).transpose() - y).norm();
      if (dist <= coincide) {
        ++coincident;
        continue;
      }
      weighted.noalias() += points.row(i).transpose() / dist;
      resid.noalias() += (points.row(i).transpose() - y) / dist;
      inv_sum += 1.0 / dist;
    }
    result.iterations = it;

    Point next;
    if (inv_sum == 0.0) {
      // Every point coincides with y.
      next = y;
    } else if (coincident == 0) {
      next = weighted / inv_sum;
    } else {
      const double pull = resid.norm();
      if (pull <= coincident) {
        // The coincident data point is itself optimal.
        next = y;
      } else {
        const double gamma = static_cast<double>(coincident) / pull;
        next = (1.0 - gamma) * (weighted / inv_sum) + gamma * y;
      }
    }

    const double step = (next - y).norm();
    y = std::move(next);
    const double obj = distance_sum(points, y);
    if (obj <= best_obj) {
      best_obj = obj;
      best = y;
    }
    // Linear convergence: the distance left is about step * rate / (1 - rate).
    const double rate = prev_step > 0.0 ? step / prev_step : 0.0;
    const double left = rate < 1.0 ? step * rate / (1.0 - rate) : step;
    prev_step = step;
    if (step < tol && left < tol) {
      result.point = y;
      result.converged = true;
      return result;
    }
  }
  result.point = std::move(best);
  result.converged = false;
  return result;
}

MedoidResult medoid(const DataMatrix& points) {
  const Eigen::Index n = points.rows();
  if (n == 0) throw DataError("medoid: empty input");
  require_finite(points, "medoid");
  std::vector<double> sums(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (points.row(i) - points.row(j)).norm();
      sums[static_cast<std::size_t>(i)] += dist;
      sums[static_cast<std::size_t>(j)] += dist;
    }
  }
  const auto it = std::min_element(sums.begin(), sums.end());
  MedoidResult out;
  out.index = static_cast<std::size_t>(it - sums.begin());
  out.point = points.row(static_cast<Eigen::Index>(out.index)).transpose();
  return out;
}

RobustScaleModel robust_scale_fit(const DataMatrix& x) {
  if (x.rows() < 1 || x.cols() < 1) throw DataError("robust_scale_fit: need n >= 1 and d >= 1");
  require_finite(x, "robust_scale_fit");
  RobustScaleModel model;
  const auto d = x.cols();
  model.centers = componentwise_median(x);
  model.scales.resize(d);
  model.fallback_mask.assign(static_cast<std::size_t>(d), false);
  std::vector<double> dev(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      dev[static_cast<std::size_t>(i)] = std::abs(x(i, j) - model.centers(j));
    const double mad = median(dev);
    if (mad > 0.0) {
      model.scales(j) = mad;
    } else {
      model.scales(j) = 1.0;
      model.fallback_mask[static_cast<std::size_t>(j)] = true;
    }
  }
  return model;
}

DataMatrix robust_scale_apply(const DataMatrix& x, const RobustScaleModel& model) {
  if (static_cast<std::size_t>(x.cols()) != model.dim())
    throw DataError("robust_scale_apply: data has " + std::to_string(x.cols()) +
                    " columns, model expects " + std::to_string(model.dim()));
  DataMatrix out = (x.rowwise() - model.centers.transpose()).array().rowwise() /
                   model.scales.transpose().array();
  return out;
}

DataMatrix robust_scale_invert(const DataMatrix& scaled, const RobustScaleModel& model) {
  if (static_cast<std::size_t>(scaled.cols()) != model.dim())
    throw DataError("robust_scale_invert: dimension mismatch");
  DataMatrix out = (scaled.array().rowwise() * model.scales.transpose().array()).matrix();
  out.rowwise() += model.centers.transpose();
  return out;
}

}  // namespace hdbwdm
