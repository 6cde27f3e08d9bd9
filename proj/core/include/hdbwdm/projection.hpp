#pragma once

#include "hdbwdm/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace hdbwdm {

enum class ProjectionKind { random, pca };

std::string to_string(ProjectionKind kind);  // "rp" | "pca"
ProjectionKind parse_projection_kind(const std::string& text);

/// A linear map from d-space to p-space: out = (x - centers) * matrix^T.
/// For random projections `centers` is all zeros and `explained_variance` empty.
struct ProjectionModel {
  ProjectionKind kind = ProjectionKind::random;
  DataMatrix matrix;  // p x d
  Eigen::VectorXd centers;
  Eigen::VectorXd explained_variance;
  Seed seed = 0;

  std::size_t target_dim() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t source_dim() const { return static_cast<std::size_t>(matrix.cols()); }
};

/// Gaussian random projection with entries N(0, 1/p), drawn row by row from
/// Rng(seed) as standard normals scaled by 1/sqrt(p).
ProjectionModel fit_random_projection(std::size_t d, std::size_t p, Seed seed);

/// Top-p principal axes of the column-mean-centred data, computed through a
/// thin SVD. Eigenvalues use the n-1 divisor. Each loading row is signed so
/// its largest-magnitude entry is positive.
ProjectionModel fit_pca(const DataMatrix& x, std::size_t p);

DataMatrix project(const DataMatrix& x, const ProjectionModel& model);

struct DistortionProfile {
  double epsilon_hat = 0.0;
  double min_ratio = 1.0;
  double max_ratio = 1.0;
  std::size_t pairs_sampled = 0;
  std::vector<double> ratios;  // squared-distance ratios, in sampling order

  /// Share of sampled pairs whose ratio lies in [1 - eps, 1 + eps].
  double fraction_within(double eps) const;
};

/// Squared-distance ratios ||xp_i - xp_j||^2 / ||x_i - x_j||^2 over up to
/// `max_pairs` distinct unordered pairs drawn without replacement (all pairs
/// when there are no more than `max_pairs`). Zero-distance pairs are skipped.
DistortionProfile distortion_profile(const DataMatrix& x, const DataMatrix& xp,
                                     std::size_t max_pairs = 10000, Seed seed = 0);

// Text format, one record per line:
//   hdbwdm-projection 1
//   kind rp|pca
//   source_dim <d>
//   target_dim <p>
//   seed <u64>
//   centers <d comma-separated values>
//   explained_variance <p values, or empty>
//   matrix
//   <p lines of d comma-separated values>
// Values are written in shortest round-trip form, so reading reproduces the
// model bit for bit.
void write_projection_model(std::ostream& out, const ProjectionModel& model);
ProjectionModel read_projection_model(std::istream& in);

}  // namespace hdbwdm
