#pragma once

#include "hdbwdm/geometry_stats.hpp"
#include "hdbwdm/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hdbwdm {

/// Label carried by observations excluded from every cluster.
inline constexpr int kTrimmed = -1;

enum class PartitionSource { true_labels, kmeans, trimmed_kmeans, external };
std::string to_string(PartitionSource source);

/// Per-observation cluster ids in [0, k) or kTrimmed.
struct Partition {
  std::vector<int> labels;
  int k = 0;
  double alpha = 0.0;
  PartitionSource source = PartitionSource::external;

  std::size_t size() const { return labels.size(); }
  std::size_t retained_count() const;
  std::size_t trimmed_count() const { return size() - retained_count(); }
  std::vector<std::size_t> cluster_sizes() const;

  /// Throws DataError unless every label is in range and every cluster id
  /// has at least one retained member.
  void validate() const;
};

/// Builds a partition from integer labels; any negative label becomes
/// kTrimmed. `k` defaults to max label + 1.
Partition make_partition(std::span<const int> labels, PartitionSource source, int k = -1);

/// Applies `perm` to cluster ids: new id = perm[old id].
Partition relabel(const Partition& part, std::span<const int> perm);

struct ClusterOptions {
  int k = 2;
  double alpha = 0.0;
  Seed seed = 0;
  int max_iter = 100;
  int n_init = 10;
};

struct ClusterFit {
  Partition partition;
  DataMatrix centers;          // mean of retained members, k x dim
  double objective = 0.0;      // retained within-cluster sum of squared distances
  std::vector<double> trace;   // objective after each assign/trim step of the winning restart
  int iterations = 0;
  int best_restart = 0;
  int failed_restarts = 0;
};

/// Number of observations trimmed at level alpha: ceil(alpha * n).
std::size_t trim_count(std::size_t n, double alpha);

/// Lloyd's algorithm with k-means++ seeding, best of n_init restarts by
/// within-cluster sum of squares. Restart r draws from
/// derive_seed(seed, {r}). A cluster that empties mid-run is reseeded at the
/// observation farthest from its previous center. `opts.alpha` is ignored.
ClusterFit kmeans(const DataMatrix& x, ClusterOptions opts);

/// Trimmed k-means by concentration steps: assign to the nearest center,
/// drop the ceil(alpha*n) observations farthest from their centers, move
/// each center to the mean of its retained members. Iterates until labels
/// and trim set stop changing. A restart whose cluster loses all retained
/// members fails; alpha = 0 runs exactly the kmeans schedule. Throws
/// NumericalError if every restart fails.
ClusterFit trimmed_kmeans(const DataMatrix& x, ClusterOptions opts);

enum class CenterKind { medoid, spatial_median };
std::string to_string(CenterKind kind);  // "medoid" | "smedian"
CenterKind parse_center_kind(const std::string& text);

struct ClusterCenters {
  DataMatrix centers;  // k x dim
  CenterKind kind = CenterKind::medoid;
  std::vector<std::size_t> member_counts;
  std::vector<std::size_t> medoid_rows;  // row of X chosen as center (medoid kind only)

  int k() const { return static_cast<int>(centers.rows()); }
};

/// Per-cluster medoid or spatial median of the retained members.
ClusterCenters cluster_centers(const DataMatrix& x, const Partition& part, CenterKind kind,
                               SpatialMedianOptions sm_opts = kIndexCenterOptions);

/// Nearest-center labels, no trimming; ties go to the lowest cluster id.
Partition assign_to_centers(const DataMatrix& x, const ClusterCenters& centers);

/// CSV with header "observation_index,label"; trimmed rows carry "TRIM".
void write_partition_csv(std::ostream& out, const Partition& part);
Partition read_partition_csv(std::istream& in, int k = -1);

}  // namespace hdbwdm
