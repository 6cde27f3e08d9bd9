#pragma once

#include "hdbwdm/clustering.hpp"
#include "hdbwdm/geometry_stats.hpp"
#include "hdbwdm/projection.hpp"
#include "hdbwdm/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hdbwdm {

/// Provenance-carrying index value. `bwdm` is abdm/awdm; when awdm is zero
/// the ratio is +infinity and `degenerate` is set.
struct IndexReport {
  double abdm = 0.0;
  double awdm = 0.0;
  double bwdm = 0.0;
  bool degenerate = false;
  int k = 0;
  std::size_t p = 0;                        // working dimension
  double alpha = 0.0;                       // trimmed share of the scored partition
  std::optional<ProjectionKind> projection; // empty: scored in the input space
  CenterKind center_kind = CenterKind::medoid;
  PartitionSource partition = PartitionSource::external;
  Seed seed = 0;
  std::size_t n_used = 0;                   // observations entering AWDM
};

/// Mean distance over ordered pairs of distinct centers, divided by k(k-1).
double abdm(const ClusterCenters& centers);

struct AwdmValue {
  double value = 0.0;
  std::size_t n_used = 0;
};

/// Summed distance of retained observations to their cluster center,
/// divided by (retained_count - k). Trimmed rows contribute nothing.
AwdmValue awdm(const DataMatrix& x, const Partition& part, const ClusterCenters& centers);

/// Centers from `part`, then abdm / awdm, all in the space of `x`.
IndexReport bwdm(const DataMatrix& x, const Partition& part, CenterKind kind,
                 SpatialMedianOptions sm_opts = kIndexCenterOptions);

enum class Clusterer { trimmed_kmeans, kmeans, external_labels };
std::string to_string(Clusterer c);
Clusterer parse_clusterer(const std::string& text);

struct PipelineConfig {
  int k = 5;
  std::size_t p = 150;
  double alpha = 0.1;
  std::optional<ProjectionKind> projection = ProjectionKind::random;
  CenterKind center_kind = CenterKind::medoid;
  Clusterer clusterer = Clusterer::trimmed_kmeans;
  /// Pipeline seed. The random projection draws from derive_seed(seed, {1})
  /// and clustering restarts from derive_seed(seed, {2}).
  Seed seed = 0;
  bool scale = true;
  int n_init = 10;
  int max_iter = 100;

  void validate(std::size_t n, std::size_t d) const;
};

Seed projection_seed(const PipelineConfig& cfg);
Seed clustering_seed(const PipelineConfig& cfg);

/// The data after optional robust scaling and projection.
struct Embedding {
  DataMatrix data;
  std::optional<RobustScaleModel> scaling;
  std::optional<ProjectionModel> projection;
};

Embedding embed(const DataMatrix& x_raw, const PipelineConfig& cfg);

/// Partition of the embedded data according to cfg.clusterer. With
/// external labels, `true_labels` is required and its negative labels
/// (outliers) are trimmed.
Partition partition_embedding(const Embedding& emb, const PipelineConfig& cfg,
                              const Partition* true_labels = nullptr);

IndexReport score_partition(const Embedding& emb, const Partition& part, const PipelineConfig& cfg);

/// Robust scale -> project -> cluster (or adopt `true_labels`) -> BWDM in
/// the projected space.
IndexReport hd_bwdm(const DataMatrix& x_raw, const PipelineConfig& cfg,
                    const Partition* true_labels = nullptr);

struct SelectKResult {
  int k_star = 0;
  std::vector<IndexReport> reports;                  // successful K, ascending
  std::vector<std::pair<int, std::string>> skipped;  // K that failed to fit, with reason
};

/// One embedding shared by every K in [k_min, k_max]; returns the argmax of
/// bwdm, smallest K on ties. K values whose fit fails are skipped.
SelectKResult select_k(const DataMatrix& x_raw, int k_min, int k_max, const PipelineConfig& cfg_template);

// Serialization. CSV columns, in order:
//   k,p,alpha,projection,center_kind,partition,seed,n_used,abdm,awdm,bwdm,degenerate
// JSON objects use the same keys; a degenerate bwdm is written as "inf".
std::string index_report_csv_header();
std::string index_report_csv_row(const IndexReport& r);
IndexReport parse_index_report_csv_row(const std::string& line);
std::string index_report_json(const IndexReport& r);

}  // namespace hdbwdm
