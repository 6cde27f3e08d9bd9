#pragma once

#include "hdbwdm/clustering.hpp"
#include "hdbwdm/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace hdbwdm {

/// Label of appended contamination rows.
inline constexpr int kOutlier = -1;

struct MixtureConfig {
  std::size_t n_inliers = 500;
  std::size_t d = 500;
  int k_true = 5;
  double center_spacing = 15.0;
  double within_sd = 0.70710678118654752;  // variance 0.5
  double outlier_fraction = 0.10;
  double outlier_lo = -100.0;
  double outlier_hi = 100.0;
  Seed seed = 0;

  void validate() const;
  std::size_t outlier_count() const;
};

struct LabeledDataset {
  DataMatrix x;
  std::vector<int> labels;  // 0..k_true-1, or kOutlier
  MixtureConfig config;

  /// Labels as a partition with outlier rows trimmed.
  Partition true_partition() const;
};

/// Cluster k has mean k * spacing on every coordinate and covariance
/// within_sd^2 * I. Inliers are split as evenly as possible (the remainder
/// goes to the lowest ids); round(fraction * n_inliers) uniform outliers are
/// appended and the rows shuffled. Draw order from Rng(seed): inlier
/// coordinates row by row, outlier coordinates row by row, then a
/// Fisher-Yates shuffle.
LabeledDataset generate(const MixtureConfig& cfg);

/// Mean vector of cluster k.
Point mixture_center(const MixtureConfig& cfg, int k);

struct DatasetCsv {
  DataMatrix x;
  std::vector<int> labels;  // empty when the file has no label column
  bool has_labels = false;
};

/// Header "x0,...,x{d-1},label"; outlier labels written as "OUT".
void write_dataset_csv(std::ostream& out, const DataMatrix& x, const std::vector<int>* labels);

/// Reads a dataset CSV. The label column is recognised by a "label" header
/// field; headerless files carry one only when `headerless_label_column`
/// is set.
DatasetCsv read_dataset_csv(std::istream& in, bool headerless_label_column = false);

}  // namespace hdbwdm
