#include "hdbwdm/datagen.hpp"

#include "hdbwdm/csv_io.hpp"
#include "hdbwdm/rng.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <utility>

namespace hdbwdm {

void MixtureConfig::validate() const {
  if (k_true < 1) throw DataError("mixture: k_true must be >= 1");
  if (n_inliers < static_cast<std::size_t>(k_true)) throw DataError("mixture: need at least one inlier per cluster");
  if (d < 1) throw DataError("mixture: d must be >= 1");
  if (!(within_sd > 0.0) || !std::isfinite(within_sd)) throw DataError("mixture: within_sd must be > 0");
  if (!std::isfinite(center_spacing)) throw DataError("mixture: spacing must be finite");
  if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) throw DataError("mixture: outlier fraction must lie in [0, 1)");
  if (!(outlier_lo < outlier_hi)) throw DataError("mixture: outlier range needs lo < hi");
}

std::size_t MixtureConfig::outlier_count() const {
  return static_cast<std::size_t>(std::llround(outlier_fraction * static_cast<double>(n_inliers)));
}

Partition LabeledDataset::true_partition() const {
  return make_partition(labels, PartitionSource::true_labels, config.k_true);
}

Point mixture_center(const MixtureConfig& cfg, int k) {
  return Point::Constant(static_cast<Eigen::Index>(cfg.d), static_cast<double>(k) * cfg.center_spacing);
}

LabeledDataset generate(const MixtureConfig& cfg) {
  cfg.validate();
  const std::size_t n_out = cfg.outlier_count();
  const std::size_t n = cfg.n_inliers + n_out;
  const auto d = static_cast<Eigen::Index>(cfg.d);

  Rng rng(cfg.seed);
  DataMatrix x(static_cast<Eigen::Index>(n), d);
  std::vector<int> labels(n);

  const auto k = static_cast<std::size_t>(cfg.k_true);
  const std::size_t base = cfg.n_inliers / k;
  const std::size_t extra = cfg.n_inliers % k;
  std::size_t row = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t size = base + (c < extra ? 1 : 0);
    const double mean = static_cast<double>(c) * cfg.center_spacing;
    for (std::size_t r = 0; r < size; ++r, ++row) {
      for (Eigen::Index j = 0; j < d; ++j) x(static_cast<Eigen::Index>(row), j) = rng.normal(mean, cfg.within_sd);
      labels[row] = static_cast<int>(c);
    }
  }
  for (; row < n; ++row) {
    for (Eigen::Index j = 0; j < d; ++j) x(static_cast<Eigen::Index>(row), j) = rng.uniform(cfg.outlier_lo, cfg.outlier_hi);
    labels[row] = kOutlier;
  }

  // Fisher-Yates, applied to rows and labels together.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    if (j != i - 1) {
      x.row(static_cast<Eigen::Index>(i - 1)).swap(x.row(static_cast<Eigen::Index>(j)));
      std::swap(labels[i - 1], labels[j]);
    }
  }
  return {std::move(x), std::move(labels), cfg};
}

void write_dataset_csv(std::ostream& out, const DataMatrix& x, const std::vector<int>* labels) {
  if (labels && labels->size() != static_cast<std::size_t>(x.rows()))
    throw DataError("write_dataset_csv: label count does not match rows");
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (j) out << ',';
    out << 'x' << j;
  }
  if (labels) out << ",label";
  out << '\n';
  std::string line;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    line.clear();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) line += ',';
      line += format_double(x(i, j));
    }
    if (labels) {
      const int l = (*labels)[static_cast<std::size_t>(i)];
      line += ',';
      line += l < 0 ? std::string("OUT") : std::to_string(l);
    }
    line += '\n';
    out << line;
  }
}

DatasetCsv read_dataset_csv(std::istream& in, bool headerless_label_column) {
  const CsvTable table = read_csv(in, HeaderMode::Auto);
  if (table.rows.empty()) throw DataError("dataset csv: no data rows");
  const std::size_t width = table.rows.front().size();
  int label_col = -1;
  if (!table.header.empty())
    label_col = table.column("label");
  else if (headerless_label_column)
    label_col = static_cast<int>(width) - 1;
  if (label_col >= 0 && label_col != static_cast<int>(width) - 1)
    throw DataError("dataset csv: the label column must be last");

  DatasetCsv out;
  out.has_labels = label_col >= 0;
  const std::size_t d = out.has_labels ? width - 1 : width;
  if (d == 0) throw DataError("dataset csv: no feature columns");
  out.x.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    for (std::size_t j = 0; j < d; ++j) out.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(row[j]);
    if (out.has_labels) {
      const auto& lab = row[d];
      out.labels.push_back(lab == "OUT" ? kOutlier : static_cast<int>(parse_i64(lab)));
    }
  }
  require_finite(out.x, "dataset csv");
  return out;
}

}  // namespace hdbwdm
