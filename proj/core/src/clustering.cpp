#include "hdbwdm/clustering.hpp"

#include "hdbwdm/csv_io.hpp"
#include "hdbwdm/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>

namespace hdbwdm {

std::string to_string(PartitionSource source) {
  switch (source) {
    case PartitionSource::true_labels: return "true-labels";
    case PartitionSource::kmeans: return "kmeans";
    case PartitionSource::trimmed_kmeans: return "trimmed-kmeans";
    case PartitionSource::external: return "external";
  }
  return "external";
}

std::size_t Partition::retained_count() const {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(), [](int l) { return l != kTrimmed; }));
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (int l : labels)
    if (l >= 0 && l < k) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

void Partition::validate() const {
  if (k < 1) throw DataError("partition: k must be >= 1");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l != kTrimmed && (l < 0 || l >= k))
      throw DataError("partition: label " + std::to_string(l) + " at row " + std::to_string(i) +
                      " outside [0, " + std::to_string(k) + ")");
  }
  const auto sizes = cluster_sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c)
    if (sizes[c] == 0) throw DataError("partition: cluster " + std::to_string(c) + " has no retained members");
}

Partition make_partition(std::span<const int> labels, PartitionSource source, int k) {
  Partition part;
  part.source = source;
  part.labels.reserve(labels.size());
  int max_label = -1;
  for (int l : labels) {
    part.labels.push_back(l < 0 ? kTrimmed : l);
    max_label = std::max(max_label, l);
  }
  part.k = k >= 0 ? k : max_label + 1;
  if (!labels.empty())
    part.alpha = static_cast<double>(part.trimmed_count()) / static_cast<double>(labels.size());
  return part;
}

Partition relabel(const Partition& part, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != part.k) throw DataError("relabel: permutation length != k");
  Partition out = part;
  for (int& l : out.labels)
    if (l != kTrimmed) l = perm[static_cast<std::size_t>(l)];
  return out;
}

std::size_t trim_count(std::size_t n, double alpha) {
  if (alpha <= 0.0) return 0;
  // Guard against alpha*n landing a hair above an integer through rounding.
  const double raw = alpha * static_cast<double>(n);
  const double nearest = std::round(raw);
  if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(raw));
}

namespace {

// D^2 seeding. With h > 0 the h rows farthest from the current seeds get no
// mass, so a seed never lands on a row the first concentration step trims.
DataMatrix plus_plus_init(const DataMatrix& x, int k, std::size_t h, Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<std::size_t> order(n);
  std::vector<double> w(n);
  DataMatrix centers(k, x.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t pick = static_cast<std::size_t>(rng.below(n));
  for (int c = 0; c < k; ++c) {
    if (c > 0) {
      w = d2;
      if (h > 0) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(h), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return d2[a] > d2[b] || (d2[a] == d2[b] && a < b);
                          });
        for (std::size_t t = 0; t < h; ++t) w[order[t]] = 0.0;
      }
      const double total = std::accumulate(w.begin(), w.end(), 0.0);
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (w[i] <= 0.0) continue;
          acc += w[i];
          pick = i;
          if (acc > target) break;
        }
      } else {
        // All remaining mass is zero (duplicates): uniform over unchosen rows.
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i)
          if (!chosen[i]) free.push_back(i);
        pick = free.empty() ? static_cast<std::size_t>(rng.below(n)) : free[rng.below(free.size())];
      }
    }
    chosen[pick] = true;
    centers.row(c) = x.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (x.row(static_cast<Eigen::Index>(i)) - centers.row(c)).squaredNorm());
  }
  return centers;
}

struct RestartResult {
  std::vector<int> labels;
  DataMatrix centers;
  double objective = 0.0;
  std::vector<double> trace;
  int iterations = 0;
};

std::optional<RestartResult> concentrate(const DataMatrix& x, int k, std::size_t h, int max_iter,
                                         Rng& rng) {
  const auto n = static_cast<std::size_t>(x.rows());
  RestartResult res;
  res.centers = plus_plus_init(x, k, h, rng);
  std::vector<int> labels(n), prev;
  std::vector<double> d2(n);
  std::vector<std::size_t> order(n);

  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(static_cast<Eigen::Index>(i));
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dc = (row - res.centers.row(c)).squaredNorm();
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      labels[i] = best;
      d2[i] = best_d;
    }
    if (h > 0) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(h), order.end(),
                        [&](std::size_t a, std::size_t b) {
                          return d2[a] > d2[b] || (d2[a] == d2[b] && a < b);
                        });
      for (std::size_t t = 0; t < h; ++t) labels[order[t]] = kTrimmed;
    }
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] != kTrimmed) obj += d2[i];
    res.trace.push_back(obj);
    res.objective = obj;
    res.iterations = it;

    if (labels == prev) break;
    prev = labels;

    DataMatrix sums = DataMatrix::Zero(k, x.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == kTrimmed) continue;
      sums.row(labels[i]) += x.row(static_cast<Eigen::Index>(i));
      ++counts[static_cast<std::size_t>(labels[i])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        res.centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      if (h > 0) return std::nullopt;
      Eigen::Index far = 0;
      (x.rowwise() - res.centers.row(c)).rowwise().squaredNorm().maxCoeff(&far);
      res.centers.row(c) = x.row(far);
    }
  }

  // The final assignment must leave every cluster with a retained member.
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (int l : labels)
    if (l != kTrimmed) seen[static_cast<std::size_t>(l)] = true;
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return std::nullopt;
  res.labels = std::move(labels);
  return res;
}

ClusterFit fit_best_of(const DataMatrix& x, const ClusterOptions& opts, double alpha, PartitionSource source) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (opts.k < 2) throw DataError("clustering: k must be >= 2");
  if (x.rows() == 0 || x.cols() == 0) throw DataError("clustering: empty data");
  if (!(alpha >= 0.0 && alpha < 0.5)) throw DataError("clustering: alpha must lie in [0, 0.5)");
  if (opts.n_init < 1 || opts.max_iter < 1) throw DataError("clustering: n_init and max_iter must be >= 1");
  require_finite(x, "clustering");
  const std::size_t h = trim_count(n, alpha);
  if (static_cast<std::size_t>(opts.k) > n - h)
    throw DataError("clustering: k=" + std::to_string(opts.k) + " exceeds the " +
                    std::to_string(n - h) + " retained observations");

  std::optional<RestartResult> best;
  ClusterFit fit;
  for (int r = 0; r < opts.n_init; ++r) {
    Rng rng(derive_seed(opts.seed, {static_cast<std::uint64_t>(r)}));
    auto res = concentrate(x, opts.k, h, opts.max_iter, rng);
    if (!res) {
      ++fit.failed_restarts;
      continue;
    }
    if (!best || res->objective < best->objective) {
      best = std::move(res);
      fit.best_restart = r;
    }
  }
  if (!best)
    throw NumericalError("clustering: all " + std::to_string(opts.n_init) +
                         " restarts emptied a cluster (k=" + std::to_string(opts.k) + ")");

  fit.partition.labels = std::move(best->labels);
  fit.partition.k = opts.k;
  fit.partition.alpha = alpha;
  fit.partition.source = source;
  fit.centers = std::move(best->centers);
  fit.objective = best->objective;
  fit.trace = std::move(best->trace);
  fit.iterations = best->iterations;
  return fit;
}

}  // namespace

ClusterFit kmeans(const DataMatrix& x, ClusterOptions opts) {
  return fit_best_of(x, opts, 0.0, PartitionSource::kmeans);
}

ClusterFit trimmed_kmeans(const DataMatrix& x, ClusterOptions opts) {
  return fit_best_of(x, opts, opts.alpha, PartitionSource::trimmed_kmeans);
}

std::string to_string(CenterKind kind) {
  return kind == CenterKind::medoid ? "medoid" : "smedian";
}

CenterKind parse_center_kind(const std::string& text) {
  if (text == "medoid") return CenterKind::medoid;
  if (text == "smedian" || text == "spatial-median" || text == "spatial_median") return CenterKind::spatial_median;
  throw DataError("unknown center kind '" + text + "' (expected medoid or smedian)");
}

ClusterCenters cluster_centers(const DataMatrix& x, const Partition& part, CenterKind kind,
                               SpatialMedianOptions sm_opts) {
  if (part.size() != static_cast<std::size_t>(x.rows()))
    throw DataError("cluster_centers: partition covers " + std::to_string(part.size()) +
                    " rows, data has " + std::to_string(x.rows()));
  if (part.k < 1) throw DataError("cluster_centers: k must be >= 1");

  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(part.k));
  for (std::size_t i = 0; i < part.size(); ++i) {
    const int l = part.labels[i];
    if (l == kTrimmed) continue;
    if (l < 0 || l >= part.k) throw DataError("cluster_centers: label out of range at row " + std::to_string(i));
    members[static_cast<std::size_t>(l)].push_back(static_cast<Eigen::Index>(i));
  }

  ClusterCenters out;
  out.kind = kind;
  out.centers.resize(part.k, x.cols());
  for (int c = 0; c < part.k; ++c) {
    const auto& rows = members[static_cast<std::size_t>(c)];
    if (rows.empty()) throw DataError("cluster_centers: cluster " + std::to_string(c) + " has no retained members");
    DataMatrix sub(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = x.row(rows[r]);
    out.member_counts.push_back(rows.size());
    if (kind == CenterKind::medoid) {
      const auto m = medoid(sub);
      out.centers.row(c) = m.point.transpose();
      out.medoid_rows.push_back(static_cast<std::size_t>(rows[m.index]));
    } else {
      out.centers.row(c) = spatial_median(sub, sm_opts).point.transpose();
    }
  }
  return out;
}

Partition assign_to_centers(const DataMatrix& x, const ClusterCenters& centers) {
  if (x.cols() != centers.centers.cols())
    throw DataError("assign_to_centers: data has " + std::to_string(x.cols()) + " columns, centers have " +
                    std::to_string(centers.centers.cols()));
  if (centers.k() < 1) throw DataError("assign_to_centers: no centers");
  Partition part;
  part.k = centers.k();
  part.source = PartitionSource::external;
  part.labels.resize(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = 0;
    (centers.centers.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
    part.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return part;
}

void write_partition_csv(std::ostream& out, const Partition& part) {
  out << "observation_index,label\n";
  for (std::size_t i = 0; i < part.size(); ++i) {
    out << i << ',';
    if (part.labels[i] == kTrimmed)
      out << "TRIM";
    else
      out << part.labels[i];
    out << '\n';
  }
}

Partition read_partition_csv(std::istream& in, int k) {
  const auto table = read_csv(in, HeaderMode::Auto);
  std::vector<int> labels(table.rows.size(), kTrimmed);
  std::vector<bool> seen(table.rows.size(), false);
  for (const auto& row : table.rows) {
    if (row.size() != 2) throw DataError("partition csv: expected 2 columns");
    const auto idx = parse_u64(row[0]);
    if (idx >= labels.size() || seen[idx]) throw DataError("partition csv: bad observation index " + row[0]);
    seen[idx] = true;
    labels[idx] = row[1] == "TRIM" ? kTrimmed : static_cast<int>(parse_i64(row[1]));
  }
  return make_partition(labels, PartitionSource::external, k);
}

}  // namespace hdbwdm
