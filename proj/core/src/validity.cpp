#include "hdbwdm/validity.hpp"

#include "hdbwdm/csv_io.hpp"
#include "hdbwdm/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace hdbwdm {

double abdm(const ClusterCenters& centers) {
  const int k = centers.k();
  if (k < 2) throw DataError("abdm: need at least 2 centers");
  double sum = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j) sum += (centers.centers.row(i) - centers.centers.row(j)).norm();
  return sum / (static_cast<double>(k) * static_cast<double>(k - 1));
}

AwdmValue awdm(const DataMatrix& x, const Partition& part, const ClusterCenters& centers) {
  if (part.size() != static_cast<std::size_t>(x.rows())) throw DataError("awdm: partition/data size mismatch");
  if (centers.k() != part.k) throw DataError("awdm: center count differs from partition k");
  if (x.cols() != centers.centers.cols()) throw DataError("awdm: center dimension mismatch");
  const std::size_t retained = part.retained_count();
  if (retained <= static_cast<std::size_t>(part.k))
    throw DataError("awdm: retained count " + std::to_string(retained) + " must exceed k=" +
                    std::to_string(part.k));
  double sum = 0.0;
  for (std::size_t i = 0; i < part.size(); ++i) {
    const int l = part.labels[i];
    if (l == kTrimmed) continue;
    sum += (x.row(static_cast<Eigen::Index>(i)) - centers.centers.row(l)).norm();
  }
  return {sum / static_cast<double>(retained - static_cast<std::size_t>(part.k)), retained};
}

IndexReport bwdm(const DataMatrix& x, const Partition& part, CenterKind kind, SpatialMedianOptions sm_opts) {
  if (part.k < 2) throw DataError("bwdm: k must be >= 2");
  const auto centers = cluster_centers(x, part, kind, sm_opts);
  IndexReport r;
  r.abdm = abdm(centers);
  const auto w = awdm(x, part, centers);
  r.awdm = w.value;
  r.n_used = w.n_used;
  if (r.awdm > 0.0) {
    r.bwdm = r.abdm / r.awdm;
  } else {
    r.bwdm = std::numeric_limits<double>::infinity();
    r.degenerate = true;
  }
  r.k = part.k;
  r.p = static_cast<std::size_t>(x.cols());
  r.alpha = part.alpha;
  r.center_kind = kind;
  r.partition = part.source;
  return r;
}

std::string to_string(Clusterer c) {
  switch (c) {
    case Clusterer::trimmed_kmeans: return "trimmed-kmeans";
    case Clusterer::kmeans: return "kmeans";
    case Clusterer::external_labels: return "labels";
  }
  return "trimmed-kmeans";
}

Clusterer parse_clusterer(const std::string& text) {
  if (text == "trimmed-kmeans" || text == "trimmed" || text == "tkmeans") return Clusterer::trimmed_kmeans;
  if (text == "kmeans") return Clusterer::kmeans;
  if (text == "labels" || text == "external") return Clusterer::external_labels;
  throw DataError("unknown clusterer '" + text + "' (expected trimmed-kmeans, kmeans or labels)");
}

void PipelineConfig::validate(std::size_t n, std::size_t d) const {
  if (k < 2) throw DataError("config: k must be >= 2");
  if (!(alpha >= 0.0 && alpha < 0.5)) throw DataError("config: alpha must lie in [0, 0.5)");
  if (n == 0 || d == 0) throw DataError("config: empty data");
  if (projection) {
    if (p < 1 || p > d)
      throw DataError("config: need 1 <= p <= d (p=" + std::to_string(p) + ", d=" + std::to_string(d) + ")");
    if (*projection == ProjectionKind::pca && p > n - 1)
      throw DataError("config: pca needs p <= n-1 (p=" + std::to_string(p) + ", n=" + std::to_string(n) + ")");
  }
  if (n_init < 1 || max_iter < 1) throw DataError("config: n_init and max_iter must be >= 1");
}

Seed projection_seed(const PipelineConfig& cfg) { return derive_seed(cfg.seed, {1}); }
Seed clustering_seed(const PipelineConfig& cfg) { return derive_seed(cfg.seed, {2}); }

Embedding embed(const DataMatrix& x_raw, const PipelineConfig& cfg) {
  cfg.validate(static_cast<std::size_t>(x_raw.rows()), static_cast<std::size_t>(x_raw.cols()));
  require_finite(x_raw, "hd_bwdm");
  Embedding emb;
  DataMatrix work;
  if (cfg.scale) {
    emb.scaling = robust_scale_fit(x_raw);
    work = robust_scale_apply(x_raw, *emb.scaling);
  } else {
    work = x_raw;
  }
  if (!cfg.projection) {
    emb.data = std::move(work);
    return emb;
  }
  if (*cfg.projection == ProjectionKind::random)
    emb.projection = fit_random_projection(static_cast<std::size_t>(work.cols()), cfg.p, projection_seed(cfg));
  else
    emb.projection = fit_pca(work, cfg.p);
  emb.data = project(work, *emb.projection);
  return emb;
}

Partition partition_embedding(const Embedding& emb, const PipelineConfig& cfg, const Partition* true_labels) {
  ClusterOptions copts;
  copts.k = cfg.k;
  copts.alpha = cfg.alpha;
  copts.seed = clustering_seed(cfg);
  copts.n_init = cfg.n_init;
  copts.max_iter = cfg.max_iter;
  switch (cfg.clusterer) {
    case Clusterer::trimmed_kmeans: return trimmed_kmeans(emb.data, copts).partition;
    case Clusterer::kmeans: return kmeans(emb.data, copts).partition;
    case Clusterer::external_labels: break;
  }
  if (!true_labels) throw DataError("hd_bwdm: clusterer 'labels' needs a label partition");
  if (true_labels->size() != static_cast<std::size_t>(emb.data.rows()))
    throw DataError("hd_bwdm: label count does not match row count");
  Partition part = make_partition(true_labels->labels, PartitionSource::true_labels, true_labels->k);
  part.validate();
  return part;
}

IndexReport score_partition(const Embedding& emb, const Partition& part, const PipelineConfig& cfg) {
  IndexReport r = bwdm(emb.data, part, cfg.center_kind);
  r.projection = cfg.projection;
  r.seed = cfg.seed;
  return r;
}

IndexReport hd_bwdm(const DataMatrix& x_raw, const PipelineConfig& cfg, const Partition* true_labels) {
  const Embedding emb = embed(x_raw, cfg);
  return score_partition(emb, partition_embedding(emb, cfg, true_labels), cfg);
}

SelectKResult select_k(const DataMatrix& x_raw, int k_min, int k_max, const PipelineConfig& cfg_template) {
  if (cfg_template.clusterer == Clusterer::external_labels)
    throw DataError("select_k: needs a fitting clusterer, not fixed labels");
  const auto n = static_cast<double>(x_raw.rows());
  const int upper = static_cast<int>(std::floor(n * (1.0 - cfg_template.alpha) / 2.0));
  if (k_min < 2 || k_max < k_min || k_max > upper)
    throw DataError("select_k: k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                    "] must lie within [2, " + std::to_string(upper) + "]");

  PipelineConfig cfg = cfg_template;
  cfg.k = k_min;
  const Embedding emb = embed(x_raw, cfg);

  SelectKResult result;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    cfg.k = k;
    try {
      IndexReport r = score_partition(emb, partition_embedding(emb, cfg), cfg);
      if (r.bwdm > best) {
        best = r.bwdm;
        result.k_star = k;
      }
      result.reports.push_back(r);
    } catch (const std::exception& e) {
      result.skipped.emplace_back(k, e.what());
    }
  }
  if (result.reports.empty()) throw NumericalError("select_k: every K in the range failed to fit");
  return result;
}

std::string index_report_csv_header() {
  return "k,p,alpha,projection,center_kind,partition,seed,n_used,abdm,awdm,bwdm,degenerate";
}

std::string index_report_csv_row(const IndexReport& r) {
  std::string s;
  s += std::to_string(r.k) + ',' + std::to_string(r.p) + ',' + format_double(r.alpha) + ',';
  s += (r.projection ? to_string(*r.projection) : std::string("none")) + ',';
  s += to_string(r.center_kind) + ',' + to_string(r.partition) + ',';
  s += std::to_string(r.seed) + ',' + std::to_string(r.n_used) + ',';
  s += format_double(r.abdm) + ',' + format_double(r.awdm) + ',' + format_double(r.bwdm) + ',';
  s += r.degenerate ? "1" : "0";
  return s;
}

namespace {

PartitionSource parse_partition_source(const std::string& text) {
  if (text == "true-labels") return PartitionSource::true_labels;
  if (text == "kmeans") return PartitionSource::kmeans;
  if (text == "trimmed-kmeans") return PartitionSource::trimmed_kmeans;
  if (text == "external") return PartitionSource::external;
  throw DataError("unknown partition source '" + text + "'");
}

}  // namespace

IndexReport parse_index_report_csv_row(const std::string& line) {
  const auto f = split_csv_line(line);
  if (f.size() != 12) throw DataError("index report csv: expected 12 fields");
  IndexReport r;
  r.k = static_cast<int>(parse_i64(f[0]));
  r.p = parse_u64(f[1]);
  r.alpha = parse_double(f[2]);
  if (f[3] != "none") r.projection = parse_projection_kind(f[3]);
  r.center_kind = parse_center_kind(f[4]);
  r.partition = parse_partition_source(f[5]);
  r.seed = parse_u64(f[6]);
  r.n_used = parse_u64(f[7]);
  r.abdm = parse_double(f[8]);
  r.awdm = parse_double(f[9]);
  r.bwdm = parse_double(f[10]);
  r.degenerate = f[11] == "1";
  return r;
}

std::string index_report_json(const IndexReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["p"] = r.p;
  j["alpha"] = r.alpha;
  j["projection"] = r.projection ? to_string(*r.projection) : std::string("none");
  j["center_kind"] = to_string(r.center_kind);
  j["partition"] = to_string(r.partition);
  j["seed"] = r.seed;
  j["n_used"] = r.n_used;
  j["abdm"] = r.abdm;
  j["awdm"] = r.awdm;
  if (r.degenerate)
    j["bwdm"] = "inf";
  else
    j["bwdm"] = r.bwdm;
  j["degenerate"] = r.degenerate;
  return j.dump();
}

}  // namespace hdbwdm
