#include <doctest.h>

#include "helpers.hpp"

#include <cmath>
#include <limits>

using namespace hdbwdm;
using namespace testing_support;

namespace {

ClusterCenters centers_of(std::initializer_list<std::initializer_list<double>> rows) {
  ClusterCenters c;
  c.centers.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) c.centers(i, j++) = v;
    ++i;
  }
  return c;
}

Partition labels(std::vector<int> l) { return make_partition(std::move(l), PartitionSource::external); }

// Random labelled data where every cluster keeps at least two members.
struct Labelled {
  DataMatrix x;
  Partition part;
};

Labelled random_labelled(Rng& rng, Eigen::Index n, Eigen::Index d, int k) {
  Labelled out;
  out.x = random_matrix(rng, n, d, 3.0);
  std::vector<int> l(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < l.size(); ++i)
    l[i] = i < static_cast<std::size_t>(2 * k) ? static_cast<int>(i) % k : static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  for (int c = 0; c < k; ++c) out.x.row(c) += Eigen::RowVectorXd::Constant(d, 6.0 * c);
  out.part = labels(l);
  return out;
}

}  // namespace

TEST_SUITE("validity") {

TEST_CASE("abdm examples") {
  CHECK(abdm(centers_of({{0, 0}, {3, 4}})) == doctest::Approx(5.0));
  CHECK(abdm(centers_of({{0, 0}, {3, 0}, {3, 4}})) == doctest::Approx(4.0));
  CHECK(abdm(centers_of({{1, 1}, {1, 1}, {1, 1}})) == 0.0);
  CHECK_THROWS_AS(abdm(centers_of({{1, 1}})), DataError);
}

TEST_CASE("awdm examples") {
  const DataMatrix x = column({0, 1, 2, 10, 11, 12});
  const Partition p = labels({0, 0, 0, 1, 1, 1});
  const auto c = cluster_centers(x, p, CenterKind::medoid);
  const auto a = awdm(x, p, c);
  CHECK(a.value == doctest::Approx(1.0));
  CHECK(a.n_used == 6);

  const DataMatrix xt = column({0, 1, 2, 50, 10, 11, 12});
  const Partition pt = labels({0, 0, 0, -1, 1, 1, 1});
  const auto at = awdm(xt, pt, cluster_centers(xt, pt, CenterKind::medoid));
  CHECK(at.value == doctest::Approx(1.0));
  CHECK(at.n_used == 6);

  const DataMatrix dup = column({3, 3, 7, 7});
  const Partition pd = labels({0, 0, 1, 1});
  CHECK(awdm(dup, pd, cluster_centers(dup, pd, CenterKind::medoid)).value == 0.0);

  const Partition tight = labels({0, 1, -1, -1});
  CHECK_THROWS_AS(awdm(dup, tight, cluster_centers(dup, tight, CenterKind::medoid)), DataError);
}

TEST_CASE("bwdm examples for both center kinds") {
  const DataMatrix x = column({0, 1, 2, 10, 11, 12});
  const Partition p = labels({0, 0, 0, 1, 1, 1});
  for (auto kind : {CenterKind::spatial_median, CenterKind::medoid}) {
    const auto r = bwdm(x, p, kind);
    CHECK(r.abdm == doctest::Approx(10.0));
    CHECK(r.awdm == doctest::Approx(1.0));
    CHECK(r.bwdm == doctest::Approx(10.0));
    CHECK_FALSE(r.degenerate);
    CHECK(r.k == 2);
    CHECK(r.p == 1);
    CHECK(r.center_kind == kind);
  }
}

TEST_CASE("bwdm flags zero dispersion and penalises coincident centers") {
  const DataMatrix dup = column({3, 3, 7, 7});
  const auto r = bwdm(dup, labels({0, 0, 1, 1}), CenterKind::medoid);
  CHECK(r.degenerate);
  CHECK(std::isinf(r.bwdm));
  CHECK(r.abdm == doctest::Approx(4.0));

  const DataMatrix same = column({0, 1, 2, 0, 1, 2});
  CHECK(bwdm(same, labels({0, 0, 0, 1, 1, 1}), CenterKind::medoid).bwdm == 0.0);
}

TEST_CASE("bwdm equals abdm over awdm from its own fields") {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_labelled(rng, 30, 3, 3);
    const auto r = bwdm(d.x, d.part, trial % 2 ? CenterKind::medoid : CenterKind::spatial_median);
    CHECK(rel_diff(r.bwdm, r.abdm / r.awdm) <= 1e-12);
  }
}

TEST_CASE("bwdm matches the direct formula oracle on small instances") {
  Rng rng(42);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<Eigen::Index>(4 + rng.below(5));  // 4..8
    const auto d = static_cast<Eigen::Index>(1 + rng.below(2));
    const int k = 2 + static_cast<int>(rng.below(2));
    if (n <= k) continue;
    const auto data = random_labelled(rng, n, d, k);
    const double expected = oracle::bwdm_medoid(matrix_to_rows(data.x), data.part.labels, k);
    const auto r = bwdm(data.x, data.part, CenterKind::medoid);
    if (std::isinf(expected)) {
      CHECK(r.degenerate);
      continue;
    }
    CHECK(rel_diff(r.bwdm, expected) <= 1e-12);
    ++checked;
  }
  CHECK(checked > 250);
}

TEST_CASE("bwdm is scale equivariant in its parts and invariant as a ratio") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_labelled(rng, 24, 3, 3);
    const double s = 0.01 + 100.0 * rng.uniform();
    const auto kind = trial % 2 ? CenterKind::medoid : CenterKind::spatial_median;
    const auto a = bwdm(d.x, d.part, kind);
    const auto b = bwdm(DataMatrix(d.x * s), d.part, kind);
    CHECK(rel_diff(b.abdm, s * a.abdm) <= 1e-10);
    CHECK(rel_diff(b.awdm, s * a.awdm) <= 1e-10);
    CHECK(rel_diff(b.bwdm, a.bwdm) <= 1e-10);
  }
}

TEST_CASE("bwdm is invariant under rotation plus translation") {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_labelled(rng, 24, 4, 3);
    const Eigen::MatrixXd q = random_rotation(rng, 4);
    Eigen::RowVectorXd t(4);
    for (Eigen::Index j = 0; j < 4; ++j) t(j) = 50.0 * rng.normal();
    const DataMatrix moved = (d.x * q).rowwise() + t;
    const auto kind = trial % 2 ? CenterKind::medoid : CenterKind::spatial_median;
    CHECK(rel_diff(bwdm(moved, d.part, kind).bwdm, bwdm(d.x, d.part, kind).bwdm) <= 1e-8);
  }
}

TEST_CASE("bwdm is invariant under label permutation") {
  Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = random_labelled(rng, 20, 2, 4);
    std::vector<int> perm{0, 1, 2, 3};
    for (int i = 3; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
    const auto kind = trial % 2 ? CenterKind::medoid : CenterKind::spatial_median;
    CHECK(rel_diff(bwdm(d.x, relabel(d.part, perm), kind).bwdm, bwdm(d.x, d.part, kind).bwdm) <= 1e-12);
  }
}

TEST_CASE("raising alpha never raises the retained count") {
  Rng rng(46);
  const DataMatrix x = random_matrix(rng, 80, 3);
  std::size_t prev = 81;
  for (double alpha : {0.0, 0.05, 0.1, 0.2, 0.3, 0.45}) {
    ClusterOptions o;
    o.k = 3;
    o.alpha = alpha;
    o.seed = 3;
    const auto r = bwdm(x, trimmed_kmeans(x, o).partition, CenterKind::medoid);
    CHECK(r.n_used <= prev);
    CHECK(r.n_used == 80 - trim_count(80, alpha));
    prev = r.n_used;
  }
}

TEST_CASE("hd_bwdm on the toy set reduces to plain bwdm") {
  const DataMatrix x = column({0, 1, 2, 10, 11, 12});
  PipelineConfig cfg;
  cfg.k = 2;
  cfg.p = 1;
  cfg.alpha = 0.0;
  cfg.projection = std::nullopt;
  cfg.scale = false;
  cfg.clusterer = Clusterer::kmeans;
  cfg.seed = 5;
  const auto r = hd_bwdm(x, cfg);
  CHECK(r.bwdm == doctest::Approx(10.0));
  CHECK_FALSE(r.projection.has_value());
  CHECK(r.partition == PartitionSource::kmeans);

  cfg.projection = ProjectionKind::pca;  // p = d orthonormal: an isometry
  CHECK(hd_bwdm(x, cfg).bwdm == doctest::Approx(10.0));
}

TEST_CASE("hd_bwdm with full-rank pca equals bwdm on scaled data") {
  Rng rng(47);
  const auto d = random_labelled(rng, 60, 5, 3);
  PipelineConfig cfg;
  cfg.k = 3;
  cfg.p = 5;
  cfg.alpha = 0.0;
  cfg.projection = ProjectionKind::pca;
  cfg.clusterer = Clusterer::external_labels;
  const auto r = hd_bwdm(d.x, cfg, &d.part);
  const DataMatrix scaled = robust_scale_apply(d.x, robust_scale_fit(d.x));
  CHECK(rel_diff(r.bwdm, bwdm(scaled, d.part, CenterKind::medoid).bwdm) <= 1e-6);
  CHECK(r.partition == PartitionSource::true_labels);
}

TEST_CASE("hd_bwdm excludes contamination rows from true-label scoring") {
  MixtureConfig mc;
  mc.n_inliers = 100;
  mc.d = 40;
  mc.k_true = 3;
  mc.seed = 8;
  const auto ds = generate(mc);
  PipelineConfig cfg;
  cfg.k = 3;
  cfg.p = 20;
  cfg.clusterer = Clusterer::external_labels;
  cfg.seed = 2;
  const Partition truth = ds.true_partition();
  const auto r = hd_bwdm(ds.x, cfg, &truth);
  CHECK(r.n_used == 100);
  CHECK(r.alpha == doctest::Approx(10.0 / 110.0));
  CHECK(r.p == 20);
  CHECK(r.projection == ProjectionKind::random);
}

TEST_CASE("hd_bwdm scores truth above kmeans on the contaminated design") {
  MixtureConfig mc;
  mc.seed = 3;
  const auto ds = generate(mc);
  PipelineConfig cfg;
  cfg.seed = 3;
  const Embedding emb = embed(ds.x, cfg);
  const Partition truth = ds.true_partition();
  PipelineConfig truth_cfg = cfg;
  truth_cfg.clusterer = Clusterer::external_labels;
  PipelineConfig km_cfg = cfg;
  km_cfg.clusterer = Clusterer::kmeans;
  const double t = score_partition(emb, partition_embedding(emb, truth_cfg, &truth), truth_cfg).bwdm;
  const double k = score_partition(emb, partition_embedding(emb, km_cfg), km_cfg).bwdm;
  CHECK(t > 2.0 * k);
}

TEST_CASE("hd_bwdm is deterministic and rejects bad configs") {
  Rng rng(48);
  const DataMatrix x = random_matrix(rng, 50, 20);
  PipelineConfig cfg;
  cfg.k = 3;
  cfg.p = 10;
  cfg.seed = 77;
  const auto a = hd_bwdm(x, cfg);
  const auto b = hd_bwdm(x, cfg);
  CHECK(a.bwdm == b.bwdm);
  CHECK(a.seed == 77);

  PipelineConfig bad = cfg;
  bad.p = 21;
  CHECK_THROWS_AS(hd_bwdm(x, bad), DataError);
  bad = cfg;
  bad.k = 1;
  CHECK_THROWS_AS(hd_bwdm(x, bad), DataError);
  bad = cfg;
  bad.alpha = 0.5;
  CHECK_THROWS_AS(hd_bwdm(x, bad), DataError);
  bad = cfg;
  bad.clusterer = Clusterer::external_labels;
  CHECK_THROWS_AS(hd_bwdm(x, bad), DataError);
}

TEST_CASE("select_k finds three separated blobs in ten dimensions") {
  int hits = 0;
  for (Seed s = 0; s < 10; ++s) {
    Rng rng(derive_seed(900, {s}));
    DataMatrix x(90, 10);
    for (Eigen::Index i = 0; i < 90; ++i)
      for (Eigen::Index j = 0; j < 10; ++j) x(i, j) = (i % 3 != 0 && j == i % 3 ? 20.0 : 0.0) + rng.normal();
    PipelineConfig cfg;
    cfg.alpha = 0.0;
    cfg.projection = std::nullopt;
    cfg.p = 10;
    cfg.seed = s;
    const auto res = select_k(x, 2, 6, cfg);
    CHECK(res.reports.size() == 5);
    hits += res.k_star == 3;
  }
  CHECK(hits >= 9);
}

TEST_CASE("select_k reports an argmax on a single blob and checks its range") {
  Rng rng(49);
  const DataMatrix x = random_matrix(rng, 60, 2);
  PipelineConfig cfg;
  cfg.alpha = 0.0;
  cfg.projection = std::nullopt;
  cfg.p = 2;
  const auto res = select_k(x, 2, 5, cfg);
  double best = -1;
  int arg = 0;
  for (const auto& r : res.reports)
    if (r.bwdm > best) {
      best = r.bwdm;
      arg = r.k;
    }
  CHECK(res.k_star == arg);
  CHECK_THROWS_AS(select_k(x, 1, 5, cfg), DataError);
  CHECK_THROWS_AS(select_k(x, 2, 31, cfg), DataError);
  CHECK_NOTHROW(select_k(x, 2, 30, cfg));
}

TEST_CASE("select_k breaks ties toward the smaller K") {
  // Two coincident pairs of identical points: every K >= 2 is degenerate.
  const DataMatrix x = column({0, 0, 0, 5, 5, 5, 9, 9, 9});
  PipelineConfig cfg;
  cfg.alpha = 0.0;
  cfg.projection = std::nullopt;
  cfg.scale = false;
  cfg.p = 1;
  const auto res = select_k(x, 2, 3, cfg);
  CHECK(std::isinf(res.reports[1].bwdm));
  CHECK(res.k_star == 3);
  const DataMatrix y = column({0, 0, 5, 5, 9, 9, 20, 20});
  const auto tie = select_k(y, 4, 4, cfg);
  CHECK(tie.k_star == 4);
}

TEST_CASE("index report csv and json") {
  IndexReport r;
  r.abdm = 10;
  r.awdm = 1;
  r.bwdm = 10;
  r.k = 2;
  r.p = 150;
  r.alpha = 0.1;
  r.projection = ProjectionKind::pca;
  r.center_kind = CenterKind::spatial_median;
  r.partition = PartitionSource::trimmed_kmeans;
  r.seed = 12345678901234ULL;
  r.n_used = 495;
  const std::string row = index_report_csv_row(r);
  CHECK(row == "2,150,0.1,pca,smedian,trimmed-kmeans,12345678901234,495,10,1,10,0");
  const auto back = parse_index_report_csv_row(row);
  CHECK(back.bwdm == r.bwdm);
  CHECK(back.seed == r.seed);
  CHECK(back.projection == r.projection);
  CHECK(back.center_kind == r.center_kind);
  CHECK(back.partition == r.partition);

  r.degenerate = true;
  r.bwdm = std::numeric_limits<double>::infinity();
  const std::string js = index_report_json(r);
  CHECK(js.find("\"bwdm\":\"inf\"") != std::string::npos);
  CHECK(js.find("\"degenerate\":true") != std::string::npos);
}

}  // TEST_SUITE
