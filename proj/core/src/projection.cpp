#include "hdbwdm/projection.hpp"

#include "hdbwdm/csv_io.hpp"
#include "hdbwdm/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_set>

namespace hdbwdm {

std::string to_string(ProjectionKind kind) {
  return kind == ProjectionKind::random ? "rp" : "pca";
}

ProjectionKind parse_projection_kind(const std::string& text) {
  if (text == "rp" || text == "random") return ProjectionKind::random;
  if (text == "pca") return ProjectionKind::pca;
  throw DataError("unknown projection kind '" + text + "' (expected rp or pca)");
}

ProjectionModel fit_random_projection(std::size_t d, std::size_t p, Seed seed) {
  if (p == 0 || p > d)
    throw DataError("fit_random_projection: need 1 <= p <= d (p=" + std::to_string(p) +
                    ", d=" + std::to_string(d) + ")");
  ProjectionModel model;
  model.kind = ProjectionKind::random;
  model.seed = seed;
  model.centers = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  model.matrix.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(d));
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  Rng rng(seed);
  for (Eigen::Index i = 0; i < model.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < model.matrix.cols(); ++j) model.matrix(i, j) = scale * rng.normal();
  return model;
}

ProjectionModel fit_pca(const DataMatrix& x, std::size_t p) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto d = static_cast<std::size_t>(x.cols());
  if (n < 2) throw DataError("fit_pca: need at least 2 observations");
  require_finite(x, "fit_pca");
  const std::size_t max_rank = std::min(n - 1, d);
  if (p == 0 || p > max_rank)
    throw DataError("fit_pca: requested " + std::to_string(p) +
                    " components but centred data attains rank at most " + std::to_string(max_rank));

  ProjectionModel model;
  model.kind = ProjectionKind::pca;
  model.centers = x.colwise().mean().transpose();
  const Eigen::MatrixXd centred = x.rowwise() - model.centers.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();

  const auto pp = static_cast<Eigen::Index>(p);
  model.matrix.resize(pp, x.cols());
  model.explained_variance.resize(pp);
  for (Eigen::Index k = 0; k < pp; ++k) {
    Eigen::VectorXd axis = v.col(k);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    model.matrix.row(k) = axis.transpose();
    model.explained_variance(k) = sv(k) * sv(k) / static_cast<double>(n - 1);
  }
  return model;
}

DataMatrix project(const DataMatrix& x, const ProjectionModel& model) {
  if (static_cast<std::size_t>(x.cols()) != model.source_dim())
    throw DataError("project: data has " + std::to_string(x.cols()) + " columns, model expects " +
                    std::to_string(model.source_dim()));
  if (model.kind == ProjectionKind::random) {
    DataMatrix out = x * model.matrix.transpose();
    return out;
  }
  DataMatrix out = (x.rowwise() - model.centers.transpose()) * model.matrix.transpose();
  return out;
}

double DistortionProfile::fraction_within(double eps) const {
  if (ratios.empty()) return 0.0;
  const auto inside = std::count_if(ratios.begin(), ratios.end(), [eps](double r) {
    return r >= 1.0 - eps && r <= 1.0 + eps;
  });
  return static_cast<double>(inside) / static_cast<double>(ratios.size());
}

namespace {

// Maps k in [0, n(n-1)/2) to the k-th pair (i, j), i < j, in row-major order.
std::pair<std::size_t, std::size_t> pair_from_index(std::uint64_t k, std::size_t n) {
  std::size_t i = 0;
  std::uint64_t row_len = n - 1;
  while (k >= row_len) {
    k -= row_len;
    ++i;
    --row_len;
  }
  return {i, i + 1 + static_cast<std::size_t>(k)};
}

}  // namespace

DistortionProfile distortion_profile(const DataMatrix& x, const DataMatrix& xp,
                                     std::size_t max_pairs, Seed seed) {
  if (x.rows() != xp.rows()) throw DataError("distortion_profile: row counts differ");
  if (x.rows() < 2) throw DataError("distortion_profile: need at least 2 rows");
  const auto n = static_cast<std::size_t>(x.rows());
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  std::vector<std::uint64_t> picks;
  if (total <= max_pairs) {
    picks.resize(total);
    for (std::uint64_t k = 0; k < total; ++k) picks[k] = k;
  } else {
    // Floyd's algorithm: max_pairs distinct indices from [0, total).
    Rng rng(seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(max_pairs * 2);
    for (std::uint64_t j = total - max_pairs; j < total; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    picks.assign(chosen.begin(), chosen.end());
    std::sort(picks.begin(), picks.end());
  }

  DistortionProfile prof;
  prof.min_ratio = std::numeric_limits<double>::infinity();
  prof.max_ratio = -std::numeric_limits<double>::infinity();
  prof.ratios.reserve(picks.size());
  for (std::uint64_t k : picks) {
    const auto [i, j] = pair_from_index(k, n);
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    const double orig = (x.row(ii) - x.row(jj)).squaredNorm();
    if (orig == 0.0) continue;
    const double ratio = (xp.row(ii) - xp.row(jj)).squaredNorm() / orig;
    prof.ratios.push_back(ratio);
    prof.min_ratio = std::min(prof.min_ratio, ratio);
    prof.max_ratio = std::max(prof.max_ratio, ratio);
  }
  prof.pairs_sampled = prof.ratios.size();
  if (prof.pairs_sampled == 0) {
    prof.min_ratio = prof.max_ratio = 1.0;
    return prof;
  }
  prof.epsilon_hat = std::max(std::abs(prof.min_ratio - 1.0), std::abs(prof.max_ratio - 1.0));
  return prof;
}

void write_projection_model(std::ostream& out, const ProjectionModel& model) {
  out << "hdbwdm-projection 1\n";
  out << "kind " << to_string(model.kind) << '\n';
  out << "source_dim " << model.source_dim() << '\n';
  out << "target_dim " << model.target_dim() << '\n';
  out << "seed " << model.seed << '\n';
  out << "centers " << join_values(model.centers) << '\n';
  out << "explained_variance " << join_values(model.explained_variance) << '\n';
  out << "matrix\n";
  for (Eigen::Index i = 0; i < model.matrix.rows(); ++i)
    out << join_values(model.matrix.row(i).transpose()) << '\n';
}

namespace {

std::string expect_field(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("projection model: missing '" + key + "' line");
  if (line.compare(0, key.size(), key) != 0)
    throw DataError("projection model: expected '" + key + "', got '" + line + "'");
  if (line.size() == key.size()) return {};
  if (line[key.size()] != ' ') throw DataError("projection model: malformed '" + key + "' line");
  return line.substr(key.size() + 1);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

ProjectionModel read_projection_model(std::istream& in) {
  if (expect_field(in, "hdbwdm-projection") != "1")
    throw DataError("projection model: unsupported format version");
  ProjectionModel model;
  model.kind = parse_projection_kind(expect_field(in, "kind"));
  const auto d = static_cast<Eigen::Index>(parse_u64(expect_field(in, "source_dim")));
  const auto p = static_cast<Eigen::Index>(parse_u64(expect_field(in, "target_dim")));
  model.seed = parse_u64(expect_field(in, "seed"));
  model.centers = to_vector(parse_value_list(expect_field(in, "centers")));
  model.explained_variance = to_vector(parse_value_list(expect_field(in, "explained_variance")));
  expect_field(in, "matrix");
  if (model.centers.size() != d) throw DataError("projection model: centers length mismatch");
  model.matrix.resize(p, d);
  std::string line;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!std::getline(in, line)) throw DataError("projection model: truncated matrix");
    const auto row = parse_value_list(line);
    if (static_cast<Eigen::Index>(row.size()) != d)
      throw DataError("projection model: matrix row " + std::to_string(i) + " has wrong length");
    for (Eigen::Index j = 0; j < d; ++j) model.matrix(i, j) = row[static_cast<std::size_t>(j)];
  }
  return model;
}

}  // namespace hdbwdm
