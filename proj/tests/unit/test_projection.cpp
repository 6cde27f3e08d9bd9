#include <doctest.h>

#include "helpers.hpp"

#include <sstream>

using namespace hdbwdm;
using namespace testing_support;

TEST_SUITE("projection") {

TEST_CASE("fit_random_projection is deterministic and shaped p x d") {
  const auto a = fit_random_projection(500, 150, 42);
  const auto b = fit_random_projection(500, 150, 42);
  CHECK(a.matrix.rows() == 150);
  CHECK(a.matrix.cols() == 500);
  CHECK(a.matrix == b.matrix);
  CHECK(a.matrix != fit_random_projection(500, 150, 43).matrix);
  CHECK(a.centers.isZero());
  CHECK_THROWS_AS(fit_random_projection(10, 11, 1), DataError);
  CHECK_THROWS_AS(fit_random_projection(10, 0, 1), DataError);
}

TEST_CASE("random projection entries have variance 1/p") {
  for (std::size_t p : {150u, 300u}) {
    const auto m = fit_random_projection(500, p, 7 + p);
    const double n = static_cast<double>(m.matrix.size());
    const double mean = m.matrix.sum() / n;
    const double var = (m.matrix.array() - mean).square().sum() / (n - 1);
    CHECK(std::abs(var * static_cast<double>(p) - 1.0) < 0.05);
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(p) * n));
  }
}

TEST_CASE("random projection preserves squared norms on average") {
  Rng rng(21);
  Eigen::VectorXd x(200);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
  double acc = 0.0;
  const int seeds = 300;
  for (int s = 0; s < seeds; ++s) {
    const auto m = fit_random_projection(200, 20, static_cast<Seed>(1000 + s));
    acc += (m.matrix * x).squaredNorm() / x.squaredNorm();
  }
  const double avg = acc / seeds;
  CHECK(avg >= 0.95);
  CHECK(avg <= 1.05);
}

TEST_CASE("random projection is linear") {
  Rng rng(22);
  const auto m = fit_random_projection(40, 10, 5);
  const DataMatrix x = random_matrix(rng, 12, 40), y = random_matrix(rng, 12, 40);
  const double a = 2.5, b = -0.75;
  const DataMatrix lhs = project(a * x + b * y, m);
  const DataMatrix rhs = a * project(x, m) + b * project(y, m);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(project(DataMatrix::Zero(3, 40), m).isZero());
}

TEST_CASE("fit_pca on rank-1 data") {
  DataMatrix line(6, 2);
  for (int i = 0; i < 6; ++i) line.row(i) << i - 2.0, 2.0 * (i - 2.0);
  const auto m = fit_pca(line, 2);
  const double total = m.explained_variance.sum();
  CHECK(m.explained_variance(0) == doctest::Approx(total));
  CHECK(m.explained_variance(1) <= 1e-10 * total);
}

TEST_CASE("fit_pca three collinear points") {
  DataMatrix x(3, 2);
  x << 0, 0, 1, 0, 2, 0;
  const auto m = fit_pca(x, 1);
  CHECK(std::abs(m.matrix(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(m.matrix(0, 1)) < 1e-12);
  CHECK(m.explained_variance(0) == doctest::Approx(1.0));
}

TEST_CASE("fit_pca loadings are orthonormal, ordered and sign-fixed") {
  Rng rng(23);
  const DataMatrix x = random_matrix(rng, 60, 12);
  const auto m = fit_pca(x, 8);
  const Eigen::MatrixXd gram = m.matrix * m.matrix.transpose();
  CHECK((gram - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-8);
  for (Eigen::Index k = 1; k < 8; ++k) CHECK(m.explained_variance(k) <= m.explained_variance(k - 1));
  for (Eigen::Index k = 0; k < 8; ++k) {
    Eigen::Index arg = 0;
    m.matrix.row(k).cwiseAbs().maxCoeff(&arg);
    CHECK(m.matrix(k, arg) > 0.0);
  }
  const double total = (x.rowwise() - x.colwise().mean()).squaredNorm() / 59.0;
  CHECK(m.explained_variance.sum() <= total * (1 + 1e-12));
  CHECK(fit_pca(x, 12).explained_variance.sum() == doctest::Approx(total).epsilon(1e-10));
}

TEST_CASE("fit_pca projection is centred and invertible at full rank") {
  Rng rng(24);
  const DataMatrix x = random_matrix(rng, 30, 6, 3.0).rowwise() + Eigen::RowVectorXd::LinSpaced(6, -4, 9);
  const auto m = fit_pca(x, 6);
  const DataMatrix z = project(x, m);
  CHECK(z.colwise().mean().cwiseAbs().maxCoeff() < 1e-10);
  DataMatrix back = z * m.matrix;
  back.rowwise() += m.centers.transpose();
  CHECK((back - x).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("fit_pca rejects p beyond the attainable rank") {
  Rng rng(25);
  const DataMatrix x = random_matrix(rng, 5, 10);
  CHECK_NOTHROW(fit_pca(x, 4));
  try {
    fit_pca(x, 5);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("rank at most 4") != std::string::npos);
  }
  CHECK_THROWS_AS(fit_pca(random_matrix(rng, 1, 3), 1), DataError);
}

TEST_CASE("project shape and dimension checks") {
  const DataMatrix x = DataMatrix::Ones(550, 500);
  CHECK(project(x, fit_random_projection(500, 150, 1)).rows() == 550);
  CHECK(project(x, fit_random_projection(500, 150, 1)).cols() == 150);
  CHECK_THROWS_AS(project(DataMatrix::Ones(3, 499), fit_random_projection(500, 150, 1)), DataError);
}

TEST_CASE("distortion_profile on isometries") {
  Rng rng(26);
  const DataMatrix x = random_matrix(rng, 40, 8);
  auto prof = distortion_profile(x, x, 10000, 1);
  CHECK(prof.epsilon_hat == 0.0);
  CHECK(prof.pairs_sampled == 40 * 39 / 2);

  const Eigen::MatrixXd q = random_rotation(rng, 8);
  const DataMatrix rotated = x * q;
  prof = distortion_profile(x, rotated, 10000, 1);
  CHECK(prof.epsilon_hat <= 1e-10);
  CHECK(prof.min_ratio <= prof.max_ratio);
}

TEST_CASE("distortion_profile samples without replacement and skips duplicates") {
  Rng rng(27);
  DataMatrix x = random_matrix(rng, 200, 5);
  x.row(1) = x.row(0);
  const DataMatrix xp = 2.0 * x;
  const auto prof = distortion_profile(x, xp, 500, 9);
  CHECK(prof.pairs_sampled <= 500);
  CHECK(prof.pairs_sampled >= 499);
  CHECK(prof.min_ratio == doctest::Approx(4.0));
  CHECK(prof.epsilon_hat == doctest::Approx(3.0));
  const auto again = distortion_profile(x, xp, 500, 9);
  CHECK(again.ratios == prof.ratios);
  CHECK_THROWS_AS(distortion_profile(x.topRows(1), xp.topRows(1), 10, 1), DataError);
  CHECK_THROWS_AS(distortion_profile(x, xp.topRows(10), 10, 1), DataError);
}

TEST_CASE("random projection meets the JL bound on standard normal data") {
  Rng rng(28);
  const DataMatrix x = random_matrix(rng, 100, 500);
  const auto p = static_cast<std::size_t>(std::ceil(8.0 * std::log(100.0) / 0.25));
  CHECK(p == 148);
  for (Seed s = 0; s < 20; ++s) {
    const auto model = fit_random_projection(500, p, s);
    const auto prof = distortion_profile(x, project(x, model), 1000, s);
    CHECK(prof.fraction_within(0.5) >= 0.99);
  }
}

TEST_CASE("median distortion shrinks as p grows") {
  Rng rng(29);
  const DataMatrix x = random_matrix(rng, 80, 500);
  double prev = INFINITY;
  for (std::size_t p : {50u, 150u, 300u, 450u}) {
    std::vector<double> eps;
    for (Seed s = 0; s < 20; ++s)
      eps.push_back(distortion_profile(x, project(x, fit_random_projection(500, p, 100 + s)), 2000, s).epsilon_hat);
    const double med = median(eps);
    CHECK(med < prev);
    prev = med;
  }
}

TEST_CASE("projection model text format round-trips exactly") {
  Rng rng(30);
  const auto rp = fit_random_projection(9, 4, 77);
  const auto pca = fit_pca(random_matrix(rng, 20, 9), 3);
  for (const auto* m : {&rp, &pca}) {
    std::stringstream ss;
    write_projection_model(ss, *m);
    const auto back = read_projection_model(ss);
    CHECK(back.kind == m->kind);
    CHECK(back.seed == m->seed);
    CHECK(back.matrix == m->matrix);
    CHECK(back.centers == m->centers);
    CHECK(back.explained_variance == m->explained_variance);
  }
  std::stringstream bad("hdbwdm-projection 2\n");
  CHECK_THROWS_AS(read_projection_model(bad), DataError);
}

}  // TEST_SUITE
