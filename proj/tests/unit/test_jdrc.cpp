#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>

#include "innoscope/error.hpp"
#include "innoscope/jdrc.hpp"
#include "oracles.hpp"

using namespace innoscope;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = z(rng);
  }
  return m;
}

const Eigen::MatrixXd& fixture_std() {
  static const Eigen::MatrixXd x = standardize(load_scoreboard_file(oracle::fixture_path())).data;
  return x;
}

// Lloyd iterations from a partition, written independently of the library.
double lloyd_from(const Eigen::MatrixXd& x, std::vector<int> labels, int k) {
  for (int it = 0; it < 500; ++it) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> n(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      c.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
      ++n[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int l = 0; l < k; ++l) c.row(l) /= n[static_cast<std::size_t>(l)];
    std::vector<int> next(labels.size());
    std::vector<double> dist(labels.size());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      int arg = 0;
      double best = (x.row(i) - c.row(0)).squaredNorm();
      for (int l = 1; l < k; ++l) {
        const double d = (x.row(i) - c.row(l)).squaredNorm();
        if (d < best) {
          best = d;
          arg = l;
        }
      }
      next[static_cast<std::size_t>(i)] = arg;
      dist[static_cast<std::size_t>(i)] = best;
    }
    // An emptied cluster takes the farthest point of a cluster that can spare one.
    for (int l = 0; l < k; ++l) {
      std::vector<int> count(static_cast<std::size_t>(k), 0);
      for (int v : next) ++count[static_cast<std::size_t>(v)];
      if (count[static_cast<std::size_t>(l)] > 0) continue;
      std::size_t pick = 0;
      double far = -1.0;
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (count[static_cast<std::size_t>(next[i])] >= 2 && dist[i] > far) {
          far = dist[i];
          pick = i;
        }
      }
      next[pick] = l;
      dist[pick] = 0.0;
    }
    if (next == labels) break;
    labels = next;
  }
  return oracle::within_ss(x, labels, k);
}

void check_model_invariants(const JdrcModel& m, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd ata = m.A.transpose() * m.A;
  CHECK((ata - Eigen::MatrixXd::Identity(m.q(), m.q())).cwiseAbs().maxCoeff() < 1e-9);
  const Eigen::MatrixXd xa = x * m.A;
  for (int c = 0; c < m.k(); ++c) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(m.q());
    int n = 0;
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      if (m.labels[i] == c) {
        mean += xa.row(static_cast<Eigen::Index>(i));
        ++n;
      }
    }
    REQUIRE(n >= 1);
    CHECK((mean / n - m.Y.row(c)).cwiseAbs().maxCoeff() < 1e-9);
  }
  const Eigen::MatrixXd u = m.membership();
  CHECK((u.rowwise().sum().array() - 1.0).abs().maxCoeff() == 0.0);
  for (std::size_t t = 1; t < m.objective_trace.size(); ++t) {
    CHECK(m.objective_trace[t] <= m.objective_trace[t - 1]);
  }
}

}  // namespace

TEST_CASE("FKM matches the bipartition brute force for n <= 8, k = 2, q = 1") {
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 6 + trial % 3;
    const Eigen::MatrixXd x = gaussian(n, 2, 100 + static_cast<std::uint64_t>(trial));
    const auto brute = oracle::fkm_k2_q1(x);
    FitOptions opts;
    opts.restarts = 60;
    opts.seed = static_cast<std::uint64_t>(trial);
    const JdrcModel m = fit_fkm(x, 2, 1, opts);
    CHECK(brute.objective <= m.objective + 1e-9);
    CHECK(std::abs(m.objective - brute.objective) < 1e-9);
    CHECK(fkm_objective(x, m.A, m.labels, 2) == doctest::Approx(m.objective).epsilon(1e-12));
  }
}

TEST_CASE("q = p reduces FKM to k-means") {
  const auto planted = oracle::planted_subspace(240, 14, 14, 4, 3.0, 1.0, 1.0, 5);
  const Eigen::MatrixXd& x = planted.x;
  FitOptions opts;
  opts.restarts = 20;
  const JdrcModel m = fit_fkm(x, 4, 14, opts);
  const auto km = oracle::kmeans(x, 4, 50, 9);
  CHECK(std::abs(m.objective - km.objective) < 1e-9);
  CHECK(std::abs(m.objective - oracle::within_ss(x, m.labels, 4)) < 1e-9);

  // Same starting partition: FKM with q = p follows Lloyd exactly.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<int> start(static_cast<std::size_t>(x.rows()));
    for (std::size_t i = 0; i < start.size(); ++i) start[i] = static_cast<int>(i % 4);
    std::shuffle(start.begin(), start.end(), rng);
    const JdrcModel f = fit_from_partition(JdrcMethod::fkm, x, start, 4, 14, 0.0, 500);
    CHECK(std::abs(f.objective - lloyd_from(x, start, 4)) < 1e-9);
    const KMeansResult lib = kmeans_from_partition(x, start, 4, 500);
    CHECK(std::abs(lib.objective - lloyd_from(x, start, 4)) < 1e-9);
  }

  const JdrcModel r = fit_rkm(x, 4, 14, opts);
  CHECK(std::abs(r.objective - km.objective) < 1e-9);
}

TEST_CASE("objective trace is non-increasing on 100 seeded runs") {
  const Eigen::MatrixXd& x = fixture_std();
  int violations = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    FitOptions opts;
    opts.seed = seed;
    opts.restarts = 1;
    opts.init = seed % 2 ? InitStrategy::random_subspace : InitStrategy::full_space_kmeans;
    const JdrcModel m = fit_fkm(x, 4, 2, opts);
    for (std::size_t t = 1; t < m.objective_trace.size(); ++t) violations += m.objective_trace[t] > m.objective_trace[t - 1];
    CHECK(m.objective == m.objective_trace.back());
  }
  CHECK(violations == 0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    FitOptions opts;
    opts.seed = seed;
    opts.restarts = 1;
    const JdrcModel m = fit_rkm(x, 4, 2, opts);
    for (std::size_t t = 1; t < m.objective_trace.size(); ++t) violations += m.objective_trace[t] > m.objective_trace[t - 1];
  }
  CHECK(violations == 0);
}

TEST_CASE("planted subspace recovery") {
  SUBCASE("FKM: clusters in a low-variance subspace, masking noise elsewhere") {
    const auto planted = oracle::planted_subspace(400, 14, 2, 4, 2.5, 0.25, 1.0, 21);
    FitOptions opts;
    opts.restarts = 30;
    const JdrcModel m = fit_fkm(planted.x, 4, 2, opts);
    CHECK(oracle::ari(m.labels, planted.labels) >= 0.99);
    CHECK(adjusted_rand_index(m.labels, planted.labels) == doctest::Approx(oracle::ari(m.labels, planted.labels)));
    check_model_invariants(m, planted.x);
  }
  SUBCASE("RKM: clusters in the high-variance subspace") {
    const auto planted = oracle::planted_subspace(400, 14, 2, 4, 4.0, 0.5, 0.05, 22);
    FitOptions opts;
    opts.restarts = 30;
    const JdrcModel m = fit_rkm(planted.x, 4, 2, opts);
    CHECK(oracle::ari(m.labels, planted.labels) >= 0.99);
    check_model_invariants(m, planted.x);
  }
}

TEST_CASE("degenerate n = k fits") {
  const Eigen::MatrixXd x = gaussian(5, 4, 8);
  FitOptions opts;
  opts.restarts = 5;
  const JdrcModel f = fit_fkm(x, 5, 2, opts);
  CHECK(std::abs(f.objective) < 1e-12);
  const Eigen::MatrixXd xa = x * f.A;
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK((xa.row(static_cast<Eigen::Index>(i)) - f.Y.row(f.labels[i])).cwiseAbs().maxCoeff() < 1e-9);
  }

  const JdrcModel r = fit_rkm(x, 5, 2, opts);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const Eigen::VectorXd sv = svd.singularValues();
  const double residual = sv.tail(sv.size() - 2).squaredNorm();
  CHECK(std::abs(r.objective - residual) < 1e-9);
}

TEST_CASE("ALS steps do not increase the objective") {
  const auto planted = oracle::planted_subspace(200, 8, 2, 3, 2.0, 0.5, 1.0, 31);
  std::vector<int> labels(200);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>((i * 13) % 3);
  const Eigen::MatrixXd a = update_projection(JdrcMethod::fkm, planted.x, labels, 3, 2);
  const double best = fkm_objective(planted.x, a, labels, 3);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd g(8, 2);
    for (Eigen::Index i = 0; i < 8; ++i) g(i, 0) = z(rng), g(i, 1) = z(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() * Eigen::MatrixXd::Identity(8, 2);
    CHECK(best <= fkm_objective(planted.x, q, labels, 3) + 1e-12);
  }
  const Eigen::MatrixXd ar = update_projection(JdrcMethod::rkm, planted.x, labels, 3, 2);
  const double best_r = rkm_objective(planted.x, ar, labels, 3);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd g(8, 2);
    for (Eigen::Index i = 0; i < 8; ++i) g(i, 0) = z(rng), g(i, 1) = z(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ() * Eigen::MatrixXd::Identity(8, 2);
    CHECK(best_r <= rkm_objective(planted.x, q, labels, 3) + 1e-12);
  }

  // Fixed point: another ALS pass from the fitted partition moves the objective by less than tol.
  FitOptions opts;
  opts.restarts = 10;
  const JdrcModel m = fit_fkm(planted.x, 3, 2, opts);
  const JdrcModel again = fit_from_partition(JdrcMethod::fkm, planted.x, m.labels, 3, 2);
  CHECK(std::abs(again.objective - m.objective) <= 1e-8 * m.objective);
}

TEST_CASE("serial and parallel restarts give identical models") {
  FitOptions opts;
  opts.restarts = 16;
  opts.parallel = false;
  const JdrcModel s = fit_fkm(fixture_std(), 4, 2, opts);
  opts.parallel = true;
  const JdrcModel p = fit_fkm(fixture_std(), 4, 2, opts);
  CHECK(s.A == p.A);
  CHECK(s.Y == p.Y);
  CHECK(s.labels == p.labels);
  CHECK(s.objective == p.objective);
  CHECK(s.best_restart == p.best_restart);
}

TEST_CASE("argument validation") {
  const Eigen::MatrixXd x = gaussian(10, 4, 1);
  CHECK_THROWS_AS(fit_fkm(x, 1, 2), ArgumentError);
  CHECK_THROWS_AS(fit_fkm(x, 11, 2), ArgumentError);
  CHECK_THROWS_AS(fit_fkm(x, 3, 0), ArgumentError);
  CHECK_THROWS_AS(fit_fkm(x, 3, 5), ArgumentError);
  FitOptions opts;
  opts.restarts = 2;
  CHECK_FALSE(fit_fkm(x, 2, 3, opts).warnings.empty());
  const JdrcModel m = fit_fkm(x, 2, 2, opts);
  CHECK_THROWS_AS(project(m, Eigen::MatrixXd::Zero(1, 3)), ArgumentError);
  CHECK(project(m, Eigen::MatrixXd::Zero(1, 4)).isZero());
}

TEST_CASE("assign and within_ss") {
  Eigen::MatrixXd y(2, 2);
  y << 0, 0, 2, 0;
  const std::vector<double> at_centroid{2.0, 0.0};
  CHECK(assign(y, at_centroid).cluster == 1);
  CHECK(assign(y, at_centroid).sq_dist == 0.0);
  const std::vector<double> midpoint{1.0, 0.0};
  CHECK(assign(y, midpoint).cluster == 0);

  Eigen::MatrixXd pts(4, 2);
  pts << 0, 0, 0, 2, 10, 0, 10, 2;
  const std::vector<int> labels{0, 0, 1, 1};
  const auto w = within_ss(labels, pts);
  CHECK(w.total == doctest::Approx(4.0));
  CHECK(w.per_cluster[0] == doctest::Approx(2.0));
  Eigen::MatrixXd same = Eigen::MatrixXd::Ones(4, 2);
  CHECK(within_ss(labels, same).total == 0.0);
  const std::vector<int> gap{0, 0, 2, 2};
  CHECK_THROWS_AS(within_ss(gap, pts), ArgumentError);
}

TEST_CASE("nearest_to_centroid matches an exhaustive scan") {
  const auto planted = oracle::planted_subspace(300, 14, 2, 4, 2.5, 0.3, 1.0, 41);
  IndicatorPanel panel;
  for (Eigen::Index i = 0; i < planted.x.rows(); ++i) {
    RegionYear r;
    r.region_id = "R" + std::to_string(1000 + i);
    r.year = 2020;
    r.euris_label = 1;
    for (Eigen::Index j = 0; j < 14; ++j) r.values[static_cast<std::size_t>(j)] = planted.x(i, j);
    panel.rows.push_back(r);
  }
  FitOptions opts;
  opts.restarts = 10;
  const JdrcModel m = fit_fkm(planted.x, 4, 2, opts);
  const auto nearest = nearest_to_centroid(m, panel, planted.x);
  const Eigen::MatrixXd xa = planted.x * m.A;
  for (int c = 0; c < 4; ++c) {
    double best = 1e300;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      if (m.labels[i] != c) continue;
      const double d = (xa.row(static_cast<Eigen::Index>(i)) - m.Y.row(c)).squaredNorm();
      if (d < best) best = d, arg = i;
    }
    CHECK(nearest[static_cast<std::size_t>(c)].row == arg);
    CHECK(nearest[static_cast<std::size_t>(c)].sq_dist_to_centroid == doctest::Approx(best).epsilon(1e-12));
  }
  for (const auto& p : reduced_points(m, panel, planted.x)) {
    CHECK(p.sq_dist_to_centroid == doctest::Approx((p.coords.transpose() - m.Y.row(p.cluster)).squaredNorm()));
  }
}

TEST_CASE("agreement matrix") {
  const std::vector<int> clusters{0, 0, 1, 1};
  const std::vector<int> classes{1, 2, 2, 2};
  const auto a = agreement_matrix(clusters, classes, 2, 2);
  CHECK(a.row_pct(0, 0) == doctest::Approx(50.0));
  CHECK(a.row_pct(0, 1) == doctest::Approx(50.0));
  CHECK(a.row_pct(1, 0) == doctest::Approx(0.0));
  CHECK(a.row_pct(1, 1) == doctest::Approx(100.0));
  CHECK(a.col_pct(0, 1) == doctest::Approx(100.0 / 3.0));

  const std::vector<int> same0{0, 1, 2, 3};
  const std::vector<int> same1{1, 2, 3, 4};
  const auto id = agreement_matrix(same0, same1, 4);
  for (int i = 0; i < 4; ++i) CHECK(id.row_pct(i, i) == 100.0);
  CHECK(id.counts.sum() == 4);
  const std::vector<int> short_labels{1, 2};
  CHECK_THROWS_AS(agreement_matrix(same0, short_labels, 4), ArgumentError);
}

TEST_CASE("adjusted Rand index agrees with the pair-counting oracle") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int t = 0; t < 10; ++t) {
    std::vector<int> a(80), b(80);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = pick(rng);
      b[i] = t % 2 ? pick(rng) : (a[i] + 1) % 4;
    }
    CHECK(adjusted_rand_index(a, b) == doctest::Approx(oracle::ari(a, b)).epsilon(1e-12));
  }
}
