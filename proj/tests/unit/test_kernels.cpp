#include <doctest.h>

#include <random>
#include <vector>

#include "innoscope/kernels.hpp"

using namespace innoscope::kernels;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = z(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("gram: serial and parallel agree bitwise and match a naive product") {
  const Eigen::MatrixXd x = random_matrix(1912, 14, 1);
  const Eigen::MatrixXd s = gram(x, Exec::serial);
  const Eigen::MatrixXd p = gram(x, Exec::parallel);
  CHECK(s == p);
  Eigen::MatrixXd naive = Eigen::MatrixXd::Zero(14, 14);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index a = 0; a < 14; ++a) {
      for (Eigen::Index b = 0; b < 14; ++b) naive(a, b) += x(i, a) * x(i, b);
    }
  }
  CHECK((naive - s).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(s == s.transpose());
}

TEST_CASE("nearest_centroid: serial and parallel agree, ties go to the lowest index") {
  const Eigen::MatrixXd pts = random_matrix(5000, 3, 2);
  const Eigen::MatrixXd cen = random_matrix(5, 3, 3);
  std::vector<int> ls(5000), lp(5000);
  std::vector<double> ds(5000), dp(5000);
  nearest_centroid(pts, cen, ls, ds, Exec::serial);
  nearest_centroid(pts, cen, lp, dp, Exec::parallel);
  CHECK(ls == lp);
  CHECK(ds == dp);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    int best = 0;
    double bd = (pts.row(i) - cen.row(0)).squaredNorm();
    for (int c = 1; c < 5; ++c) {
      const double d = (pts.row(i) - cen.row(c)).squaredNorm();
      if (d < bd) {
        bd = d;
        best = c;
      }
    }
    CHECK(ls[static_cast<std::size_t>(i)] == best);
  }

  Eigen::MatrixXd two(2, 1);
  two << -1, 1;
  Eigen::MatrixXd mid(1, 1);
  mid << 0;
  std::vector<int> l(1);
  std::vector<double> d(1);
  nearest_centroid(mid, two, l, d);
  CHECK(l[0] == 0);
  CHECK(d[0] == 1.0);
}

TEST_CASE("cluster_means: serial and parallel agree; empty clusters are zero") {
  const Eigen::MatrixXd pts = random_matrix(3000, 14, 4);
  std::vector<int> labels(3000);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>((i * 7) % 3);
  const Eigen::MatrixXd s = cluster_means(pts, labels, 4, Exec::serial);
  const Eigen::MatrixXd p = cluster_means(pts, labels, 4, Exec::parallel);
  CHECK(s == p);
  CHECK(s.row(3).isZero());
  Eigen::RowVectorXd mean0 = Eigen::RowVectorXd::Zero(14);
  int n0 = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) {
      mean0 += pts.row(static_cast<Eigen::Index>(i));
      ++n0;
    }
  }
  CHECK((mean0 / n0 - s.row(0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(max_threads() >= 1);
}
