#include "innoscope/kernels.hpp"

#include <limits>
#include <vector>

#include <omp.h>

#include "innoscope/error.hpp"

namespace innoscope::kernels {

namespace {

double dot_rows_order(const Eigen::MatrixXd& x, Eigen::Index a, Eigen::Index b) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) sum += x(i, a) * x(i, b);
  return sum;
}

void nearest_one(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids, Eigen::Index i,
                 int& label, double& dist) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    double d = 0.0;
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      const double diff = points(i, j) - centroids(c, j);
      d += diff * diff;
    }
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  label = best;
  dist = best_d;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

Eigen::MatrixXd gram(const Eigen::MatrixXd& x, Exec exec) {
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd out(p, p);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(p * (p + 1) / 2));
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = a; b < p; ++b) pairs.emplace_back(a, b);
  const auto n_pairs = static_cast<std::ptrdiff_t>(pairs.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < n_pairs; ++idx) {
      const auto [a, b] = pairs[static_cast<std::size_t>(idx)];
      const double v = dot_rows_order(x, a, b);
      out(a, b) = v;
      out(b, a) = v;
    }
  } else {
    for (std::ptrdiff_t idx = 0; idx < n_pairs; ++idx) {
      const auto [a, b] = pairs[static_cast<std::size_t>(idx)];
      const double v = dot_rows_order(x, a, b);
      out(a, b) = v;
      out(b, a) = v;
    }
  }
  return out;
}

void nearest_centroid(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                      std::span<int> labels, std::span<double> sq_dist, Exec exec) {
  const Eigen::Index n = points.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n || static_cast<Eigen::Index>(sq_dist.size()) != n) {
    throw ArgumentError("output spans must match the number of points");
  }
  if (centroids.rows() == 0 || centroids.cols() != points.cols()) {
    throw ArgumentError("centroid matrix shape mismatch");
  }
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) nearest_one(points, centroids, i, labels[i], sq_dist[i]);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) nearest_one(points, centroids, i, labels[i], sq_dist[i]);
  }
}

Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& points, std::span<const int> labels, int k,
                              Exec exec) {
  const Eigen::Index n = points.rows();
  const Eigen::Index q = points.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n) throw ArgumentError("label count mismatch");
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) {
    if (l < 0 || l >= k) throw ArgumentError("label out of range");
    ++counts[static_cast<std::size_t>(l)];
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, q);
  auto column = [&](Eigen::Index j) {
    std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < n; ++i) sums[static_cast<std::size_t>(labels[i])] += points(i, j);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) out(c, j) = sums[c] / static_cast<double>(counts[c]);
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < q; ++j) column(j);
  } else {
    for (Eigen::Index j = 0; j < q; ++j) column(j);
  }
  return out;
}

}  // namespace innoscope::kernels
