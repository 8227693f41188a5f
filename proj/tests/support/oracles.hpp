#pragma once

// Independent reference computations used by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline const char* fixture_path() { return INNOSCOPE_FIXTURE; }

// Holm by definition: adj_i = min(1, max over p_j <= p_i of (m - rank_j) * p_j),
// rank_j = number of p strictly below p_j.
inline std::vector<double> holm(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (p[j] > p[i]) continue;
      std::size_t rank = 0;
      for (std::size_t l = 0; l < m; ++l) rank += p[l] < p[j];
      best = std::max(best, std::min(1.0, static_cast<double>(m - rank) * p[j]));
    }
    out[i] = best;
  }
  return out;
}

// Fraction of sample values <= t by counting.
inline double ecdf_count(const std::vector<double>& sample, double t) {
  std::size_t c = 0;
  for (double v : sample) c += v <= t;
  return static_cast<double>(c) / static_cast<double>(sample.size());
}

// sup |F_a - F_b| over pooled points, as an exact rational evaluated once.
inline double ks_d(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  long long best_num = 0;
  const long long n1 = static_cast<long long>(a.size());
  const long long n2 = static_cast<long long>(b.size());
  for (double t : pooled) {
    long long ca = 0, cb = 0;
    for (double v : a) ca += v <= t;
    for (double v : b) cb += v <= t;
    best_num = std::max(best_num, std::llabs(ca * n2 - cb * n1));
  }
  return static_cast<double>(best_num) / static_cast<double>(n1 * n2);
}

// 2 Σ_{j=1}^{terms} (-1)^{j-1} exp(-2 j² λ²) in long double.
inline double kolmogorov_series(double lambda, int terms = 10000) {
  long double sum = 0.0L;
  const long double l2 = static_cast<long double>(lambda) * lambda;
  for (int j = 1; j <= terms; ++j) {
    const long double term = std::exp(-2.0L * j * j * l2);
    sum += (j % 2 == 1) ? term : -term;
  }
  return static_cast<double>(std::clamp(2.0L * sum, 0.0L, 1.0L));
}

// Smallest eigenvalue of a symmetric 2x2 matrix.
inline double min_eig_2x2(double a, double b, double c) {
  return 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
}

// Within-cluster scatter of rows of x (p = 2) for a 0/1 partition.
inline Eigen::Matrix2d within_scatter(const Eigen::MatrixX2d& x, const std::vector<int>& labels) {
  Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
  for (int c = 0; c < 2; ++c) {
    Eigen::RowVector2d mean = Eigen::RowVector2d::Zero();
    int n = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == c) {
        mean += x.row(i);
        ++n;
      }
    }
    mean /= n;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == c) {
        const Eigen::RowVector2d d = x.row(i) - mean;
        w += d.transpose() * d;
      }
    }
  }
  return w;
}

struct BruteForce {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<int> labels;
};

// Global FKM optimum for k = 2, q = 1, p = 2 by enumerating every bipartition.
inline BruteForce fkm_k2_q1(const Eigen::MatrixX2d& x) {
  const auto n = static_cast<int>(x.rows());
  BruteForce best;
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    const Eigen::Matrix2d w = within_scatter(x, labels);
    const double obj = min_eig_2x2(w(0, 0), w(0, 1), w(1, 1));
    if (obj < best.objective) {
      best.objective = obj;
      best.labels = labels;
    }
  }
  return best;
}

// Plain Lloyd k-means with k-means++ seeding; best of `restarts`.
struct KMeans {
  std::vector<int> labels;
  double objective = std::numeric_limits<double>::infinity();
};

inline KMeans kmeans(const Eigen::MatrixXd& x, int k, int restarts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = x.rows();
  KMeans best;
  for (int r = 0; r < restarts; ++r) {
    Eigen::MatrixXd c(k, x.cols());
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    c.row(0) = x.row(pick(rng));
    for (int j = 1; j < k; ++j) {
      std::vector<double> d2(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        double m = std::numeric_limits<double>::infinity();
        for (int l = 0; l < j; ++l) m = std::min(m, (x.row(i) - c.row(l)).squaredNorm());
        d2[static_cast<std::size_t>(i)] = m;
      }
      std::discrete_distribution<Eigen::Index> dd(d2.begin(), d2.end());
      c.row(j) = x.row(dd(rng));
    }
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    for (int it = 0; it < 500; ++it) {
      bool changed = false;
      for (Eigen::Index i = 0; i < n; ++i) {
        int arg = 0;
        double m = std::numeric_limits<double>::infinity();
        for (int l = 0; l < k; ++l) {
          const double d = (x.row(i) - c.row(l)).squaredNorm();
          if (d < m) {
            m = d;
            arg = l;
          }
        }
        if (labels[static_cast<std::size_t>(i)] != arg) changed = true;
        labels[static_cast<std::size_t>(i)] = arg;
      }
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, x.cols());
      std::vector<int> cnt(static_cast<std::size_t>(k), 0);
      for (Eigen::Index i = 0; i < n; ++i) {
        sum.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
        ++cnt[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
      }
      for (int l = 0; l < k; ++l) {
        if (cnt[static_cast<std::size_t>(l)] > 0) c.row(l) = sum.row(l) / cnt[static_cast<std::size_t>(l)];
      }
      if (!changed) break;
    }
    double obj = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) obj += (x.row(i) - c.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    if (obj < best.objective) {
      best.objective = obj;
      best.labels = labels;
    }
  }
  return best;
}

// Sum of squared distances to label-group means, computed directly.
inline double within_ss(const Eigen::MatrixXd& x, const std::vector<int>& labels, int k) {
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
    int n = 0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == c) {
        mean += x.row(i);
        ++n;
      }
    }
    if (n == 0) continue;
    mean /= n;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == c) total += (x.row(i) - mean).squaredNorm();
    }
  }
  return total;
}

// Adjusted Rand index from the pair-counting definition.
inline double ari(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double same_both = 0, same_a = 0, same_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      same_a += sa;
      same_b += sb;
      same_both += sa && sb;
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double expected = same_a * same_b / pairs;
  const double max_index = 0.5 * (same_a + same_b);
  if (max_index == expected) return 1.0;
  return (same_both - expected) / (max_index - expected);
}

struct Planted {
  Eigen::MatrixXd x;
  std::vector<int> labels;
};

// k Gaussian clusters on a q-dimensional subspace of R^p with isotropic noise elsewhere.
// separation sets the center spacing; noise_sd the spread of the masking directions.
inline Planted planted_subspace(int n, int p, int q, int k, double separation, double within_sd, double noise_sd,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd g(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) g(i, j) = z(rng);
  }
  const Eigen::MatrixXd basis = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  // Centers at +-separation along the latent axes, so every pair is at least separation * sqrt(2) apart.
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(k, q);
  for (int c = 0; c < k; ++c) {
    const int axis = (c / 2) % q;
    const double scale = 1.0 + static_cast<double>(c / (2 * q));
    centers(c, axis) = (c % 2 == 0 ? 1.0 : -1.0) * separation * scale;
  }
  Planted out;
  out.x.resize(n, p);
  out.labels.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int c = i % k;
    out.labels[static_cast<std::size_t>(i)] = c;
    Eigen::VectorXd latent(p);
    for (int d = 0; d < q; ++d) latent(d) = centers(c, d) + within_sd * z(rng);
    for (int d = q; d < p; ++d) latent(d) = noise_sd * z(rng);
    out.x.row(i) = (basis * latent).transpose();
  }
  const Eigen::RowVectorXd mean = out.x.colwise().mean();
  out.x.rowwise() -= mean;
  return out;
}

}  // namespace oracle
