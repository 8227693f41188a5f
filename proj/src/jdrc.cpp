#include "innoscope/jdrc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "innoscope/error.hpp"

namespace innoscope {

namespace {

using kernels::Exec;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<int> counts_of(std::span<const int> labels, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

void validate_labels(std::span<const int> labels, int k, Eigen::Index n) {
  if (static_cast<Eigen::Index>(labels.size()) != n) throw ArgumentError("label count does not match row count");
  for (int l : labels) {
    if (l < 0 || l >= k) throw ArgumentError("label " + std::to_string(l) + " outside [0, k)");
  }
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
void repair_empty(std::vector<int>& labels, std::vector<double>& dist, int k) {
  auto counts = counts_of(labels, k);
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    std::size_t pick = labels.size();
    double far = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (counts[labels[i]] >= 2 && dist[i] > far) {
        far = dist[i];
        pick = i;
      }
    }
    if (pick == labels.size()) throw NumericError("cannot repair an empty cluster");
    --counts[labels[pick]];
    labels[pick] = c;
    dist[pick] = 0.0;
    ++counts[c];
  }
}

// Between-cluster scatter Σ n_c m_c m_cᵀ of the original variables.
Eigen::MatrixXd between_scatter(const Eigen::MatrixXd& x, std::span<const int> labels, int k) {
  const Eigen::MatrixXd means = kernels::cluster_means(x, labels, k, Exec::serial);
  const auto counts = counts_of(labels, k);
  Eigen::MatrixXd weighted = means;
  for (int c = 0; c < k; ++c) weighted.row(c) *= std::sqrt(static_cast<double>(counts[c]));
  return weighted.transpose() * weighted;
}

Eigen::MatrixXd projection_from(JdrcMethod method, const Eigen::MatrixXd& gram, const Eigen::MatrixXd& x,
                                std::span<const int> labels, int k, int q) {
  const Eigen::MatrixXd between = between_scatter(x, labels, k);
  const Eigen::Index p = x.cols();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  Eigen::MatrixXd a(p, q);
  if (method == JdrcMethod::fkm) {
    // Smallest-q eigenvectors of the within scatter, smallest first.
    const Eigen::MatrixXd within = gram - between;
    solver.compute(0.5 * (within + within.transpose()));
    if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
    for (int j = 0; j < q; ++j) a.col(j) = solver.eigenvectors().col(j);
  } else {
    solver.compute(0.5 * (between + between.transpose()));
    if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
    for (int j = 0; j < q; ++j) a.col(j) = solver.eigenvectors().col(p - 1 - j);
  }
  return a;
}

double objective_of(JdrcMethod method, const Eigen::MatrixXd& x, const Eigen::MatrixXd& proj,
                    const Eigen::MatrixXd& a, const Eigen::MatrixXd& y, std::span<const int> labels) {
  double total = 0.0;
  if (method == JdrcMethod::fkm) {
    for (Eigen::Index i = 0; i < proj.rows(); ++i) total += (proj.row(i) - y.row(labels[i])).squaredNorm();
  } else {
    const Eigen::MatrixXd fitted = y * a.transpose();
    for (Eigen::Index i = 0; i < x.rows(); ++i) total += (x.row(i) - fitted.row(labels[i])).squaredNorm();
  }
  return total;
}

std::vector<Eigen::Index> kmeanspp_seeds(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  std::vector<Eigen::Index> seeds;
  std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::Index first = std::min<Eigen::Index>(n - 1, static_cast<Eigen::Index>(unit(rng) * static_cast<double>(n)));
  seeds.push_back(first);
  chosen[first] = true;
  while (static_cast<int>(seeds.size()) < k) {
    const Eigen::Index last = seeds.back();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.row(i) - points.row(last)).squaredNorm());
      if (!chosen[i]) total += d2[i];
    }
    Eigen::Index pick = -1;
    if (total > 0.0) {
      double target = unit(rng) * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (chosen[i]) continue;
        target -= d2[i];
        if (target <= 0.0 && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (Eigen::Index i = n - 1; i >= 0; --i) {
          if (!chosen[i] && d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      std::vector<Eigen::Index> rest;
      for (Eigen::Index i = 0; i < n; ++i)
        if (!chosen[i]) rest.push_back(i);
      pick = rest[std::min(rest.size() - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(rest.size())))];
    }
    seeds.push_back(pick);
    chosen[pick] = true;
  }
  return seeds;
}

std::vector<int> assign_to_seeds(const Eigen::MatrixXd& points, const std::vector<Eigen::Index>& seeds, int k) {
  Eigen::MatrixXd centers(k, points.cols());
  for (int c = 0; c < k; ++c) centers.row(c) = points.row(seeds[c]);
  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  std::vector<double> dist(static_cast<std::size_t>(points.rows()));
  kernels::nearest_centroid(points, centers, labels, dist, Exec::serial);
  for (int c = 0; c < k; ++c) {
    labels[seeds[c]] = c;
    dist[seeds[c]] = 0.0;
  }
  repair_empty(labels, dist, k);
  return labels;
}

void lloyd(const Eigen::MatrixXd& x, std::vector<int>& labels, int k, int max_iter, int* iterations = nullptr) {
  std::vector<int> next(labels.size());
  std::vector<double> dist(labels.size());
  int it = 0;
  for (; it < max_iter; ++it) {
    const Eigen::MatrixXd centers = kernels::cluster_means(x, labels, k, Exec::serial);
    kernels::nearest_centroid(x, centers, next, dist, Exec::serial);
    repair_empty(next, dist, k);
    if (next == labels) break;
    labels.swap(next);
  }
  if (iterations) *iterations = it;
}

struct RunResult {
  Eigen::MatrixXd a;
  std::vector<int> labels;
  Eigen::MatrixXd y;
  std::vector<double> trace;
  int iterations = 0;
};

RunResult als(JdrcMethod method, const Eigen::MatrixXd& x, const Eigen::MatrixXd& gram, Eigen::MatrixXd a,
              std::vector<int> labels, int k, double tol, int max_iter) {
  RunResult run;
  Eigen::MatrixXd proj = x * a;
  Eigen::MatrixXd y = kernels::cluster_means(proj, labels, k, Exec::serial);
  double prev = objective_of(method, x, proj, a, y, labels);
  run.trace.push_back(prev);

  std::vector<int> next(labels.size());
  std::vector<double> dist(labels.size());
  int it = 0;
  for (; it < max_iter; ++it) {
    kernels::nearest_centroid(proj, y, next, dist, Exec::serial);
    repair_empty(next, dist, k);
    const bool unchanged = next == labels && it > 0;
    if (unchanged) break;
    const Eigen::MatrixXd a_next = projection_from(method, gram, x, next, k, static_cast<int>(a.cols()));
    const Eigen::MatrixXd proj_next = x * a_next;
    const Eigen::MatrixXd y_next = kernels::cluster_means(proj_next, next, k, Exec::serial);
    const double obj = objective_of(method, x, proj_next, a_next, y_next, next);
    if (obj > prev) break;  // no descent left beyond rounding
    labels = next;
    a = a_next;
    proj = proj_next;
    y = y_next;
    run.trace.push_back(obj);
    const bool small = prev - obj <= tol * std::max(std::abs(prev), std::numeric_limits<double>::min());
    prev = obj;
    if (small) {
      ++it;
      break;
    }
  }
  run.a = std::move(a);
  run.labels = std::move(labels);
  run.y = std::move(y);
  run.iterations = it;
  return run;
}

void check_shape(const Eigen::MatrixXd& x, int k, int q) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (k < 2) throw ArgumentError("k must be at least 2, got " + std::to_string(k));
  if (k > n) throw ArgumentError("k = " + std::to_string(k) + " exceeds the number of rows " + std::to_string(n));
  if (q < 1 || q > p) throw ArgumentError("q must lie in [1, " + std::to_string(p) + "], got " + std::to_string(q));
  if (!x.allFinite()) throw ArgumentError("input matrix has non-finite entries");
}

JdrcModel finish(JdrcMethod method, RunResult run) {
  JdrcModel model;
  model.method = method;
  model.A = std::move(run.a);
  model.labels = std::move(run.labels);
  model.Y = std::move(run.y);
  model.objective_trace = std::move(run.trace);
  model.objective = model.objective_trace.back();
  model.iterations = run.iterations;
  return model;
}

}  // namespace

std::string to_string(JdrcMethod method) { return method == JdrcMethod::fkm ? "fkm" : "rkm"; }

JdrcMethod parse_method(std::string_view text) {
  if (text == "fkm") return JdrcMethod::fkm;
  if (text == "rkm") return JdrcMethod::rkm;
  throw ArgumentError("unknown method '" + std::string(text) + "'");
}

std::string to_string(InitStrategy init) {
  switch (init) {
    case InitStrategy::mixed: return "mixed";
    case InitStrategy::full_space_kmeans: return "full_space_kmeans";
    case InitStrategy::random_subspace: return "random_subspace";
  }
  return {};
}

InitStrategy parse_init(std::string_view text) {
  if (text == "mixed") return InitStrategy::mixed;
  if (text == "full_space_kmeans") return InitStrategy::full_space_kmeans;
  if (text == "random_subspace") return InitStrategy::random_subspace;
  throw ArgumentError("unknown init strategy '" + std::string(text) + "'");
}

std::vector<int> JdrcModel::sizes() const { return counts_of(labels, k()); }

Eigen::MatrixXd JdrcModel::membership() const {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), k());
  for (std::size_t i = 0; i < labels.size(); ++i) u(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return u;
}

Eigen::MatrixXd update_projection(JdrcMethod method, const Eigen::MatrixXd& x, std::span<const int> labels, int k,
                                  int q) {
  validate_labels(labels, k, x.rows());
  return projection_from(method, kernels::gram(x, Exec::serial), x, labels, k, q);
}

double fkm_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& a, std::span<const int> labels, int k) {
  validate_labels(labels, k, x.rows());
  const Eigen::MatrixXd proj = x * a;
  return objective_of(JdrcMethod::fkm, x, proj, a, kernels::cluster_means(proj, labels, k, Exec::serial), labels);
}

double rkm_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& a, std::span<const int> labels, int k) {
  validate_labels(labels, k, x.rows());
  const Eigen::MatrixXd proj = x * a;
  return objective_of(JdrcMethod::rkm, x, proj, a, kernels::cluster_means(proj, labels, k, Exec::serial), labels);
}

double jdrc_objective(JdrcMethod method, const Eigen::MatrixXd& x, const Eigen::MatrixXd& a,
                      std::span<const int> labels, int k) {
  return method == JdrcMethod::fkm ? fkm_objective(x, a, labels, k) : rkm_objective(x, a, labels, k);
}

JdrcModel fit_from_partition(JdrcMethod method, const Eigen::MatrixXd& x, std::span<const int> labels, int k, int q,
                             double tol, int max_iter) {
  check_shape(x, k, q);
  validate_labels(labels, k, x.rows());
  std::vector<int> start(labels.begin(), labels.end());
  std::vector<double> zeros(start.size(), 0.0);
  repair_empty(start, zeros, k);
  const Eigen::MatrixXd gram = kernels::gram(x, Exec::serial);
  Eigen::MatrixXd a = projection_from(method, gram, x, start, k, q);
  return finish(method, als(method, x, gram, std::move(a), std::move(start), k, tol, max_iter));
}

KMeansResult kmeans_from_partition(const Eigen::MatrixXd& x, std::span<const int> labels, int k, int max_iter) {
  validate_labels(labels, k, x.rows());
  KMeansResult result;
  result.labels.assign(labels.begin(), labels.end());
  std::vector<double> zeros(result.labels.size(), 0.0);
  repair_empty(result.labels, zeros, k);
  lloyd(x, result.labels, k, max_iter, &result.iterations);
  result.centroids = kernels::cluster_means(x, result.labels, k, Exec::serial);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    result.objective += (x.row(i) - result.centroids.row(result.labels[i])).squaredNorm();
  return result;
}

JdrcModel fit_jdrc(JdrcMethod method, const Eigen::MatrixXd& x, int k, int q, const FitOptions& opts) {
  check_shape(x, k, q);
  if (opts.restarts < 1) throw ArgumentError("restarts must be at least 1");
  if (opts.max_iter < 1) throw ArgumentError("max_iter must be at least 1");
  const Eigen::MatrixXd gram = kernels::gram(x, Exec::serial);
  const int restarts = opts.restarts;
  std::vector<RunResult> runs(static_cast<std::size_t>(restarts));

  auto one = [&](int r) {
    std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(static_cast<std::uint64_t>(r))));
    const bool full_space = opts.init == InitStrategy::full_space_kmeans ||
                            (opts.init == InitStrategy::mixed && r % 2 == 0);
    Eigen::MatrixXd a;
    std::vector<int> labels;
    if (full_space) {
      labels = assign_to_seeds(x, kmeanspp_seeds(x, k, rng), k);
      lloyd(x, labels, k, 100);
      a = projection_from(method, gram, x, labels, k, q);
    } else {
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::MatrixXd g(x.cols(), q);
      for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
      a = qr.householderQ() * Eigen::MatrixXd::Identity(x.cols(), q);
      const Eigen::MatrixXd proj = x * a;
      labels = assign_to_seeds(proj, kmeanspp_seeds(proj, k, rng), k);
    }
    runs[static_cast<std::size_t>(r)] = als(method, x, gram, std::move(a), std::move(labels), k, opts.tol, opts.max_iter);
  };

  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < restarts; ++r) one(r);
  } else {
    for (int r = 0; r < restarts; ++r) one(r);
  }

  int best = 0;
  for (int r = 1; r < restarts; ++r) {
    if (runs[r].trace.back() < runs[best].trace.back()) best = r;
  }
  JdrcModel model = finish(method, std::move(runs[static_cast<std::size_t>(best)]));
  model.seed = opts.seed;
  model.restarts = restarts;
  model.best_restart = best;
  if (k < q) model.warnings.push_back("k = " + std::to_string(k) + " is smaller than q = " + std::to_string(q));
  return canonicalize(std::move(model));
}

JdrcModel fit_fkm(const Eigen::MatrixXd& x, int k, int q, const FitOptions& opts) {
  return fit_jdrc(JdrcMethod::fkm, x, k, q, opts);
}

JdrcModel fit_rkm(const Eigen::MatrixXd& x, int k, int q, const FitOptions& opts) {
  return fit_jdrc(JdrcMethod::rkm, x, k, q, opts);
}

JdrcModel canonicalize(JdrcModel model) {
  for (Eigen::Index j = 0; j < model.A.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < model.A.rows(); ++i) {
      if (std::abs(model.A(i, j)) > best + 1e-12) {
        best = std::abs(model.A(i, j));
        arg = i;
      }
    }
    if (model.A(arg, j) < 0.0) {
      model.A.col(j) *= -1.0;
      model.Y.col(j) *= -1.0;
    }
  }
  const int k = model.k();
  const auto sizes = model.sizes();
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
    return model.Y(a, 0) < model.Y(b, 0);
  });
  std::vector<int> rename(static_cast<std::size_t>(k));
  Eigen::MatrixXd y(model.Y.rows(), model.Y.cols());
  for (int c = 0; c < k; ++c) {
    rename[order[c]] = c;
    y.row(c) = model.Y.row(order[c]);
  }
  for (int& l : model.labels) l = rename[l];
  model.Y = std::move(y);
  return model;
}

Eigen::MatrixXd project(const JdrcModel& model, const Eigen::MatrixXd& std_rows) {
  if (std_rows.cols() != model.A.rows()) {
    throw ArgumentError("expected " + std::to_string(model.A.rows()) + " columns, got " +
                        std::to_string(std_rows.cols()));
  }
  return std_rows * model.A;
}

Assignment assign(const Eigen::MatrixXd& centroids, std::span<const double> coords) {
  if (static_cast<Eigen::Index>(coords.size()) != centroids.cols()) throw ArgumentError("coordinate count mismatch");
  Assignment best{0, std::numeric_limits<double>::infinity()};
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    double d = 0.0;
    for (Eigen::Index j = 0; j < centroids.cols(); ++j) {
      const double diff = coords[j] - centroids(c, j);
      d += diff * diff;
    }
    if (d < best.sq_dist) best = {static_cast<int>(c), d};
  }
  return best;
}

Assignment assign(const JdrcModel& model, std::span<const double> coords) { return assign(model.Y, coords); }

WithinSS within_ss(std::span<const int> labels, const Eigen::MatrixXd& coords, int k) {
  if (static_cast<Eigen::Index>(labels.size()) != coords.rows()) throw ArgumentError("label count mismatch");
  if (labels.empty()) throw ArgumentError("no points");
  if (k <= 0) k = *std::max_element(labels.begin(), labels.end()) + 1;
  validate_labels(labels, k, coords.rows());
  const auto counts = counts_of(labels, k);
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) throw ArgumentError("cluster " + std::to_string(c + 1) + " is empty");
  }
  const Eigen::MatrixXd centers = kernels::cluster_means(coords, labels, k, Exec::serial);
  WithinSS out;
  out.per_cluster.assign(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    out.per_cluster[labels[i]] += (coords.row(i) - centers.row(labels[i])).squaredNorm();
  }
  out.total = std::accumulate(out.per_cluster.begin(), out.per_cluster.end(), 0.0);
  return out;
}

std::vector<ReducedPoint> reduced_points(const JdrcModel& model, const IndicatorPanel& panel,
                                         const Eigen::MatrixXd& std_data) {
  if (static_cast<std::size_t>(std_data.rows()) != panel.n_rows() ||
      model.labels.size() != panel.n_rows()) {
    throw ArgumentError("model, panel and standardized data disagree on row count");
  }
  const Eigen::MatrixXd coords = project(model, std_data);
  std::vector<ReducedPoint> out;
  out.reserve(panel.n_rows());
  for (std::size_t i = 0; i < panel.n_rows(); ++i) {
    ReducedPoint pt;
    pt.row = i;
    pt.region_id = panel.rows[i].region_id;
    pt.year = panel.rows[i].year;
    pt.coords = coords.row(static_cast<Eigen::Index>(i)).transpose();
    pt.cluster = model.labels[i];
    pt.sq_dist_to_centroid = (pt.coords.transpose() - model.Y.row(pt.cluster)).squaredNorm();
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<ReducedPoint> nearest_to_centroid(const JdrcModel& model, const IndicatorPanel& panel,
                                              const Eigen::MatrixXd& std_data) {
  auto points = reduced_points(model, panel, std_data);
  std::vector<std::optional<std::size_t>> best(static_cast<std::size_t>(model.k()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& slot = best[points[i].cluster];
    if (!slot) {
      slot = i;
      continue;
    }
    const auto& cur = points[*slot];
    if (points[i].sq_dist_to_centroid < cur.sq_dist_to_centroid ||
        (points[i].sq_dist_to_centroid == cur.sq_dist_to_centroid && points[i].key() < cur.key())) {
      slot = i;
    }
  }
  std::vector<ReducedPoint> out;
  for (const auto& slot : best) {
    if (slot) out.push_back(points[*slot]);
  }
  return out;
}

AgreementMatrix agreement_matrix(std::span<const int> cluster_labels, std::span<const int> class_labels, int k,
                                 int classes) {
  if (cluster_labels.size() != class_labels.size()) {
    throw ArgumentError("label vectors differ in length (" + std::to_string(cluster_labels.size()) + " vs " +
                        std::to_string(class_labels.size()) + ")");
  }
  AgreementMatrix out;
  out.counts = Eigen::MatrixXi::Zero(k, classes);
  for (std::size_t i = 0; i < cluster_labels.size(); ++i) {
    const int c = cluster_labels[i];
    const int e = class_labels[i];
    if (c < 0 || c >= k) throw ArgumentError("cluster label out of range");
    if (e < 1 || e > classes) throw ArgumentError("class label out of range");
    ++out.counts(c, e - 1);
  }
  out.row_pct = Eigen::MatrixXd::Zero(k, classes);
  out.col_pct = Eigen::MatrixXd::Zero(k, classes);
  const Eigen::VectorXi row_sum = out.counts.rowwise().sum();
  const Eigen::RowVectorXi col_sum = out.counts.colwise().sum();
  for (int c = 0; c < k; ++c) {
    for (int e = 0; e < classes; ++e) {
      if (row_sum(c) > 0) out.row_pct(c, e) = 100.0 * out.counts(c, e) / row_sum(c);
      if (col_sum(e) > 0) out.col_pct(c, e) = 100.0 * out.counts(c, e) / col_sum(e);
    }
  }
  return out;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ArgumentError("label vectors differ in length");
  std::map<std::pair<int, int>, long long> joint;
  std::map<int, long long> ca;
  std::map<int, long long> cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++joint[{a[i], b[i]}];
    ++ca[a[i]];
    ++cb[b[i]];
  }
  auto choose2 = [](long long v) { return static_cast<double>(v) * static_cast<double>(v - 1) / 2.0; };
  double index = 0.0;
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (const auto& [key, v] : joint) index += choose2(v);
  for (const auto& [key, v] : ca) sum_a += choose2(v);
  for (const auto& [key, v] : cb) sum_b += choose2(v);
  const double total = choose2(static_cast<long long>(a.size()));
  const double expected = total > 0.0 ? sum_a * sum_b / total : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace innoscope
