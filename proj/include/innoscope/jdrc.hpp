#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "innoscope/dataset.hpp"
#include "innoscope/kernels.hpp"

namespace innoscope {

enum class JdrcMethod { fkm, rkm };

std::string to_string(JdrcMethod method);
JdrcMethod parse_method(std::string_view text);

// How each restart builds its starting partition.
//  random_subspace: random orthonormal A, k-means++ seeding on XA.
//  full_space_kmeans: k-means++ and Lloyd iterations on X, A derived from that partition.
//  mixed: even restarts use full_space_kmeans, odd restarts random_subspace.
enum class InitStrategy { mixed, full_space_kmeans, random_subspace };

std::string to_string(InitStrategy init);
InitStrategy parse_init(std::string_view text);

struct FitOptions {
  std::uint64_t seed = 20230;
  int restarts = 100;
  double tol = 1e-8;
  int max_iter = 200;
  InitStrategy init = InitStrategy::mixed;
  bool parallel = true;
};

struct JdrcModel {
  JdrcMethod method = JdrcMethod::fkm;
  Eigen::MatrixXd A;         // p x q, orthonormal columns
  std::vector<int> labels;   // cluster index per row, 0-based
  Eigen::MatrixXd Y;         // k x q centroids in the reduced space
  std::vector<double> objective_trace;
  double objective = 0.0;
  std::uint64_t seed = 0;
  int restarts = 0;
  int best_restart = 0;
  int iterations = 0;
  std::vector<std::string> warnings;

  int k() const { return static_cast<int>(Y.rows()); }
  int q() const { return static_cast<int>(A.cols()); }
  int p() const { return static_cast<int>(A.rows()); }
  std::vector<int> sizes() const;
  Eigen::MatrixXd membership() const;
  // Variable scores are the columns of A.
  const Eigen::MatrixXd& variable_scores() const { return A; }
};

// Best of opts.restarts alternating least-squares runs. 1 <= q <= p, 2 <= k <= n.
JdrcModel fit_fkm(const Eigen::MatrixXd& x, int k, int q, const FitOptions& opts = {});
JdrcModel fit_rkm(const Eigen::MatrixXd& x, int k, int q, const FitOptions& opts = {});
JdrcModel fit_jdrc(JdrcMethod method, const Eigen::MatrixXd& x, int k, int q, const FitOptions& opts = {});

// One alternating least-squares run from a given partition; no canonicalization.
JdrcModel fit_from_partition(JdrcMethod method, const Eigen::MatrixXd& x, std::span<const int> labels,
                             int k, int q, double tol = 1e-8, int max_iter = 200);

// Optimal A for a fixed partition.
Eigen::MatrixXd update_projection(JdrcMethod method, const Eigen::MatrixXd& x, std::span<const int> labels, int k,
                                  int q);

// ||XA - UY||² with Y the cluster means of XA.
double fkm_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& a, std::span<const int> labels, int k);
// ||X - UYAᵀ||² with Y the cluster means of XA.
double rkm_objective(const Eigen::MatrixXd& x, const Eigen::MatrixXd& a, std::span<const int> labels, int k);
double jdrc_objective(JdrcMethod method, const Eigen::MatrixXd& x, const Eigen::MatrixXd& a,
                      std::span<const int> labels, int k);

// Plain k-means (Lloyd) in the original space from a given partition.
struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double objective = 0.0;
  int iterations = 0;
};
KMeansResult kmeans_from_partition(const Eigen::MatrixXd& x, std::span<const int> labels, int k, int max_iter = 200);

// Orders clusters by size (descending, ties by first centroid coordinate) and fixes axis signs
// so that the largest-magnitude entry of each column of A is positive.
JdrcModel canonicalize(JdrcModel model);

// rows · A.
Eigen::MatrixXd project(const JdrcModel& model, const Eigen::MatrixXd& std_rows);

struct Assignment {
  int cluster = 0;  // 0-based
  double sq_dist = 0.0;
};
Assignment assign(const JdrcModel& model, std::span<const double> coords);
Assignment assign(const Eigen::MatrixXd& centroids, std::span<const double> coords);

struct WithinSS {
  std::vector<double> per_cluster;
  double total = 0.0;
};
// Labels are 0-based and every cluster in [0, k) must be nonempty; k defaults to max label + 1.
WithinSS within_ss(std::span<const int> labels, const Eigen::MatrixXd& coords, int k = 0);

struct ReducedPoint {
  std::size_t row = 0;
  std::string region_id;
  int year = 0;
  Eigen::VectorXd coords;
  int cluster = 0;  // 0-based
  double sq_dist_to_centroid = 0.0;

  std::string key() const { return region_id + "_" + std::to_string(year); }
};

// All rows of the panel in the reduced space with their own-cluster distances.
std::vector<ReducedPoint> reduced_points(const JdrcModel& model, const IndicatorPanel& panel,
                                         const Eigen::MatrixXd& std_data);
// Member closest to each centroid; ties by region key.
std::vector<ReducedPoint> nearest_to_centroid(const JdrcModel& model, const IndicatorPanel& panel,
                                              const Eigen::MatrixXd& std_data);

struct AgreementMatrix {
  Eigen::MatrixXi counts;   // k x classes
  Eigen::MatrixXd row_pct;  // share of each cluster row
  Eigen::MatrixXd col_pct;  // share of each EURIS class column
};

// cluster_labels in [0, k); class_labels in [1, classes].
AgreementMatrix agreement_matrix(std::span<const int> cluster_labels, std::span<const int> class_labels, int k,
                                 int classes = 4);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace innoscope
