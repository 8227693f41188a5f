#pragma once

#include <span>

#include <Eigen/Dense>

// Hot loops with an OpenMP implementation and a serial reference.
// Both paths produce bit-identical results: parallel work is split over
// independent outputs and each output accumulates rows in the same order.
namespace innoscope::kernels {

enum class Exec { serial, parallel };

// XᵀX.
Eigen::MatrixXd gram(const Eigen::MatrixXd& x, Exec exec = Exec::parallel);

// Nearest centroid per row; ties go to the lowest index.
void nearest_centroid(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                      std::span<int> labels, std::span<double> sq_dist,
                      Exec exec = Exec::parallel);

// Row means per label in [0, k); rows of empty clusters are zero.
Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& points, std::span<const int> labels, int k,
                              Exec exec = Exec::parallel);

// Number of threads the parallel path would use.
int max_threads();

}  // namespace innoscope::kernels
