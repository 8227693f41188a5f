#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "innoscope/dataset.hpp"

namespace innoscope {

struct PcaModel {
  std::vector<std::string> names;
  Eigen::MatrixXd correlation;
  Eigen::VectorXd eigenvalues;  // descending
  Eigen::MatrixXd loadings;     // columns are unit eigenvectors
  Eigen::VectorXd explained;
  Eigen::VectorXd cumulative;
};

// Eigendecomposition of the correlation matrix of a standardized matrix (needs >= 15 rows).
PcaModel fit_pca(const StandardizedMatrix& std_matrix);
// Same, from a correlation matrix supplied directly.
PcaModel fit_pca_from_correlation(const Eigen::MatrixXd& correlation, std::vector<std::string> names = {});

struct VarianceRow {
  int component = 0;
  double eigenvalue = 0.0;
  double std_dev = 0.0;
  double proportion = 0.0;
  double cumulative = 0.0;
};

std::vector<VarianceRow> variance_table(const PcaModel& model);
// Rows "Standard deviation", "Proportion of Variance", "Cumulative Proportion"; columns Comp.1..Comp.p.
void write_variance_table(std::ostream& out, const PcaModel& model, char delimiter = ',');

struct SelectionPolicy {
  enum class Kind { eigenvalue_gt_one, elbow_on_gt_one, manual };
  Kind kind = Kind::elbow_on_gt_one;
  int q = 0;

  // "eigenvalue_gt_one", "elbow_on_gt_one", "manual:<q>" or a bare integer.
  static SelectionPolicy parse(std::string_view text);
  std::string to_string() const;
};

int select_components(const PcaModel& model, const SelectionPolicy& policy);
int select_components(const Eigen::VectorXd& eigenvalues, const SelectionPolicy& policy);

// Component scores: std_rows · loadings.
Eigen::MatrixXd pca_scores(const PcaModel& model, const Eigen::MatrixXd& std_rows);

}  // namespace innoscope
