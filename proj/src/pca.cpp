#include "innoscope/pca.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "innoscope/error.hpp"
#include "innoscope/kernels.hpp"

namespace innoscope {

PcaModel fit_pca_from_correlation(const Eigen::MatrixXd& correlation, std::vector<std::string> names) {
  const Eigen::Index p = correlation.rows();
  if (p == 0 || correlation.cols() != p) throw NumericError("correlation matrix must be square and nonempty");
  if (!correlation.allFinite()) throw NumericError("correlation matrix has non-finite entries");
  const double asym = (correlation - correlation.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) throw NumericError("correlation matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");

  const Eigen::MatrixXd sym = 0.5 * (correlation + correlation.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");

  PcaModel model;
  model.names = std::move(names);
  model.correlation = sym;
  model.eigenvalues.resize(p);
  model.loadings.resize(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::Index src = p - 1 - j;
    double lambda = solver.eigenvalues()(src);
    if (lambda < -1e-9) throw NumericError("correlation matrix is not positive semidefinite");
    model.eigenvalues(j) = std::max(lambda, 0.0);
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (std::abs(v(i)) > best + 1e-12) {
        best = std::abs(v(i));
        arg = i;
      }
    }
    if (v(arg) < 0.0) v = -v;
    model.loadings.col(j) = v;
  }
  const double total = model.eigenvalues.sum();
  model.explained = model.eigenvalues / total;
  model.cumulative.resize(p);
  double running = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    running += model.explained(j);
    model.cumulative(j) = running;
  }
  model.cumulative(p - 1) = 1.0;
  return model;
}

PcaModel fit_pca(const StandardizedMatrix& std_matrix) {
  const Eigen::Index n = std_matrix.data.rows();
  if (n < 15) throw InsufficientDataError("PCA needs at least 15 rows, got " + std::to_string(n));
  Eigen::MatrixXd corr = kernels::gram(std_matrix.data) / static_cast<double>(n);
  for (Eigen::Index j = 0; j < corr.rows(); ++j) corr(j, j) = 1.0;
  return fit_pca_from_correlation(corr, std_matrix.names);
}

std::vector<VarianceRow> variance_table(const PcaModel& model) {
  std::vector<VarianceRow> rows;
  for (Eigen::Index j = 0; j < model.eigenvalues.size(); ++j) {
    rows.push_back({static_cast<int>(j + 1), model.eigenvalues(j), std::sqrt(model.eigenvalues(j)),
                    model.explained(j), model.cumulative(j)});
  }
  return rows;
}

void write_variance_table(std::ostream& out, const PcaModel& model, char delimiter) {
  const auto rows = variance_table(model);
  auto precision = out.precision(10);
  out << "";
  for (const auto& row : rows) out << delimiter << "Comp." << row.component;
  out << "\nStandard deviation";
  for (const auto& row : rows) out << delimiter << row.std_dev;
  out << "\nProportion of Variance";
  for (const auto& row : rows) out << delimiter << row.proportion;
  out << "\nCumulative Proportion";
  for (const auto& row : rows) out << delimiter << row.cumulative;
  out << '\n';
  out.precision(precision);
}

SelectionPolicy SelectionPolicy::parse(std::string_view text) {
  SelectionPolicy policy;
  if (text == "eigenvalue_gt_one") {
    policy.kind = Kind::eigenvalue_gt_one;
    return policy;
  }
  if (text == "elbow_on_gt_one") {
    policy.kind = Kind::elbow_on_gt_one;
    return policy;
  }
  std::string_view number = text;
  if (text.starts_with("manual:")) number = text.substr(7);
  int q = 0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), q);
  if (ec != std::errc() || ptr != number.data() + number.size()) {
    throw ArgumentError("unknown component selection policy '" + std::string(text) + "'");
  }
  policy.kind = Kind::manual;
  policy.q = q;
  return policy;
}

std::string SelectionPolicy::to_string() const {
  switch (kind) {
    case Kind::eigenvalue_gt_one: return "eigenvalue_gt_one";
    case Kind::elbow_on_gt_one: return "elbow_on_gt_one";
    case Kind::manual: return "manual:" + std::to_string(q);
  }
  return {};
}

int select_components(const Eigen::VectorXd& eigenvalues, const SelectionPolicy& policy) {
  const int p = static_cast<int>(eigenvalues.size());
  if (policy.kind == SelectionPolicy::Kind::manual) {
    if (policy.q < 1 || policy.q > p) {
      throw RangeError("manual component count " + std::to_string(policy.q) + " outside [1, " +
                       std::to_string(p) + "]");
    }
    return policy.q;
  }
  int above = 0;
  while (above < p && eigenvalues(above) > 1.0) ++above;
  if (policy.kind == SelectionPolicy::Kind::eigenvalue_gt_one) return std::max(above, 1);
  if (above <= 1) return 1;
  // Keep everything up to the component sitting right after the largest drop.
  int best = 0;
  double best_gap = -1.0;
  for (int j = 0; j + 1 < above; ++j) {
    const double gap = eigenvalues(j) - eigenvalues(j + 1);
    if (gap > best_gap) {
      best_gap = gap;
      best = j;
    }
  }
  return best + 2;
}

int select_components(const PcaModel& model, const SelectionPolicy& policy) {
  return select_components(model.eigenvalues, policy);
}

Eigen::MatrixXd pca_scores(const PcaModel& model, const Eigen::MatrixXd& std_rows) {
  if (std_rows.cols() != model.loadings.rows()) throw ArgumentError("column count mismatch");
  return std_rows * model.loadings;
}

}  // namespace innoscope
