#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/students_t.hpp>

#include "innoscope/dataset.hpp"
#include "innoscope/error.hpp"
#include "innoscope/kernels.hpp"

namespace innoscope {

double student_t_two_sided(double t, double df) {
  if (std::isnan(t)) throw NumericError("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return std::clamp(p, 0.0, 1.0);
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double p = p_values[order[i]];
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("p-values must lie in [0, 1]");
    running = std::max(running, std::min(1.0, static_cast<double>(m - i) * p));
    adjusted[order[i]] = running;
  }
  return adjusted;
}

CorrelationReport correlation_analysis(const Eigen::MatrixXd& raw, const std::vector<std::string>& names) {
  const Eigen::Index n = raw.rows();
  const Eigen::Index p = raw.cols();
  if (n < 3) throw InsufficientDataError("correlation analysis needs at least 3 rows, got " + std::to_string(n));
  const StandardizedMatrix z = standardize(raw, names);

  CorrelationReport report;
  report.names = names;
  report.n_obs = static_cast<std::size_t>(n);
  report.r = kernels::gram(z.data) / static_cast<double>(n);
  for (Eigen::Index a = 0; a < p; ++a) {
    report.r(a, a) = 1.0;
    for (Eigen::Index b = 0; b < p; ++b) report.r(a, b) = std::clamp(report.r(a, b), -1.0, 1.0);
  }

  const double df = static_cast<double>(n - 2);
  report.t_stats = Eigen::MatrixXd::Zero(p, p);
  report.p_raw = Eigen::MatrixXd::Zero(p, p);
  report.p_holm = Eigen::MatrixXd::Zero(p, p);
  std::vector<double> family;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> index;
  for (Eigen::Index a = 0; a < p; ++a) {
    report.t_stats(a, a) = std::numeric_limits<double>::infinity();
    for (Eigen::Index b = a + 1; b < p; ++b) {
      const double r = report.r(a, b);
      const double denom = 1.0 - r * r;
      const double t = denom <= 0.0 ? std::copysign(std::numeric_limits<double>::infinity(), r)
                                    : r * std::sqrt(df / denom);
      const double pr = student_t_two_sided(t, df);
      report.t_stats(a, b) = report.t_stats(b, a) = t;
      report.p_raw(a, b) = report.p_raw(b, a) = pr;
      family.push_back(pr);
      index.emplace_back(a, b);
    }
  }
  const auto adjusted = holm_adjust(family);
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto [a, b] = index[i];
    report.p_holm(a, b) = report.p_holm(b, a) = adjusted[i];
  }
  return report;
}

CorrelationReport correlation_analysis(const IndicatorPanel& panel) {
  if (panel.n_rows() < 3) {
    throw InsufficientDataError("correlation analysis needs at least 3 rows, got " +
                                std::to_string(panel.n_rows()));
  }
  return correlation_analysis(panel.matrix(), panel.indicator_names);
}

void write_correlation_table(std::ostream& out, const CorrelationReport& report, char delimiter) {
  const char d = delimiter;
  out << "Parameter1" << d << "Parameter2" << d << "r" << d << "t" << d << "df" << d << "p" << d << "p_holm\n";
  const auto p = report.r.rows();
  auto precise = out.precision(10);
  for (Eigen::Index a = 0; a < p; ++a) {
    for (Eigen::Index b = a + 1; b < p; ++b) {
      out << indicator_title(report.names[a]) << d << indicator_title(report.names[b]) << d << report.r(a, b)
          << d << report.t_stats(a, b) << d << report.n_obs - 2 << d << report.p_raw(a, b) << d
          << report.p_holm(a, b) << '\n';
    }
  }
  out.precision(precise);
}

}  // namespace innoscope
