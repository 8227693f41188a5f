#include "innoscope/shift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "innoscope/error.hpp"

namespace innoscope {

Ecdf::Ecdf(std::vector<double> sample) : sorted_(std::move(sample)) {
  if (sorted_.empty()) throw ArgumentError("ECDF needs a nonempty sample");
  for (double v : sorted_) {
    if (std::isnan(v)) throw ArgumentError("ECDF sample contains NaN");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double t) const {
  const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), t) - sorted_.begin();
  return static_cast<double>(count) / static_cast<double>(sorted_.size());
}

std::vector<std::pair<double, double>> Ecdf::steps() const {
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(sorted_.size());
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) continue;
    out.emplace_back(sorted_[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

std::string to_string(KsPValue method) { return method == KsPValue::asymptotic ? "asymptotic" : "stephens"; }

KsPValue parse_ks_method(std::string_view text) {
  if (text == "asymptotic") return KsPValue::asymptotic;
  if (text == "stephens") return KsPValue::stephens;
  throw ArgumentError("unknown KS p-value method '" + std::string(text) + "'");
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.0) {
    // Equivalent theta-function form; converges fast where the alternating series does not.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int j = 1; j < 10000; ++j) {
      const double odd = 2.0 * j - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      sum += term;
      if (term <= 1e-16 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j < 10000; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-10 * std::abs(sum)) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, KsPValue method) {
  if (a.empty() || b.empty()) throw ArgumentError("KS test needs two nonempty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  for (double v : sa) if (std::isnan(v)) throw ArgumentError("sample contains NaN");
  for (double v : sb) if (std::isnan(v)) throw ArgumentError("sample contains NaN");
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double n1 = static_cast<double>(sa.size());
  const double n2 = static_cast<double>(sb.size());
  // Walk the pooled distinct values; at each one both ECDFs include every tie.
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double t;
    if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j])) t = sa[i];
    else t = sb[j];
    while (i < sa.size() && sa[i] <= t) ++i;
    while (j < sb.size() && sb[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult out;
  out.d_stat = d;
  out.n1 = sa.size();
  out.n2 = sb.size();
  const double ne = n1 * n2 / (n1 + n2);
  const double root = std::sqrt(ne);
  const double lambda = method == KsPValue::asymptotic ? root * d : (root + 0.12 + 0.11 / root) * d;
  out.p_value = kolmogorov_survival(lambda);
  return out;
}

const std::vector<PeriodSlice>& default_period_slices() {
  static const std::vector<PeriodSlice> slices{
      {"x", {2021, 2022, 2023}}, {"y", {2018, 2019, 2020}}, {"z", {2016, 2017}}};
  return slices;
}

std::vector<double> slice_values(const IndicatorPanel& panel, std::size_t indicator, const PeriodSlice& slice) {
  std::vector<double> out;
  for (const auto& row : panel.rows) {
    if (std::find(slice.years.begin(), slice.years.end(), row.year) != slice.years.end()) {
      out.push_back(row.values.at(indicator));
    }
  }
  return out;
}

std::vector<ShiftRow> shift_report(const IndicatorPanel& panel, double significance, KsPValue method,
                                   const std::vector<PeriodSlice>& slices) {
  if (!(significance > 0.0 && significance < 1.0)) throw ArgumentError("significance must lie in (0, 1)");
  std::vector<ShiftRow> rows;
  for (std::size_t f = 0; f < panel.indicator_names.size(); ++f) {
    std::vector<std::vector<double>> values;
    for (const auto& s : slices) values.push_back(slice_values(panel, f, s));
    for (std::size_t a = 0; a < slices.size(); ++a) {
      for (std::size_t b = a + 1; b < slices.size(); ++b) {
        ShiftRow row;
        row.indicator = panel.indicator_names[f];
        row.pair = slices[a].name + "-" + slices[b].name;
        row.n1 = values[a].size();
        row.n2 = values[b].size();
        if (values[a].empty() || values[b].empty()) {
          row.verdict = "untestable";
        } else {
          const KsResult ks = ks_two_sample(values[a], values[b], method);
          row.d_stat = ks.d_stat;
          row.p_value = ks.p_value;
          row.verdict = ks.p_value < significance ? "shifted" : "stable";
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_shift_report(std::ostream& out, const std::vector<ShiftRow>& rows, char delimiter) {
  const char d = delimiter;
  out << "indicator" << d << "pair" << d << "n1" << d << "n2" << d << "D" << d << "p" << d << "verdict\n";
  const auto precision = out.precision(10);
  for (const auto& row : rows) {
    out << row.indicator << d << row.pair << d << row.n1 << d << row.n2 << d;
    if (row.d_stat) out << *row.d_stat;
    out << d;
    if (row.p_value) out << *row.p_value;
    out << d << row.verdict << '\n';
  }
  out.precision(precision);
}

}  // namespace innoscope
