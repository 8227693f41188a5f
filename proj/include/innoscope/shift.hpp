#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "innoscope/dataset.hpp"

namespace innoscope {

// Right-continuous empirical distribution function.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> sample);
  double operator()(double t) const;
  const std::vector<double>& sorted() const { return sorted_; }
  // (value, F(value)) at each distinct sample value.
  std::vector<std::pair<double, double>> steps() const;

 private:
  std::vector<double> sorted_;
};

enum class KsPValue {
  asymptotic,  // λ = √n_e · D
  stephens     // λ = (√n_e + 0.12 + 0.11/√n_e) · D
};

std::string to_string(KsPValue method);
KsPValue parse_ks_method(std::string_view text);

struct KsResult {
  double d_stat = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::string alternative = "two-sided";
};

// P(K > λ) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       KsPValue method = KsPValue::asymptotic);

struct PeriodSlice {
  std::string name;
  std::vector<int> years;
};

// x: 2021-2023, y: 2018-2020, z: 2016-2017.
const std::vector<PeriodSlice>& default_period_slices();

struct ShiftRow {
  std::string indicator;
  std::string pair;  // e.g. "x-z"
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::optional<double> d_stat;
  std::optional<double> p_value;
  std::string verdict;  // shifted, stable or untestable
};

std::vector<double> slice_values(const IndicatorPanel& panel, std::size_t indicator, const PeriodSlice& slice);

// Pairs (x,y), (x,z), (y,z) for every indicator.
std::vector<ShiftRow> shift_report(const IndicatorPanel& panel, double significance = 0.05,
                                   KsPValue method = KsPValue::asymptotic,
                                   const std::vector<PeriodSlice>& slices = default_period_slices());

// Columns: indicator, pair, n1, n2, D, p, verdict.
void write_shift_report(std::ostream& out, const std::vector<ShiftRow>& rows, char delimiter = ',');

}  // namespace innoscope
