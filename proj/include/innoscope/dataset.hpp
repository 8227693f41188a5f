#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace innoscope {

inline constexpr std::size_t kIndicatorCount = 14;

// Scoreboard indicator codes in canonical column order.
const std::vector<std::string>& indicator_codes();
// Human-readable indicator title, e.g. "2.2.1 R&D expenditure in the business sector".
std::string indicator_title(std::string_view code);
// Position of an indicator code within indicator_codes(); throws ArgumentError.
std::size_t indicator_index(std::string_view code);

// Tier codes: 1 leader, 2 strong, 3 moderate, 4 emerging.
int encode_label(std::string_view text_label);
std::string label_name(int code);

struct RegionYear {
  std::string region_id;
  int year = 0;
  std::array<double, kIndicatorCount> values{};
  int euris_label = 0;

  std::string key() const { return region_id + "_" + std::to_string(year); }
};

struct IndicatorPanel {
  std::vector<std::string> indicator_names = indicator_codes();
  std::vector<RegionYear> rows;

  std::size_t n_rows() const { return rows.size(); }
  Eigen::MatrixXd matrix() const;
  std::vector<int> euris_labels() const;
  std::optional<std::size_t> find(std::string_view region_id, int year) const;
  // Accepts "<region_id>_<year>".
  std::optional<std::size_t> find_key(std::string_view key) const;
};

struct ScoreboardSchema {
  std::string region_column = "region";
  std::string year_column = "year";
  std::vector<std::string> indicator_columns = indicator_codes();
  std::string label_column = "euris_label";
  char delimiter = ',';
  int min_year = 2016;
  int max_year = 2023;
};

IndicatorPanel load_scoreboard(std::istream& source, const ScoreboardSchema& schema = {});
IndicatorPanel load_scoreboard_file(const std::filesystem::path& path,
                                    const ScoreboardSchema& schema = {});

struct StandardizedMatrix {
  Eigen::MatrixXd data;
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_stds;
  std::vector<std::string> names;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& raw) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& standardized) const;
};

// Population (divide-by-n) standard deviation.
StandardizedMatrix standardize(const Eigen::MatrixXd& raw, const std::vector<std::string>& names);
StandardizedMatrix standardize(const IndicatorPanel& panel);

struct ScalingParams {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& raw) const;
  Eigen::VectorXd apply_row(std::span<const double> raw) const;
  Eigen::MatrixXd invert(const Eigen::MatrixXd& scaled) const;
};

struct MinMaxResult {
  Eigen::MatrixXd scaled;
  ScalingParams params;
};

// Maps each feature affinely onto [-1, 1]; reuses params when given, without clipping.
MinMaxResult minmax_scale(const Eigen::MatrixXd& matrix,
                          const std::optional<ScalingParams>& params = std::nullopt,
                          const std::vector<std::string>& names = {});

struct CorrelationReport {
  std::vector<std::string> names;
  Eigen::MatrixXd r;
  Eigen::MatrixXd t_stats;
  Eigen::MatrixXd p_raw;
  Eigen::MatrixXd p_holm;
  std::size_t n_obs = 0;
};

CorrelationReport correlation_analysis(const IndicatorPanel& panel);
CorrelationReport correlation_analysis(const Eigen::MatrixXd& raw,
                                       const std::vector<std::string>& names);

// Holm step-down adjustment; output in the input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

// Two-sided p-value of Student's t with df degrees of freedom.
double student_t_two_sided(double t, double df);

// Columns: Parameter1, Parameter2, r, t, df, p, p_holm.
void write_correlation_table(std::ostream& out, const CorrelationReport& report, char delimiter = ',');

}  // namespace innoscope
