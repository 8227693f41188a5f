#include "innoscope/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <unordered_map>

#include "innoscope/error.hpp"

namespace innoscope {

namespace {

struct IndicatorInfo {
  const char* code;
  const char* title;
};

constexpr std::array<IndicatorInfo, kIndicatorCount> kIndicators{{
    {"1.1.2", "Population with tertiary education"},
    {"1.1.3", "Population involved in lifelong learning"},
    {"1.2.1", "International scientific co-publications"},
    {"1.2.2", "Scientific publications among the top 10% most cited"},
    {"1.3.2", "Individuals with above basic overall digital skills"},
    {"2.1.1", "R&D expenditure in the public sector"},
    {"2.2.1", "R&D expenditure in the business sector"},
    {"2.3.2", "Employed ICT specialists"},
    {"3.2.2", "Public-private co-publications"},
    {"3.3.1", "PCT patent applications"},
    {"3.3.2", "Trademark applications"},
    {"3.3.3", "Design applications"},
    {"4.1.1", "Employment in knowledge-intensive activities"},
    {"4.3.2", "Air emissions by fine particulates"},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one delimited record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_record(std::string_view line, char delimiter, std::size_t row) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && trim(current).empty() && !was_quoted) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == delimiter) {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) throw ParseError(row, "unterminated quoted field");
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

std::optional<double> parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw SchemaError("missing column '" + name + "'");
}

}  // namespace

const std::vector<std::string>& indicator_codes() {
  static const std::vector<std::string> codes = [] {
    std::vector<std::string> out;
    for (const auto& info : kIndicators) out.emplace_back(info.code);
    return out;
  }();
  return codes;
}

std::string indicator_title(std::string_view code) {
  for (const auto& info : kIndicators) {
    if (code == info.code) return std::string(info.code) + " " + info.title;
  }
  return std::string(code);
}

std::size_t indicator_index(std::string_view code) {
  for (std::size_t i = 0; i < kIndicators.size(); ++i) {
    if (code == kIndicators[i].code) return i;
  }
  throw ArgumentError("unknown indicator '" + std::string(code) + "'");
}

int encode_label(std::string_view text_label) {
  const std::string key = lower(trim(text_label));
  static const std::unordered_map<std::string, int> table{
      {"innovation leaders", 1}, {"innovation leader", 1},
      {"strong innovators", 2},  {"strong innovator", 2},  {"strong", 2},
      {"moderate innovators", 3}, {"moderate innovator", 3}, {"moderate", 3},
      {"emerging innovators", 4}, {"emerging innovator", 4}, {"emerging", 4},
      {"leader", 1}, {"leaders", 1}};
  if (auto it = table.find(key); it != table.end()) return it->second;
  if (auto code = parse_int(key); code && *code >= 1 && *code <= 4) return *code;
  throw ClassificationError("unknown EURIS label '" + std::string(text_label) + "'");
}

std::string label_name(int code) {
  switch (code) {
    case 1: return "Innovation leaders";
    case 2: return "Strong innovators";
    case 3: return "Moderate innovators";
    case 4: return "Emerging innovators";
    default: throw ClassificationError("unknown label code " + std::to_string(code));
  }
}

Eigen::MatrixXd IndicatorPanel::matrix() const {
  const Eigen::Index p = static_cast<Eigen::Index>(indicator_names.size());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) out(static_cast<Eigen::Index>(i), j) = rows[i].values[j];
  }
  return out;
}

std::vector<int> IndicatorPanel::euris_labels() const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.euris_label);
  return out;
}

std::optional<std::size_t> IndicatorPanel::find(std::string_view region_id, int year) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].year == year && rows[i].region_id == region_id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> IndicatorPanel::find_key(std::string_view key) const {
  const auto pos = key.rfind('_');
  if (pos == std::string_view::npos) return std::nullopt;
  const auto year = parse_int(key.substr(pos + 1));
  if (!year) return std::nullopt;
  return find(key.substr(0, pos), *year);
}

IndicatorPanel load_scoreboard(std::istream& source, const ScoreboardSchema& schema) {
  if (schema.indicator_columns.size() != kIndicatorCount) {
    throw SchemaError("schema must map exactly " + std::to_string(kIndicatorCount) +
                      " indicator columns");
  }
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(source, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
      header = split_record(line, schema.delimiter, 0);
      break;
    }
  }
  if (header.empty()) throw SchemaError("input has no header");

  const std::size_t region_col = find_column(header, schema.region_column);
  const std::size_t year_col = find_column(header, schema.year_column);
  const std::size_t label_col = find_column(header, schema.label_column);
  std::array<std::size_t, kIndicatorCount> ind_cols{};
  for (std::size_t j = 0; j < kIndicatorCount; ++j) ind_cols[j] = find_column(header, schema.indicator_columns[j]);

  IndicatorPanel panel;
  std::size_t row_no = line_no;
  while (std::getline(source, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    auto fields = split_record(line, schema.delimiter, row_no);
    if (fields.size() != header.size()) {
      throw ParseError(row_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                   std::to_string(fields.size()));
    }
    RegionYear record;
    record.region_id = fields[region_col];
    if (record.region_id.empty()) throw DataError(row_no, "empty region identifier");
    const auto year = parse_int(fields[year_col]);
    if (!year) throw ParseError(row_no, "year '" + fields[year_col] + "' is not an integer");
    if (*year < schema.min_year || *year > schema.max_year) {
      throw DataError(row_no, "year " + std::to_string(*year) + " outside [" +
                                  std::to_string(schema.min_year) + ", " +
                                  std::to_string(schema.max_year) + "]");
    }
    record.year = *year;
    for (std::size_t j = 0; j < kIndicatorCount; ++j) {
      const std::string& cell = fields[ind_cols[j]];
      const std::string where = "'" + record.region_id + "' " + std::to_string(record.year) +
                                ", indicator " + schema.indicator_columns[j];
      if (cell.empty()) throw DataError(row_no, "missing value for " + where);
      const auto value = parse_double(cell);
      if (!value) {
        const std::string lc = lower(cell);
        if (lc == "nan" || lc == "inf" || lc == "-inf" || lc == "+inf" || lc == "na") {
          throw DataError(row_no, "non-finite value for " + where);
        }
        throw ParseError(row_no, "cannot parse '" + cell + "' as a number for " + where);
      }
      if (!std::isfinite(*value)) throw DataError(row_no, "non-finite value for " + where);
      record.values[j] = *value;
    }
    try {
      record.euris_label = encode_label(fields[label_col]);
    } catch (const ClassificationError& e) {
      throw ClassificationError("line " + std::to_string(row_no) + ": " + e.what());
    }
    panel.rows.push_back(std::move(record));
  }
  return panel;
}

IndicatorPanel load_scoreboard_file(const std::filesystem::path& path, const ScoreboardSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open input '" + path.string() + "'");
  return load_scoreboard(in, schema);
}

Eigen::MatrixXd StandardizedMatrix::apply(const Eigen::MatrixXd& raw) const {
  if (raw.cols() != column_means.size()) throw ArgumentError("column count mismatch");
  Eigen::MatrixXd out = raw.rowwise() - column_means.transpose();
  return out.array().rowwise() / column_stds.transpose().array();
}

Eigen::MatrixXd StandardizedMatrix::invert(const Eigen::MatrixXd& standardized) const {
  if (standardized.cols() != column_means.size()) throw ArgumentError("column count mismatch");
  Eigen::MatrixXd out = standardized.array().rowwise() * column_stds.transpose().array();
  return out.rowwise() + column_means.transpose();
}

StandardizedMatrix standardize(const Eigen::MatrixXd& raw, const std::vector<std::string>& names) {
  const Eigen::Index n = raw.rows();
  if (n == 0) throw InsufficientDataError("cannot standardize an empty matrix");
  StandardizedMatrix out;
  out.names = names;
  out.column_means = raw.colwise().mean().transpose();
  Eigen::MatrixXd centered = raw.rowwise() - out.column_means.transpose();
  out.column_stds = (centered.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose();
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const double scale = std::max(1.0, out.column_means(j) == 0.0 ? 1.0 : std::abs(out.column_means(j)));
    if (!(out.column_stds(j) > 1e-12 * scale)) {
      throw DegenerateFeatureError(j < static_cast<Eigen::Index>(names.size()) ? names[j] : std::to_string(j));
    }
  }
  out.data = centered.array().rowwise() / out.column_stds.transpose().array();
  return out;
}

StandardizedMatrix standardize(const IndicatorPanel& panel) {
  return standardize(panel.matrix(), panel.indicator_names);
}

Eigen::MatrixXd ScalingParams::apply(const Eigen::MatrixXd& raw) const {
  if (raw.cols() != min.size()) throw ArgumentError("column count mismatch");
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    out.col(j) = (2.0 * (raw.col(j).array() - min(j)) / (max(j) - min(j)) - 1.0).matrix();
  }
  return out;
}

Eigen::VectorXd ScalingParams::apply_row(std::span<const double> raw) const {
  if (static_cast<Eigen::Index>(raw.size()) != min.size()) throw ArgumentError("feature count mismatch");
  Eigen::VectorXd out(min.size());
  for (Eigen::Index j = 0; j < min.size(); ++j) out(j) = 2.0 * (raw[j] - min(j)) / (max(j) - min(j)) - 1.0;
  return out;
}

Eigen::MatrixXd ScalingParams::invert(const Eigen::MatrixXd& scaled) const {
  if (scaled.cols() != min.size()) throw ArgumentError("column count mismatch");
  Eigen::MatrixXd out(scaled.rows(), scaled.cols());
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    out.col(j) = ((scaled.col(j).array() + 1.0) * 0.5 * (max(j) - min(j)) + min(j)).matrix();
  }
  return out;
}

MinMaxResult minmax_scale(const Eigen::MatrixXd& matrix, const std::optional<ScalingParams>& params,
                          const std::vector<std::string>& names) {
  MinMaxResult out;
  if (params) {
    out.params = *params;
  } else {
    if (matrix.rows() == 0) throw InsufficientDataError("cannot fit scaling on an empty matrix");
    out.params.min = matrix.colwise().minCoeff().transpose();
    out.params.max = matrix.colwise().maxCoeff().transpose();
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (!(out.params.min(j) < out.params.max(j))) {
        throw DegenerateFeatureError(j < static_cast<Eigen::Index>(names.size()) ? names[j] : std::to_string(j));
      }
    }
  }
  out.scaled = out.params.apply(matrix);
  return out;
}

}  // namespace innoscope
