#include "innoscope/whatif.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>
#include <sstream>

#include "innoscope/error.hpp"

namespace innoscope {

namespace {

std::size_t position_of(const std::vector<std::string>& names, const std::string& indicator) {
  const auto it = std::find(names.begin(), names.end(), indicator);
  if (it == names.end()) throw ArgumentError("unknown indicator '" + indicator + "'");
  return static_cast<std::size_t>(it - names.begin());
}

const RegionYear& base_row(const IndicatorPanel& panel, const std::string& region_id, int year) {
  const auto idx = panel.find(region_id, year);
  if (!idx) throw LookupError("no row for region '" + region_id + "' in " + std::to_string(year));
  return panel.rows[*idx];
}

}  // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> apply_overrides(std::vector<double> base, const Overrides& overrides,
                                    const std::vector<std::string>& names) {
  for (const auto& [name, value] : overrides) {
    const auto pos = position_of(names, name);
    if (!std::isfinite(value)) throw ArgumentError("override for '" + name + "' is not finite");
    base.at(pos) = value;
  }
  return base;
}

std::vector<double> resolve(const IndicatorPanel& panel, const Scenario& scenario) {
  const RegionYear& row = base_row(panel, scenario.region_id, scenario.year);
  return apply_overrides(std::vector<double>(row.values.begin(), row.values.end()), scenario.overrides,
                         panel.indicator_names);
}

const Trial& run_trial(TrialLog& log, const IndicatorPanel& panel, const std::string& region_id, int year,
                       const Overrides& overrides, bool cumulative, const MembershipClassifier& model) {
  const RegionYear& row = base_row(panel, region_id, year);
  if (log.trials.empty()) {
    log.base_region = region_id;
    log.base_year = year;
    log.base_vector.assign(row.values.begin(), row.values.end());
    if (log.target.empty()) log.target = model.target;
  } else if (log.base_region != region_id || log.base_year != year) {
    throw ArgumentError("session is bound to " + log.base_region + "_" + std::to_string(log.base_year));
  }
  const std::vector<double>& start = cumulative && !log.trials.empty() ? log.trials.back().vector : log.base_vector;
  Trial trial;
  trial.number = static_cast<int>(log.trials.size()) + 1;
  trial.overrides = overrides;
  trial.cumulative = cumulative;
  trial.vector = apply_overrides(start, overrides, panel.indicator_names);
  try {
    trial.probability = model.predict_proba(trial.vector);
  } catch (const Error& e) {
    throw ClassificationError("trial " + std::to_string(trial.number) + ": " + e.what());
  }
  for (std::size_t j = 0; j < trial.vector.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    if (trial.vector[j] < model.scaling.min(jj) || trial.vector[j] > model.scaling.max(jj)) {
      trial.out_of_range.push_back(panel.indicator_names[j]);
    }
  }
  trial.timestamp = utc_timestamp();
  log.trials.push_back(std::move(trial));
  return log.trials.back();
}

std::vector<double> replay(const TrialLog& log, const MembershipClassifier& model) {
  std::vector<double> out;
  std::vector<double> current = log.base_vector;
  for (const auto& trial : log.trials) {
    const std::vector<double>& start = trial.cumulative ? current : log.base_vector;
    current = apply_overrides(start, trial.overrides, model.feature_names);
    out.push_back(model.predict_proba(current));
  }
  return out;
}

std::vector<SweepPoint> sensitivity_sweep(const std::vector<double>& base, const std::string& indicator,
                                          const std::vector<double>& grid, const MembershipClassifier& model,
                                          const std::vector<std::string>& names) {
  const auto pos = position_of(names, indicator);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ArgumentError("sweep grid must be finite");
    if (i > 0 && grid[i] < grid[i - 1]) throw ArgumentError("sweep grid must be sorted");
  }
  std::vector<SweepPoint> out;
  std::vector<double> v = base;
  for (double value : grid) {
    v.at(pos) = value;
    out.push_back({value, model.predict_proba(v)});
  }
  return out;
}

std::vector<double> linear_grid(double from, double to, int steps) {
  if (steps < 1) throw ArgumentError("steps must be at least 1");
  if (!std::isfinite(from) || !std::isfinite(to)) throw ArgumentError("grid bounds must be finite");
  if (to < from) throw ArgumentError("grid upper bound is below the lower bound");
  std::vector<double> grid;
  if (steps == 1) return {from};
  for (int i = 0; i < steps; ++i) grid.push_back(from + (to - from) * i / (steps - 1));
  grid.back() = to;
  return grid;
}

DonorSummary donor_lookup(const IndicatorPanel& panel, const std::vector<std::size_t>& members,
                          const std::string& indicator, std::optional<int> year, std::size_t limit) {
  const auto pos = position_of(panel.indicator_names, indicator);
  DonorSummary out;
  out.indicator = indicator;
  std::vector<DonorExemplar> rows;
  for (std::size_t i : members) {
    const auto& row = panel.rows.at(i);
    if (year && row.year != *year) continue;
    rows.push_back({row.region_id, row.year, row.values[pos]});
  }
  if (rows.empty()) throw ArgumentError("target cluster has no members" + std::string(year ? " in that year" : ""));
  std::sort(rows.begin(), rows.end(), [](const DonorExemplar& a, const DonorExemplar& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.region_id != b.region_id) return a.region_id < b.region_id;
    return a.year < b.year;
  });
  std::vector<double> values;
  for (const auto& r : rows) values.push_back(r.value);
  out.members = rows.size();
  out.max = values.front();
  out.min = values.back();
  out.median = median(values);
  if (limit > 0 && rows.size() > limit) rows.resize(limit);
  out.exemplars = std::move(rows);
  return out;
}

void write_trial_table(std::ostream& out, const TrialLog& log, char delimiter) {
  const char d = delimiter;
  out << "trial" << d << "change" << d << "probability_pct\n";
  for (const auto& trial : log.trials) {
    std::ostringstream change;
    if (trial.overrides.empty()) change << "no change";
    for (std::size_t i = 0; i < trial.overrides.size(); ++i) {
      if (i > 0) change << "; ";
      change << trial.overrides[i].first << " -> " << trial.overrides[i].second;
    }
    std::string text = change.str();
    if (text.find(d) != std::string::npos || text.find('"') != std::string::npos) {
      std::string quoted = "\"";
      for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      text = quoted + "\"";
    }
    out << trial.number << d << text << d << trial.probability * 100.0 << '\n';
  }
}

}  // namespace innoscope
