#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "innoscope/classifier.hpp"
#include "innoscope/dataset.hpp"

namespace innoscope {

using Overrides = std::vector<std::pair<std::string, double>>;

struct Scenario {
  std::string region_id;
  int year = 0;
  Overrides overrides;
  bool cumulative = true;
};

// Base row values with the overrides substituted (later entries win).
std::vector<double> resolve(const IndicatorPanel& panel, const Scenario& scenario);
std::vector<double> apply_overrides(std::vector<double> base, const Overrides& overrides,
                                    const std::vector<std::string>& names = indicator_codes());

struct Trial {
  int number = 0;
  Overrides overrides;
  bool cumulative = true;
  std::vector<double> vector;
  double probability = 0.0;
  std::string timestamp;                  // UTC, ISO 8601
  std::vector<std::string> out_of_range;  // indicators outside the classifier's training range
};

struct TrialLog {
  std::string session_id;
  std::string target;
  std::string base_region;
  int base_year = 0;
  std::vector<double> base_vector;
  std::vector<Trial> trials;
};

// Appends one trial. The first trial fixes the base; later trials must use the same base.
const Trial& run_trial(TrialLog& log, const IndicatorPanel& panel, const std::string& region_id, int year,
                       const Overrides& overrides, bool cumulative, const MembershipClassifier& model);

// Re-evaluates every trial of a log against a model; returns the probabilities in order.
std::vector<double> replay(const TrialLog& log, const MembershipClassifier& model);

struct SweepPoint {
  double value = 0.0;
  double probability = 0.0;
};

// Probability with one indicator swept over a sorted finite grid.
std::vector<SweepPoint> sensitivity_sweep(const std::vector<double>& base, const std::string& indicator,
                                          const std::vector<double>& grid, const MembershipClassifier& model,
                                          const std::vector<std::string>& names = indicator_codes());
// steps evenly spaced values from `from` to `to` inclusive.
std::vector<double> linear_grid(double from, double to, int steps);

struct DonorExemplar {
  std::string region_id;
  int year = 0;
  double value = 0.0;
};

struct DonorSummary {
  std::string indicator;
  std::size_t members = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
  std::vector<DonorExemplar> exemplars;  // descending value, ties by region key
};

// Summary of one indicator over the member rows (indices into the panel).
DonorSummary donor_lookup(const IndicatorPanel& panel, const std::vector<std::size_t>& members,
                          const std::string& indicator, std::optional<int> year = std::nullopt,
                          std::size_t limit = 0);

// Columns: trial number, change description, probability (percent).
void write_trial_table(std::ostream& out, const TrialLog& log, char delimiter = ',');

std::string utc_timestamp();

}  // namespace innoscope
