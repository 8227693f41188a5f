#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "innoscope/dataset.hpp"

namespace innoscope {

struct SplitRatios {
  double train = 0.6;
  double validation = 0.2;
};

// Row positions (into the label vector) of each split, ascending.
struct Splits {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

// Stratified by label: per class, floor(ratio * n_class) rows go to train and validation,
// the remainder to test.
Splits make_splits(std::span<const int> labels, const SplitRatios& ratios, std::uint64_t seed);

// Randomly drops majority-class rows down to the minority count and shuffles the result.
// labels is indexed by the row ids found in rows.
std::vector<std::size_t> undersample(std::span<const std::size_t> rows, std::span<const int> labels,
                                     std::uint64_t seed);

struct Hyperparams {
  int hidden = 100;
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 32;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double threshold = 0.5;
  bool freeze_hidden = false;  // train only the output unit
  bool full_batch = false;
};

// 14 -> hidden ReLU -> 1 sigmoid.
struct Network {
  Eigen::MatrixXd w1;  // hidden x inputs
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;  // hidden
  double b2 = 0.0;

  // Logits for rows of already-scaled features.
  Eigen::VectorXd logits(const Eigen::MatrixXd& scaled) const;
  std::size_t parameter_count() const;
};

struct NetworkGradients {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;
};

// Mean binary cross-entropy over the rows.
double bce_loss(const Network& net, const Eigen::MatrixXd& scaled, std::span<const int> labels);
NetworkGradients bce_gradients(const Network& net, const Eigen::MatrixXd& scaled, std::span<const int> labels);

double sigmoid(double z);

struct TrainMeta {
  std::uint64_t seed = 0;
  int epochs = 0;
  int batch_size = 0;
  double learning_rate = 0.0;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::size_t n_test = 0;
  int best_epoch = 0;
  double best_validation_loss = 0.0;
  double initial_train_loss = 0.0;
  std::vector<double> train_loss;       // full training-set loss after each epoch
  std::vector<double> validation_loss;  // after each epoch
  std::vector<std::string> constant_features;
  bool no_learning = false;
  std::vector<std::string> warnings;
};

struct MembershipClassifier {
  std::string target;
  std::vector<std::string> feature_names = indicator_codes();
  Network net;
  ScalingParams scaling;
  double threshold = 0.5;
  TrainMeta meta;

  // Raw feature row in original units.
  double predict_proba(std::span<const double> raw) const;
  double logit(std::span<const double> raw) const;
  int classify(std::span<const double> raw) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& raw) const;
};

// Scaling is fit on x_train only. Returns the weights of the epoch with the lowest validation loss.
MembershipClassifier train(const Eigen::MatrixXd& x_train, std::span<const int> y_train,
                           const Eigen::MatrixXd& x_validation, std::span<const int> y_validation,
                           const std::string& target, const Hyperparams& hp, std::uint64_t seed);

struct EvaluationReport {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
  // Index 0: negative class, 1: positive class.
  double precision[2] = {0.0, 0.0};
  double recall[2] = {0.0, 0.0};
  double f1[2] = {0.0, 0.0};
  bool precision_undefined[2] = {false, false};
  bool recall_undefined[2] = {false, false};
  long support[2] = {0, 0};
  double accuracy = 0.0;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::size_t n_test = 0;
};

EvaluationReport evaluate(const MembershipClassifier& model, const Eigen::MatrixXd& x_test, std::span<const int> y_test);
// Metrics from confusion counts.
EvaluationReport report_from_counts(long tp, long fp, long tn, long fn);

// Split, undersample the training split, train, evaluate on the test split.
struct TaskRun {
  MembershipClassifier model;
  EvaluationReport report;
  Splits splits;
  std::vector<std::size_t> balanced_train;
};

// rows index x; labels[i] is the binary target of rows[i].
TaskRun train_task(const Eigen::MatrixXd& x, std::span<const std::size_t> rows, std::span<const int> labels,
                   const std::string& target, const Hyperparams& hp, std::uint64_t seed,
                   const SplitRatios& ratios = {});

struct LabelingTask {
  std::string name;
  std::vector<std::size_t> rows;
  std::vector<int> labels;
};

struct ComparisonResult {
  std::string name;
  std::vector<std::uint64_t> seeds;
  std::vector<EvaluationReport> runs;
  double median_accuracy = 0.0;
  double median_precision = 0.0;  // positive class
  double median_recall = 0.0;     // positive class
};

std::vector<ComparisonResult> compare_labelings(const Eigen::MatrixXd& x, const std::vector<LabelingTask>& tasks,
                                                const Hyperparams& hp, std::span<const std::uint64_t> seeds,
                                                bool parallel = true);

double median(std::vector<double> values);

}  // namespace innoscope
