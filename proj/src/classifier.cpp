#include "innoscope/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "innoscope/error.hpp"

namespace innoscope {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <class T>
void shuffle_in_place(std::vector<T>& v, std::mt19937_64& rng) {
  // Fisher-Yates with an explicit draw so the order does not depend on the library's shuffle.
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

double stable_bce(double z, int y) {
  // max(z, 0) - z*y + log(1 + exp(-|z|))
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

struct AdamSlot {
  Eigen::MatrixXd m;
  Eigen::MatrixXd v;
};

}  // namespace

double sigmoid(double z) {
  const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

Splits make_splits(std::span<const int> labels, const SplitRatios& ratios, std::uint64_t seed) {
  if (!(ratios.train > 0.0 && ratios.validation > 0.0 && ratios.train + ratios.validation < 1.0)) {
    throw ArgumentError("split ratios must be positive and leave room for a test split");
  }
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ArgumentError("split labels must be binary");
    (labels[i] == 1 ? pos : neg).push_back(i);
  }
  std::mt19937_64 rng(mix(seed, 1));
  Splits splits;
  for (auto* stratum : {&neg, &pos}) {
    shuffle_in_place(*stratum, rng);
    const auto n = static_cast<double>(stratum->size());
    const auto n_train = static_cast<std::size_t>(std::floor(ratios.train * n + 1e-9));
    const auto n_val = static_cast<std::size_t>(std::floor(ratios.validation * n + 1e-9));
    for (std::size_t i = 0; i < stratum->size(); ++i) {
      auto& dest = i < n_train ? splits.train : (i < n_train + n_val ? splits.validation : splits.test);
      dest.push_back((*stratum)[i]);
    }
  }
  for (auto* split : {&splits.train, &splits.validation, &splits.test}) std::sort(split->begin(), split->end());
  auto positives = [&](const std::vector<std::size_t>& rows) {
    return std::count_if(rows.begin(), rows.end(), [&](std::size_t r) { return labels[r] == 1; });
  };
  if (positives(splits.train) == 0 || positives(splits.validation) == 0 || positives(splits.test) == 0) {
    throw StratificationError("a split has no positive examples (" + std::to_string(pos.size()) + " positives in total)");
  }
  return splits;
}

std::vector<std::size_t> undersample(std::span<const std::size_t> rows, std::span<const int> labels,
                                     std::uint64_t seed) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t r : rows) {
    if (r >= labels.size()) throw ArgumentError("row id outside the label vector");
    (labels[r] == 1 ? pos : neg).push_back(r);
  }
  if (pos.empty() || neg.empty()) throw BalanceError("undersampling needs both classes present");
  std::mt19937_64 rng(mix(seed, 2));
  auto& majority = pos.size() > neg.size() ? pos : neg;
  const auto& minority = pos.size() > neg.size() ? neg : pos;
  shuffle_in_place(majority, rng);
  majority.resize(minority.size());
  std::vector<std::size_t> out = neg;
  out.insert(out.end(), pos.begin(), pos.end());
  shuffle_in_place(out, rng);
  return out;
}

Eigen::VectorXd Network::logits(const Eigen::MatrixXd& scaled) const {
  const Eigen::MatrixXd pre = (scaled * w1.transpose()).rowwise() + b1.transpose();
  return (pre.cwiseMax(0.0) * w2).array() + b2;
}

std::size_t Network::parameter_count() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + 1);
}

double bce_loss(const Network& net, const Eigen::MatrixXd& scaled, std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != scaled.rows()) throw ArgumentError("label count mismatch");
  if (labels.empty()) return 0.0;
  const Eigen::VectorXd z = net.logits(scaled);
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) total += stable_bce(z(i), labels[i]);
  return total / static_cast<double>(labels.size());
}

NetworkGradients bce_gradients(const Network& net, const Eigen::MatrixXd& scaled, std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != scaled.rows()) throw ArgumentError("label count mismatch");
  const double inv_n = 1.0 / static_cast<double>(std::max<std::size_t>(labels.size(), 1));
  const Eigen::MatrixXd pre = (scaled * net.w1.transpose()).rowwise() + net.b1.transpose();
  const Eigen::MatrixXd hidden = pre.cwiseMax(0.0);
  const Eigen::VectorXd z = (hidden * net.w2).array() + net.b2;
  Eigen::VectorXd dz(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double p = z(i) >= 0.0 ? 1.0 / (1.0 + std::exp(-z(i))) : std::exp(z(i)) / (1.0 + std::exp(z(i)));
    dz(i) = (p - labels[i]) * inv_n;
  }
  NetworkGradients g;
  g.w2 = hidden.transpose() * dz;
  g.b2 = dz.sum();
  Eigen::MatrixXd dpre = dz * net.w2.transpose();
  dpre = dpre.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
  g.w1 = dpre.transpose() * scaled;
  g.b1 = dpre.colwise().sum().transpose();
  return g;
}

double MembershipClassifier::logit(std::span<const double> raw) const {
  if (static_cast<Eigen::Index>(raw.size()) != net.w1.cols()) {
    throw ArgumentError("expected " + std::to_string(net.w1.cols()) + " features, got " + std::to_string(raw.size()));
  }
  for (double v : raw) {
    if (!std::isfinite(v)) throw ArgumentError("feature values must be finite");
  }
  const Eigen::RowVectorXd scaled = scaling.apply_row(raw).transpose();
  return net.logits(scaled)(0);
}

double MembershipClassifier::predict_proba(std::span<const double> raw) const { return sigmoid(logit(raw)); }

int MembershipClassifier::classify(std::span<const double> raw) const {
  return predict_proba(raw) > threshold ? 1 : 0;
}

Eigen::VectorXd MembershipClassifier::predict_proba(const Eigen::MatrixXd& raw) const {
  if (!raw.allFinite()) throw ArgumentError("feature values must be finite");
  const Eigen::VectorXd z = net.logits(scaling.apply(raw));
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

MembershipClassifier train(const Eigen::MatrixXd& x_train, std::span<const int> y_train,
                           const Eigen::MatrixXd& x_validation, std::span<const int> y_validation,
                           const std::string& target, const Hyperparams& hp, std::uint64_t seed) {
  if (static_cast<Eigen::Index>(y_train.size()) != x_train.rows() ||
      static_cast<Eigen::Index>(y_validation.size()) != x_validation.rows()) {
    throw ArgumentError("feature and label counts differ");
  }
  if (x_train.rows() == 0) throw InsufficientDataError("empty training set");
  if (x_validation.cols() != x_train.cols()) throw ArgumentError("train and validation feature counts differ");
  if (hp.hidden < 1 || hp.epochs < 1 || hp.batch_size < 1 || !(hp.learning_rate > 0.0)) {
    throw ArgumentError("invalid hyperparameters");
  }
  if (!x_train.allFinite() || !x_validation.allFinite()) throw ArgumentError("feature values must be finite");

  MembershipClassifier model;
  model.target = target;
  model.threshold = hp.threshold;
  if (x_train.cols() != static_cast<Eigen::Index>(model.feature_names.size())) {
    model.feature_names.clear();
    for (Eigen::Index j = 0; j < x_train.cols(); ++j) model.feature_names.push_back("x" + std::to_string(j + 1));
  }

  // Constant training features map to 0 and are reported.
  model.scaling.min = x_train.colwise().minCoeff().transpose();
  model.scaling.max = x_train.colwise().maxCoeff().transpose();
  for (Eigen::Index j = 0; j < x_train.cols(); ++j) {
    if (!(model.scaling.min(j) < model.scaling.max(j))) {
      model.meta.constant_features.push_back(model.feature_names[j]);
      model.scaling.min(j) -= 1.0;
      model.scaling.max(j) += 1.0;
    }
  }
  if (static_cast<Eigen::Index>(model.meta.constant_features.size()) == x_train.cols()) {
    model.meta.no_learning = true;
    model.meta.warnings.push_back("all features are constant in the training split; the model can only learn the prior");
  } else if (!model.meta.constant_features.empty()) {
    model.meta.warnings.push_back(std::to_string(model.meta.constant_features.size()) +
                                  " feature(s) are constant in the training split");
  }
  const Eigen::MatrixXd xs = model.scaling.apply(x_train);
  const Eigen::MatrixXd xv = model.scaling.apply(x_validation);

  std::mt19937_64 rng(mix(seed, 3));
  const Eigen::Index inputs = x_train.cols();
  Network& net = model.net;
  {
    std::uniform_real_distribution<double> u1(-1.0 / std::sqrt(static_cast<double>(inputs)),
                                              1.0 / std::sqrt(static_cast<double>(inputs)));
    std::uniform_real_distribution<double> u2(-1.0 / std::sqrt(static_cast<double>(hp.hidden)),
                                              1.0 / std::sqrt(static_cast<double>(hp.hidden)));
    net.w1.resize(hp.hidden, inputs);
    for (Eigen::Index i = 0; i < net.w1.rows(); ++i)
      for (Eigen::Index j = 0; j < net.w1.cols(); ++j) net.w1(i, j) = u1(rng);
    net.b1 = Eigen::VectorXd::Zero(hp.hidden);
    net.w2.resize(hp.hidden);
    for (Eigen::Index i = 0; i < net.w2.size(); ++i) net.w2(i) = u2(rng);
    net.b2 = 0.0;
  }

  AdamSlot s_w1{Eigen::MatrixXd::Zero(net.w1.rows(), net.w1.cols()), Eigen::MatrixXd::Zero(net.w1.rows(), net.w1.cols())};
  AdamSlot s_b1{Eigen::MatrixXd::Zero(net.b1.size(), 1), Eigen::MatrixXd::Zero(net.b1.size(), 1)};
  AdamSlot s_w2{Eigen::MatrixXd::Zero(net.w2.size(), 1), Eigen::MatrixXd::Zero(net.w2.size(), 1)};
  AdamSlot s_b2{Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1)};
  long step = 0;
  auto adam = [&](Eigen::Ref<Eigen::MatrixXd> param, const Eigen::MatrixXd& grad, AdamSlot& slot) {
    slot.m = hp.beta1 * slot.m + (1.0 - hp.beta1) * grad;
    slot.v = hp.beta2 * slot.v + (1.0 - hp.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(hp.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(hp.beta2, static_cast<double>(step));
    param.array() -= hp.learning_rate * (slot.m.array() / c1) / ((slot.v.array() / c2).sqrt() + hp.epsilon);
  };

  model.meta.seed = seed;
  model.meta.epochs = hp.epochs;
  model.meta.batch_size = hp.full_batch ? static_cast<int>(x_train.rows()) : hp.batch_size;
  model.meta.learning_rate = hp.learning_rate;
  model.meta.n_train = static_cast<std::size_t>(x_train.rows());
  model.meta.n_validation = static_cast<std::size_t>(x_validation.rows());
  model.meta.initial_train_loss = bce_loss(net, xs, y_train);

  const bool has_validation = x_validation.rows() > 0;
  Network best = net;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(static_cast<std::size_t>(x_train.rows()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = static_cast<std::size_t>(model.meta.batch_size);

  for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
    if (!hp.full_batch) shuffle_in_place(order, rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const Eigen::MatrixXd xb = select_rows(xs, idx);
      std::vector<int> yb(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) yb[i] = y_train[idx[i]];
      const NetworkGradients g = bce_gradients(net, xb, yb);
      ++step;
      if (!hp.freeze_hidden) {
        adam(net.w1, g.w1, s_w1);
        adam(net.b1, g.b1, s_b1);
      }
      adam(net.w2, g.w2, s_w2);
      Eigen::MatrixXd b2(1, 1);
      b2(0, 0) = net.b2;
      Eigen::MatrixXd gb2(1, 1);
      gb2(0, 0) = g.b2;
      adam(b2, gb2, s_b2);
      net.b2 = b2(0, 0);
    }
    const double train_loss = bce_loss(net, xs, y_train);
    const double val_loss = has_validation ? bce_loss(net, xv, y_validation) : train_loss;
    if (!std::isfinite(train_loss) || !std::isfinite(val_loss) || !net.w1.allFinite() || !net.w2.allFinite()) {
      throw DivergenceError(epoch, "non-finite loss");
    }
    model.meta.train_loss.push_back(train_loss);
    model.meta.validation_loss.push_back(val_loss);
    if (val_loss < best_loss) {
      best_loss = val_loss;
      best = net;
      model.meta.best_epoch = epoch;
    }
  }
  model.net = std::move(best);
  model.meta.best_validation_loss = best_loss;
  return model;
}

EvaluationReport report_from_counts(long tp, long fp, long tn, long fn) {
  EvaluationReport r;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  const long total = tp + fp + tn + fn;
  r.accuracy = total > 0 ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  r.support[1] = tp + fn;
  r.support[0] = tn + fp;
  auto ratio = [](long num, long den, bool& undefined) {
    undefined = den == 0;
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision[1] = ratio(tp, tp + fp, r.precision_undefined[1]);
  r.recall[1] = ratio(tp, tp + fn, r.recall_undefined[1]);
  r.precision[0] = ratio(tn, tn + fn, r.precision_undefined[0]);
  r.recall[0] = ratio(tn, tn + fp, r.recall_undefined[0]);
  for (int c = 0; c < 2; ++c) {
    const double s = r.precision[c] + r.recall[c];
    r.f1[c] = s > 0.0 ? 2.0 * r.precision[c] * r.recall[c] / s : 0.0;
  }
  return r;
}

EvaluationReport evaluate(const MembershipClassifier& model, const Eigen::MatrixXd& x_test, std::span<const int> y_test) {
  if (static_cast<Eigen::Index>(y_test.size()) != x_test.rows()) throw ArgumentError("label count mismatch");
  const Eigen::VectorXd p = x_test.rows() > 0 ? model.predict_proba(x_test) : Eigen::VectorXd();
  long tp = 0, fp = 0, tn = 0, fn = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const int pred = p(i) > model.threshold ? 1 : 0;
    const int truth = y_test[i];
    if (pred == 1 && truth == 1) ++tp;
    else if (pred == 1) ++fp;
    else if (truth == 1) ++fn;
    else ++tn;
  }
  EvaluationReport r = report_from_counts(tp, fp, tn, fn);
  r.n_train = model.meta.n_train;
  r.n_validation = model.meta.n_validation;
  r.n_test = static_cast<std::size_t>(x_test.rows());
  return r;
}

TaskRun train_task(const Eigen::MatrixXd& x, std::span<const std::size_t> rows, std::span<const int> labels,
                   const std::string& target, const Hyperparams& hp, std::uint64_t seed, const SplitRatios& ratios) {
  if (rows.size() != labels.size()) throw ArgumentError("rows and labels differ in length");
  TaskRun run;
  run.splits = make_splits(labels, ratios, seed);
  run.balanced_train = undersample(run.splits.train, labels, seed);
  auto gather = [&](const std::vector<std::size_t>& positions, Eigen::MatrixXd& xo, std::vector<int>& yo) {
    xo.resize(static_cast<Eigen::Index>(positions.size()), x.cols());
    yo.resize(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
      xo.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[positions[i]]));
      yo[i] = labels[positions[i]];
    }
  };
  Eigen::MatrixXd xt, xv, xe;
  std::vector<int> yt, yv, ye;
  gather(run.balanced_train, xt, yt);
  gather(run.splits.validation, xv, yv);
  gather(run.splits.test, xe, ye);
  run.model = train(xt, yt, xv, yv, target, hp, seed);
  run.model.meta.n_test = run.splits.test.size();
  run.report = evaluate(run.model, xe, ye);
  return run;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

std::vector<ComparisonResult> compare_labelings(const Eigen::MatrixXd& x, const std::vector<LabelingTask>& tasks,
                                                const Hyperparams& hp, std::span<const std::uint64_t> seeds,
                                                bool parallel) {
  const std::size_t n_tasks = tasks.size();
  const std::size_t n_seeds = seeds.size();
  std::vector<EvaluationReport> reports(n_tasks * n_seeds);
  std::vector<std::string> errors(n_tasks * n_seeds);
  const auto total = static_cast<std::ptrdiff_t>(reports.size());
  auto one = [&](std::ptrdiff_t idx) {
    const std::size_t t = static_cast<std::size_t>(idx) / n_seeds;
    const std::size_t s = static_cast<std::size_t>(idx) % n_seeds;
    try {
      reports[static_cast<std::size_t>(idx)] =
          train_task(x, tasks[t].rows, tasks[t].labels, tasks[t].name, hp, seeds[s]).report;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(idx)] = tasks[t].name + ": " + e.what();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) one(idx);
  } else {
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) one(idx);
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw ClassificationError(e);
  }
  std::vector<ComparisonResult> out;
  for (std::size_t t = 0; t < n_tasks; ++t) {
    ComparisonResult res;
    res.name = tasks[t].name;
    res.seeds.assign(seeds.begin(), seeds.end());
    std::vector<double> acc, prec, rec;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const auto& r = reports[t * n_seeds + s];
      res.runs.push_back(r);
      acc.push_back(r.accuracy);
      prec.push_back(r.precision[1]);
      rec.push_back(r.recall[1]);
    }
    res.median_accuracy = median(acc);
    res.median_precision = median(prec);
    res.median_recall = median(rec);
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace innoscope
