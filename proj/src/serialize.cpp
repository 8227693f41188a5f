#include "innoscope/serialize.hpp"

#include <cmath>
#include <limits>

#include "innoscope/error.hpp"

namespace innoscope {

namespace {

Json number(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return v;
}

double number_from(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    throw ArgumentError("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

template <class T>
Json pair_array(const T (&v)[2]) {
  return Json::array({v[0], v[1]});
}

Json optional_number(const std::optional<double>& v) { return v ? Json(number(*v)) : Json(nullptr); }

std::optional<double> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return number_from(j);
}

}  // namespace

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(number(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ArgumentError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols) throw ArgumentError("ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = number_from(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw ArgumentError("vector must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from(j[i]);
  return v;
}

Json make_document(const std::string& kind, Json data) {
  Json doc;
  doc["kind"] = kind;
  doc["version"] = kDocumentVersion;
  doc["data"] = std::move(data);
  return doc;
}

const Json& document_data(const Json& doc, const std::string& kind) {
  if (!doc.is_object() || doc.value("kind", "") != kind) throw ArgumentError("expected a '" + kind + "' document");
  if (doc.value("version", 0) != kDocumentVersion) {
    throw ArgumentError("unsupported '" + kind + "' document version " + std::to_string(doc.value("version", 0)));
  }
  return doc.at("data");
}

void to_json(Json& j, const RegionYear& v) {
  j = Json{{"region_id", v.region_id}, {"year", v.year}, {"values", v.values}, {"euris_label", v.euris_label}};
}

void from_json(const Json& j, RegionYear& v) {
  j.at("region_id").get_to(v.region_id);
  j.at("year").get_to(v.year);
  j.at("values").get_to(v.values);
  j.at("euris_label").get_to(v.euris_label);
}

void to_json(Json& j, const IndicatorPanel& v) {
  j = Json{{"indicator_names", v.indicator_names}, {"n_rows", v.n_rows()}, {"rows", v.rows}};
}

void from_json(const Json& j, IndicatorPanel& v) {
  j.at("indicator_names").get_to(v.indicator_names);
  j.at("rows").get_to(v.rows);
}

void to_json(Json& j, const ScoreboardSchema& v) {
  j = Json{{"region_column", v.region_column},     {"year_column", v.year_column},
           {"indicator_columns", v.indicator_columns}, {"label_column", v.label_column},
           {"delimiter", std::string(1, v.delimiter)}, {"min_year", v.min_year},
           {"max_year", v.max_year}};
}

void from_json(const Json& j, ScoreboardSchema& v) {
  v.region_column = j.value("region_column", v.region_column);
  v.year_column = j.value("year_column", v.year_column);
  if (j.contains("indicator_columns")) j.at("indicator_columns").get_to(v.indicator_columns);
  v.label_column = j.value("label_column", v.label_column);
  const std::string delim = j.value("delimiter", std::string(1, v.delimiter));
  if (delim.size() != 1) throw ArgumentError("delimiter must be a single character");
  v.delimiter = delim[0];
  v.min_year = j.value("min_year", v.min_year);
  v.max_year = j.value("max_year", v.max_year);
}

void to_json(Json& j, const StandardizedMatrix& v) {
  j = Json{{"names", v.names},
           {"convention", "population"},
           {"column_means", vector_to_json(v.column_means)},
           {"column_stds", vector_to_json(v.column_stds)}};
}

void from_json(const Json& j, StandardizedMatrix& v) {
  j.at("names").get_to(v.names);
  v.column_means = vector_from_json(j.at("column_means"));
  v.column_stds = vector_from_json(j.at("column_stds"));
}

void to_json(Json& j, const ScalingParams& v) {
  j = Json{{"range", Json::array({-1, 1})}, {"min", vector_to_json(v.min)}, {"max", vector_to_json(v.max)}};
}

void from_json(const Json& j, ScalingParams& v) {
  v.min = vector_from_json(j.at("min"));
  v.max = vector_from_json(j.at("max"));
}

void to_json(Json& j, const CorrelationReport& v) {
  j = Json{{"names", v.names},
           {"n_obs", v.n_obs},
           {"df", v.n_obs >= 2 ? v.n_obs - 2 : 0},
           {"r", matrix_to_json(v.r)},
           {"t", matrix_to_json(v.t_stats)},
           {"p_raw", matrix_to_json(v.p_raw)},
           {"p_holm", matrix_to_json(v.p_holm)}};
}

void from_json(const Json& j, CorrelationReport& v) {
  j.at("names").get_to(v.names);
  j.at("n_obs").get_to(v.n_obs);
  v.r = matrix_from_json(j.at("r"));
  v.t_stats = matrix_from_json(j.at("t"));
  v.p_raw = matrix_from_json(j.at("p_raw"));
  v.p_holm = matrix_from_json(j.at("p_holm"));
}

void to_json(Json& j, const PcaModel& v) {
  j = Json{{"names", v.names},
           {"eigenvalues", vector_to_json(v.eigenvalues)},
           {"loadings", matrix_to_json(v.loadings)},
           {"explained", vector_to_json(v.explained)},
           {"cumulative", vector_to_json(v.cumulative)},
           {"correlation", matrix_to_json(v.correlation)}};
}

void from_json(const Json& j, PcaModel& v) {
  j.at("names").get_to(v.names);
  v.eigenvalues = vector_from_json(j.at("eigenvalues"));
  v.loadings = matrix_from_json(j.at("loadings"));
  v.explained = vector_from_json(j.at("explained"));
  v.cumulative = vector_from_json(j.at("cumulative"));
  v.correlation = matrix_from_json(j.at("correlation"));
}

void to_json(Json& j, const VarianceRow& v) {
  j = Json{{"component", v.component},
           {"eigenvalue", v.eigenvalue},
           {"std_dev", v.std_dev},
           {"proportion", v.proportion},
           {"cumulative", v.cumulative}};
}

void to_json(Json& j, const FitOptions& v) {
  j = Json{{"seed", v.seed},         {"restarts", v.restarts},       {"tol", v.tol},
           {"max_iter", v.max_iter}, {"init", to_string(v.init)}, {"parallel", v.parallel}};
}

void from_json(const Json& j, FitOptions& v) {
  v.seed = j.value("seed", v.seed);
  v.restarts = j.value("restarts", v.restarts);
  v.tol = j.value("tol", v.tol);
  v.max_iter = j.value("max_iter", v.max_iter);
  if (j.contains("init")) v.init = parse_init(j.at("init").get<std::string>());
  v.parallel = j.value("parallel", v.parallel);
}

void to_json(Json& j, const JdrcModel& v) {
  j = Json{{"method", to_string(v.method)},
           {"k", v.k()},
           {"q", v.q()},
           {"A", matrix_to_json(v.A)},
           {"Y", matrix_to_json(v.Y)},
           {"labels", v.labels},
           {"sizes", v.sizes()},
           {"objective", v.objective},
           {"objective_trace", v.objective_trace},
           {"seed", v.seed},
           {"restarts", v.restarts},
           {"best_restart", v.best_restart},
           {"iterations", v.iterations},
           {"warnings", v.warnings}};
}

void from_json(const Json& j, JdrcModel& v) {
  v.method = parse_method(j.at("method").get<std::string>());
  v.A = matrix_from_json(j.at("A"));
  v.Y = matrix_from_json(j.at("Y"));
  j.at("labels").get_to(v.labels);
  j.at("objective").get_to(v.objective);
  j.at("objective_trace").get_to(v.objective_trace);
  j.at("seed").get_to(v.seed);
  j.at("restarts").get_to(v.restarts);
  j.at("best_restart").get_to(v.best_restart);
  j.at("iterations").get_to(v.iterations);
  j.at("warnings").get_to(v.warnings);
}

void to_json(Json& j, const ReducedPoint& v) {
  j = Json{{"row", v.row},
           {"region_id", v.region_id},
           {"year", v.year},
           {"coords", vector_to_json(v.coords)},
           {"cluster", v.cluster + 1},
           {"sq_dist_to_centroid", v.sq_dist_to_centroid}};
}

void from_json(const Json& j, ReducedPoint& v) {
  j.at("row").get_to(v.row);
  j.at("region_id").get_to(v.region_id);
  j.at("year").get_to(v.year);
  v.coords = vector_from_json(j.at("coords"));
  v.cluster = j.at("cluster").get<int>() - 1;
  j.at("sq_dist_to_centroid").get_to(v.sq_dist_to_centroid);
}

void to_json(Json& j, const AgreementMatrix& v) {
  Json counts = Json::array();
  for (Eigen::Index i = 0; i < v.counts.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < v.counts.cols(); ++k) row.push_back(v.counts(i, k));
    counts.push_back(std::move(row));
  }
  j = Json{{"counts", counts}, {"row_pct", matrix_to_json(v.row_pct)}, {"col_pct", matrix_to_json(v.col_pct)}};
}

void from_json(const Json& j, AgreementMatrix& v) {
  const Eigen::MatrixXd counts = matrix_from_json(j.at("counts"));
  v.counts = counts.cast<int>();
  v.row_pct = matrix_from_json(j.at("row_pct"));
  v.col_pct = matrix_from_json(j.at("col_pct"));
}

void to_json(Json& j, const WithinSS& v) { j = Json{{"per_cluster", v.per_cluster}, {"total", v.total}}; }

void from_json(const Json& j, WithinSS& v) {
  j.at("per_cluster").get_to(v.per_cluster);
  j.at("total").get_to(v.total);
}

void to_json(Json& j, const AxisAnchor& v) { j = Json{{"indicator", v.indicator}, {"sign", v.sign}}; }

void from_json(const Json& j, AxisAnchor& v) {
  j.at("indicator").get_to(v.indicator);
  v.sign = j.value("sign", 1);
}

void to_json(Json& j, const AxisSemantics& v) { j = Json{{"orientation", v.orientation}}; }

void from_json(const Json& j, AxisSemantics& v) { j.at("orientation").get_to(v.orientation); }

void to_json(Json& j, const ClusterLabeling& v) {
  Json clusters = Json::array();
  for (const auto& c : v.clusters) {
    clusters.push_back(Json{{"cluster", c.cluster + 1},
                            {"tier", c.tier},
                            {"label", tier_name(c.tier)},
                            {"distance_to_leader", c.distance_to_leader}});
  }
  j = Json{{"clusters", clusters},
           {"leader_cluster", v.leader_cluster + 1},
           {"fallback_used", v.fallback_used},
           {"warnings", v.warnings}};
}

void from_json(const Json& j, ClusterLabeling& v) {
  v.clusters.clear();
  for (const auto& c : j.at("clusters")) {
    v.clusters.push_back({c.at("cluster").get<int>() - 1, c.at("tier").get<int>(),
                          c.at("distance_to_leader").get<double>()});
  }
  v.leader_cluster = j.at("leader_cluster").get<int>() - 1;
  j.at("fallback_used").get_to(v.fallback_used);
  j.at("warnings").get_to(v.warnings);
}

void to_json(Json& j, const PivotFlags& v) {
  std::vector<int> pivot(v.is_pivot.begin(), v.is_pivot.end());
  std::vector<int> defined(v.sd_defined.begin(), v.sd_defined.end());
  j = Json{{"rule", to_string(v.rule)}, {"is_pivot", pivot},     {"dist", v.dist},
           {"mean", v.mean},            {"sd", v.sd},            {"sd_defined", defined},
           {"members", v.members},      {"pivots", v.pivots},    {"warnings", v.warnings}};
}

void from_json(const Json& j, PivotFlags& v) {
  v.rule = parse_pivot_rule(j.at("rule").get<std::string>());
  const auto pivot = j.at("is_pivot").get<std::vector<int>>();
  v.is_pivot.assign(pivot.begin(), pivot.end());
  j.at("dist").get_to(v.dist);
  j.at("mean").get_to(v.mean);
  j.at("sd").get_to(v.sd);
  const auto defined = j.at("sd_defined").get<std::vector<int>>();
  v.sd_defined.assign(defined.begin(), defined.end());
  j.at("members").get_to(v.members);
  j.at("pivots").get_to(v.pivots);
  j.at("warnings").get_to(v.warnings);
}

void to_json(Json& j, const RankedMember& v) {
  j = Json{{"row", v.row}, {"region_id", v.region_id}, {"year", v.year}, {"distance", v.distance}};
}

void from_json(const Json& j, RankedMember& v) {
  j.at("row").get_to(v.row);
  j.at("region_id").get_to(v.region_id);
  j.at("year").get_to(v.year);
  j.at("distance").get_to(v.distance);
}

void to_json(Json& j, const ClusterRanking& v) {
  j = Json{{"cluster", v.cluster + 1},
           {"tier", v.tier},
           {"target", vector_to_json(v.target)},
           {"first_in_class", v.first_in_class},
           {"members", v.members}};
}

void from_json(const Json& j, ClusterRanking& v) {
  v.cluster = j.at("cluster").get<int>() - 1;
  j.at("tier").get_to(v.tier);
  v.target = vector_from_json(j.at("target"));
  j.at("first_in_class").get_to(v.first_in_class);
  j.at("members").get_to(v.members);
}

void to_json(Json& j, const Hyperparams& v) {
  j = Json{{"hidden", v.hidden},       {"learning_rate", v.learning_rate}, {"epochs", v.epochs},
           {"batch_size", v.batch_size}, {"beta1", v.beta1},               {"beta2", v.beta2},
           {"epsilon", v.epsilon},     {"threshold", v.threshold},         {"freeze_hidden", v.freeze_hidden},
           {"full_batch", v.full_batch}};
}

void from_json(const Json& j, Hyperparams& v) {
  v.hidden = j.value("hidden", v.hidden);
  v.learning_rate = j.value("learning_rate", v.learning_rate);
  v.epochs = j.value("epochs", v.epochs);
  v.batch_size = j.value("batch_size", v.batch_size);
  v.beta1 = j.value("beta1", v.beta1);
  v.beta2 = j.value("beta2", v.beta2);
  v.epsilon = j.value("epsilon", v.epsilon);
  v.threshold = j.value("threshold", v.threshold);
  v.freeze_hidden = j.value("freeze_hidden", v.freeze_hidden);
  v.full_batch = j.value("full_batch", v.full_batch);
}

void to_json(Json& j, const SplitRatios& v) {
  j = Json{{"train", v.train}, {"validation", v.validation}, {"test", 1.0 - v.train - v.validation}};
}

void from_json(const Json& j, SplitRatios& v) {
  v.train = j.value("train", v.train);
  v.validation = j.value("validation", v.validation);
}

void to_json(Json& j, const Network& v) {
  j = Json{{"architecture",
            Json{{"inputs", v.w1.cols()},
                 {"layers", Json::array({Json{{"type", "dense"}, {"units", v.w1.rows()}, {"activation", "relu"}},
                                         Json{{"type", "dense"}, {"units", 1}, {"activation", "sigmoid"}}})}}},
           {"parameters", v.parameter_count()},
           {"w1", matrix_to_json(v.w1)},
           {"b1", vector_to_json(v.b1)},
           {"w2", vector_to_json(v.w2)},
           {"b2", v.b2}};
}

void from_json(const Json& j, Network& v) {
  v.w1 = matrix_from_json(j.at("w1"));
  v.b1 = vector_from_json(j.at("b1"));
  v.w2 = vector_from_json(j.at("w2"));
  j.at("b2").get_to(v.b2);
}

void to_json(Json& j, const TrainMeta& v) {
  j = Json{{"seed", v.seed},
           {"epochs", v.epochs},
           {"batch_size", v.batch_size},
           {"learning_rate", v.learning_rate},
           {"n_train", v.n_train},
           {"n_validation", v.n_validation},
           {"n_test", v.n_test},
           {"best_epoch", v.best_epoch},
           {"best_validation_loss", v.best_validation_loss},
           {"initial_train_loss", v.initial_train_loss},
           {"train_loss", v.train_loss},
           {"validation_loss", v.validation_loss},
           {"constant_features", v.constant_features},
           {"no_learning", v.no_learning},
           {"warnings", v.warnings}};
}

void from_json(const Json& j, TrainMeta& v) {
  j.at("seed").get_to(v.seed);
  j.at("epochs").get_to(v.epochs);
  j.at("batch_size").get_to(v.batch_size);
  j.at("learning_rate").get_to(v.learning_rate);
  j.at("n_train").get_to(v.n_train);
  j.at("n_validation").get_to(v.n_validation);
  j.at("n_test").get_to(v.n_test);
  j.at("best_epoch").get_to(v.best_epoch);
  j.at("best_validation_loss").get_to(v.best_validation_loss);
  j.at("initial_train_loss").get_to(v.initial_train_loss);
  j.at("train_loss").get_to(v.train_loss);
  j.at("validation_loss").get_to(v.validation_loss);
  j.at("constant_features").get_to(v.constant_features);
  j.at("no_learning").get_to(v.no_learning);
  j.at("warnings").get_to(v.warnings);
}

void to_json(Json& j, const MembershipClassifier& v) {
  j = Json{{"target", v.target},   {"feature_names", v.feature_names}, {"threshold", v.threshold},
           {"scaling", v.scaling}, {"network", v.net},                 {"train_meta", v.meta}};
}

void from_json(const Json& j, MembershipClassifier& v) {
  j.at("target").get_to(v.target);
  j.at("feature_names").get_to(v.feature_names);
  j.at("threshold").get_to(v.threshold);
  j.at("scaling").get_to(v.scaling);
  j.at("network").get_to(v.net);
  j.at("train_meta").get_to(v.meta);
}

void to_json(Json& j, const EvaluationReport& v) {
  j = Json{{"confusion", Json{{"tp", v.tp}, {"fp", v.fp}, {"tn", v.tn}, {"fn", v.fn}}},
           {"precision", pair_array(v.precision)},
           {"recall", pair_array(v.recall)},
           {"f1", pair_array(v.f1)},
           {"precision_undefined", pair_array(v.precision_undefined)},
           {"recall_undefined", pair_array(v.recall_undefined)},
           {"support", pair_array(v.support)},
           {"accuracy", v.accuracy},
           {"n_train", v.n_train},
           {"n_validation", v.n_validation},
           {"n_test", v.n_test}};
}

void from_json(const Json& j, EvaluationReport& v) {
  const auto& c = j.at("confusion");
  c.at("tp").get_to(v.tp);
  c.at("fp").get_to(v.fp);
  c.at("tn").get_to(v.tn);
  c.at("fn").get_to(v.fn);
  for (int i = 0; i < 2; ++i) {
    v.precision[i] = j.at("precision")[i].get<double>();
    v.recall[i] = j.at("recall")[i].get<double>();
    v.f1[i] = j.at("f1")[i].get<double>();
    v.precision_undefined[i] = j.at("precision_undefined")[i].get<bool>();
    v.recall_undefined[i] = j.at("recall_undefined")[i].get<bool>();
    v.support[i] = j.at("support")[i].get<long>();
  }
  j.at("accuracy").get_to(v.accuracy);
  j.at("n_train").get_to(v.n_train);
  j.at("n_validation").get_to(v.n_validation);
  j.at("n_test").get_to(v.n_test);
}

void to_json(Json& j, const ComparisonResult& v) {
  j = Json{{"name", v.name},
           {"seeds", v.seeds},
           {"median_accuracy", v.median_accuracy},
           {"median_precision", v.median_precision},
           {"median_recall", v.median_recall},
           {"runs", v.runs}};
}

void from_json(const Json& j, ComparisonResult& v) {
  j.at("name").get_to(v.name);
  j.at("seeds").get_to(v.seeds);
  j.at("median_accuracy").get_to(v.median_accuracy);
  j.at("median_precision").get_to(v.median_precision);
  j.at("median_recall").get_to(v.median_recall);
  j.at("runs").get_to(v.runs);
}

Overrides overrides_from_json(const Json& j) {
  Overrides out;
  if (j.is_null()) return out;
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (!value.is_number()) throw ArgumentError("override for '" + key + "' must be a number");
      out.emplace_back(key, value.get<double>());
    }
    return out;
  }
  if (j.is_array()) {
    for (const auto& item : j) {
      if (item.is_array() && item.size() == 2 && item[0].is_string() && item[1].is_number()) {
        out.emplace_back(item[0].get<std::string>(), item[1].get<double>());
      } else if (item.is_object() && item.contains("indicator") && item.contains("value") &&
                 item.at("value").is_number()) {
        out.emplace_back(item.at("indicator").get<std::string>(), item.at("value").get<double>());
      } else {
        throw ArgumentError("overrides must be [indicator, value] pairs");
      }
    }
    return out;
  }
  throw ArgumentError("overrides must be an object or an array");
}

Json overrides_to_json(const Overrides& o) {
  Json out = Json::array();
  for (const auto& [key, value] : o) out.push_back(Json::array({key, value}));
  return out;
}

void to_json(Json& j, const Trial& v) {
  j = Json{{"number", v.number},
           {"overrides", overrides_to_json(v.overrides)},
           {"cumulative", v.cumulative},
           {"vector", v.vector},
           {"probability", v.probability},
           {"timestamp", v.timestamp},
           {"out_of_range", v.out_of_range}};
}

void from_json(const Json& j, Trial& v) {
  j.at("number").get_to(v.number);
  v.overrides = overrides_from_json(j.at("overrides"));
  j.at("cumulative").get_to(v.cumulative);
  j.at("vector").get_to(v.vector);
  j.at("probability").get_to(v.probability);
  j.at("timestamp").get_to(v.timestamp);
  j.at("out_of_range").get_to(v.out_of_range);
}

void to_json(Json& j, const TrialLog& v) {
  j = Json{{"session_id", v.session_id}, {"target", v.target},         {"base_region", v.base_region},
           {"base_year", v.base_year},   {"base_vector", v.base_vector}, {"trials", v.trials}};
}

void from_json(const Json& j, TrialLog& v) {
  j.at("session_id").get_to(v.session_id);
  j.at("target").get_to(v.target);
  j.at("base_region").get_to(v.base_region);
  j.at("base_year").get_to(v.base_year);
  j.at("base_vector").get_to(v.base_vector);
  j.at("trials").get_to(v.trials);
}

void to_json(Json& j, const DonorSummary& v) {
  Json exemplars = Json::array();
  for (const auto& e : v.exemplars) {
    exemplars.push_back(Json{{"region_id", e.region_id}, {"year", e.year}, {"value", e.value}});
  }
  j = Json{{"indicator", v.indicator}, {"members", v.members}, {"min", v.min},
           {"median", v.median},       {"max", v.max},         {"exemplars", exemplars}};
}

void to_json(Json& j, const SweepPoint& v) { j = Json{{"value", v.value}, {"probability", v.probability}}; }

void to_json(Json& j, const KsResult& v) {
  j = Json{{"d_stat", v.d_stat}, {"p_value", v.p_value}, {"n1", v.n1}, {"n2", v.n2}, {"alternative", v.alternative}};
}

void to_json(Json& j, const ShiftRow& v) {
  j = Json{{"indicator", v.indicator}, {"pair", v.pair},
           {"n1", v.n1},               {"n2", v.n2},
           {"d_stat", optional_number(v.d_stat)}, {"p_value", optional_number(v.p_value)},
           {"verdict", v.verdict}};
}

void from_json(const Json& j, ShiftRow& v) {
  j.at("indicator").get_to(v.indicator);
  j.at("pair").get_to(v.pair);
  j.at("n1").get_to(v.n1);
  j.at("n2").get_to(v.n2);
  v.d_stat = optional_from(j.at("d_stat"));
  v.p_value = optional_from(j.at("p_value"));
  j.at("verdict").get_to(v.verdict);
}

}  // namespace innoscope
