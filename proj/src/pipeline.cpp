#include "innoscope/pipeline.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "innoscope/error.hpp"

namespace innoscope {

namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<std::string, std::string>>& document_files() {
  static const std::vector<std::pair<std::string, std::string>> files{
      {"config", "config.json"},         {"panel", "panel.json"},
      {"standardization", "standardization.json"}, {"correlation", "correlation.json"},
      {"pca", "pca.json"},               {"jdrc", "jdrc.json"},
      {"labeling", "labeling.json"},     {"classifier", "classifier.json"},
      {"evaluation", "evaluation.json"}, {"shift", "shift.json"}};
  return files;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

template <class F>
void run_stage(const std::string& name, F&& body) {
  try {
    body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.code(), e.what());
  } catch (const std::exception& e) {
    throw StageError(name, "internal_error", e.what());
  }
}

void require(const RunArtifacts& run, const std::string& doc, const std::string& stage) {
  if (!run.has(doc)) {
    throw ArgumentError("stage '" + stage + "' needs the '" + doc + "' document; run that stage first");
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (input.empty()) throw ArgumentError("config: input path is empty");
  if (k < 2) throw ArgumentError("config: k must be at least 2, got " + std::to_string(k));
  if (fit.restarts < 1) throw ArgumentError("config: restarts must be at least 1");
  if (fit.max_iter < 1) throw ArgumentError("config: max_iter must be at least 1");
  if (!(fit.tol >= 0.0)) throw ArgumentError("config: tol must be nonnegative");
  if (q_policy.kind == SelectionPolicy::Kind::manual &&
      (q_policy.q < 1 || q_policy.q > static_cast<int>(kIndicatorCount))) {
    throw RangeError("config: manual q outside [1, 14]");
  }
  if (axis_semantics.empty()) throw ArgumentError("config: axis_semantics is empty");
  for (const auto& a : axis_semantics) {
    if (a.sign != 1 && a.sign != -1) throw ArgumentError("config: axis sign must be +1 or -1");
    const auto& codes = indicator_codes();
    if (std::find(codes.begin(), codes.end(), a.indicator) == codes.end()) {
      throw ArgumentError("config: unknown axis anchor '" + a.indicator + "'");
    }
  }
  if (classifier.hidden < 1 || classifier.epochs < 1 || classifier.batch_size < 1 ||
      !(classifier.learning_rate > 0.0) || !(classifier.threshold > 0.0 && classifier.threshold < 1.0)) {
    throw ArgumentError("config: invalid classifier hyperparameters");
  }
  if (!(split.train > 0.0 && split.validation > 0.0 && split.train + split.validation < 1.0)) {
    throw ArgumentError("config: invalid split ratios");
  }
  if (comparison_seeds.empty()) throw ArgumentError("config: comparison_seeds is empty");
  if (!(significance > 0.0 && significance < 1.0)) throw ArgumentError("config: significance must lie in (0, 1)");
}

void to_json(Json& j, const PipelineConfig& v) {
  j = Json{{"input", v.input.string()},
           {"schema", v.schema},
           {"k", v.k},
           {"q_policy", v.q_policy.to_string()},
           {"fit", v.fit},
           {"axis_semantics", v.axis_semantics},
           {"pivot_rule", to_string(v.pivot_rule)},
           {"ranking_target", to_string(v.ranking_target)},
           {"classifier", v.classifier},
           {"split", v.split},
           {"classifier_seed", v.classifier_seed},
           {"comparison_seeds", v.comparison_seeds},
           {"significance", v.significance},
           {"ks_method", to_string(v.ks_method)},
           {"output", v.output.string()}};
}

void from_json(const Json& j, PipelineConfig& v) {
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  if (j.contains("input")) v.input = j.at("input").get<std::string>();
  if (j.contains("schema")) j.at("schema").get_to(v.schema);
  v.k = j.value("k", v.k);
  if (j.contains("q_policy")) v.q_policy = SelectionPolicy::parse(j.at("q_policy").get<std::string>());
  if (j.contains("fit")) j.at("fit").get_to(v.fit);
  if (j.contains("seed")) v.fit.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("restarts")) v.fit.restarts = j.at("restarts").get<int>();
  if (j.contains("axis_semantics")) j.at("axis_semantics").get_to(v.axis_semantics);
  if (j.contains("pivot_rule")) v.pivot_rule = parse_pivot_rule(j.at("pivot_rule").get<std::string>());
  if (j.contains("ranking_target")) v.ranking_target = parse_ranking_target(j.at("ranking_target").get<std::string>());
  if (j.contains("classifier")) j.at("classifier").get_to(v.classifier);
  if (j.contains("split")) j.at("split").get_to(v.split);
  v.classifier_seed = j.value("classifier_seed", v.classifier_seed);
  if (j.contains("comparison_seeds")) j.at("comparison_seeds").get_to(v.comparison_seeds);
  v.significance = j.value("significance", v.significance);
  if (j.contains("ks_method")) v.ks_method = parse_ks_method(j.at("ks_method").get<std::string>());
  if (j.contains("output")) v.output = j.at("output").get<std::string>();
}

PipelineConfig load_config(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ArgumentError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  PipelineConfig config;
  try {
    from_json(j, config);
  } catch (const Json::exception& e) {
    throw ArgumentError("config '" + path.string() + "': " + e.what());
  }
  return config;
}

void apply_env_overrides(PipelineConfig& config) {
  auto to_int = [](const std::string& name, const std::string& text) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw ArgumentError(name + " must be an integer, got '" + text + "'");
    }
  };
  if (auto v = env("INNOSCOPE_INPUT")) config.input = *v;
  if (auto v = env("INNOSCOPE_OUT")) config.output = *v;
  if (auto v = env("INNOSCOPE_K")) config.k = static_cast<int>(to_int("INNOSCOPE_K", *v));
  if (auto v = env("INNOSCOPE_SEED")) config.fit.seed = static_cast<std::uint64_t>(to_int("INNOSCOPE_SEED", *v));
  if (auto v = env("INNOSCOPE_RESTARTS")) config.fit.restarts = static_cast<int>(to_int("INNOSCOPE_RESTARTS", *v));
  if (auto v = env("INNOSCOPE_Q_POLICY")) config.q_policy = SelectionPolicy::parse(*v);
  if (auto v = env("INNOSCOPE_CLASSIFIER_SEED")) {
    config.classifier_seed = static_cast<std::uint64_t>(to_int("INNOSCOPE_CLASSIFIER_SEED", *v));
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("SHA-256 computation failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

std::string config_fingerprint(const PipelineConfig& config, const std::string& input_sha256) {
  Json j = config;
  j.erase("input");
  j.erase("output");
  return sha256_hex(j.dump() + "\n" + input_sha256);
}

std::vector<std::size_t> RunArtifacts::members_of_tier(int tier) const {
  const int cluster = labeling.cluster_of(tier);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fkm.labels.size(); ++i) {
    if (fkm.labels[i] == cluster) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXd RunArtifacts::coordinates() const { return project(fkm, standardized.data); }

void stage_ingest(RunArtifacts& run) {
  run.config.validate();
  run.panel = load_scoreboard_file(run.config.input, run.config.schema);
  run.input_sha256 = sha256_file(run.config.input);
  run.fingerprint = config_fingerprint(run.config, run.input_sha256);
  if (run.panel.n_rows() == 0) throw InsufficientDataError("input has no data rows");
  run.standardized = standardize(run.panel);
  run.present.insert({"config", "panel", "standardization"});
}

void stage_correlate(RunArtifacts& run) {
  require(run, "panel", "correlate");
  run.correlation = correlation_analysis(run.panel);
  run.present.insert("correlation");
}

void stage_pca(RunArtifacts& run) {
  require(run, "standardization", "pca");
  run.pca = fit_pca(run.standardized);
  run.q = select_components(run.pca, run.config.q_policy);
  run.present.insert("pca");
}

void stage_cluster(RunArtifacts& run) {
  require(run, "pca", "cluster");
  run.fkm = fit_fkm(run.standardized.data, run.config.k, run.q, run.config.fit);
  run.present.insert("jdrc");
}

void stage_label(RunArtifacts& run) {
  require(run, "jdrc", "label");
  const int q = run.fkm.q();
  if (static_cast<int>(run.config.axis_semantics.size()) < q) {
    throw ArgumentError("axis_semantics covers " + std::to_string(run.config.axis_semantics.size()) +
                        " axes but the model has q = " + std::to_string(q));
  }
  const std::vector<AxisAnchor> anchors(run.config.axis_semantics.begin(), run.config.axis_semantics.begin() + q);
  run.axes = resolve_axis_semantics(run.fkm.A, anchors, run.panel.indicator_names);
  run.labeling = rank_centroids(run.fkm, run.axes);
  const Eigen::MatrixXd coords = run.coordinates();
  run.pivots = pivot_filter(run.fkm.labels, coords, run.fkm.Y, run.config.pivot_rule);

  const auto euris = run.panel.euris_labels();
  run.agreement = agreement_matrix(run.fkm.labels, euris, run.fkm.k());
  run.fkm_within = within_ss(run.fkm.labels, coords, run.fkm.k());
  std::vector<int> euris0;
  for (int e : euris) euris0.push_back(e - 1);
  run.euris_within = within_ss(euris0, coords);

  const auto fine = fine_tuned_dataset(run.pivots, run.fkm.labels, run.labeling);
  Eigen::MatrixXd fine_coords(static_cast<Eigen::Index>(fine.rows.size()), coords.cols());
  for (std::size_t i = 0; i < fine.rows.size(); ++i) {
    fine_coords.row(static_cast<Eigen::Index>(i)) = coords.row(static_cast<Eigen::Index>(fine.rows[i]));
  }
  run.fine_within = within_ss(fine.cluster, fine_coords, run.fkm.k());
  run.nearest = nearest_to_centroid(run.fkm, run.panel, run.standardized.data);
  run.rankings = intra_cluster_ranking(run.fkm, run.panel, run.standardized.data, run.labeling, run.axes,
                                       run.config.ranking_target);
  run.present.insert("labeling");
}

void stage_train(RunArtifacts& run) {
  require(run, "labeling", "train");
  const Eigen::MatrixXd raw = run.panel.matrix();
  const int leader = run.labeling.leader_cluster;
  const auto euris = run.panel.euris_labels();

  std::vector<LabelingTask> tasks(4);
  tasks[0].name = "euris";
  tasks[1].name = "fkm";
  tasks[2].name = "fine_tuned";
  tasks[3].name = "intersection";
  for (std::size_t i = 0; i < run.panel.n_rows(); ++i) {
    const int e = euris[i] == 1 ? 1 : 0;
    const int f = run.fkm.labels[i] == leader ? 1 : 0;
    tasks[0].rows.push_back(i);
    tasks[0].labels.push_back(e);
    tasks[1].rows.push_back(i);
    tasks[1].labels.push_back(f);
    if (run.pivots.is_pivot[i]) {
      tasks[2].rows.push_back(i);
      tasks[2].labels.push_back(f);
    }
    if (e == f) {
      tasks[3].rows.push_back(i);
      tasks[3].labels.push_back(f);
    }
  }
  TaskRun leader_run = train_task(raw, tasks[1].rows, tasks[1].labels, tier_name(1), run.config.classifier,
                                  run.config.classifier_seed, run.config.split);
  run.leader_classifier = std::move(leader_run.model);
  run.leader_evaluation = leader_run.report;
  run.comparison = compare_labelings(raw, tasks, run.config.classifier, run.config.comparison_seeds);
  run.present.insert({"classifier", "evaluation"});
}

void stage_shift(RunArtifacts& run) {
  require(run, "panel", "shift");
  run.shift = shift_report(run.panel, run.config.significance, run.config.ks_method);
  run.present.insert("shift");
}

RunArtifacts run_pipeline(const PipelineConfig& config) {
  run_stage("config", [&] { config.validate(); });
  RunArtifacts run;
  run.config = config;
  run_stage("ingest", [&] { stage_ingest(run); });
  run_stage("correlate", [&] { stage_correlate(run); });
  run_stage("pca", [&] { stage_pca(run); });
  run_stage("cluster", [&] { stage_cluster(run); });
  run_stage("label", [&] { stage_label(run); });
  run_stage("train", [&] { stage_train(run); });
  run_stage("shift", [&] { stage_shift(run); });
  return run;
}

std::string cluster_summary(const RunArtifacts& run) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  const auto& m = run.fkm;
  out << "Cluster centroids:\n";
  out << std::setw(12) << "";
  for (int d = 0; d < m.q(); ++d) out << std::setw(12) << ("Dim." + std::to_string(d + 1));
  out << "\n";
  for (int c = 0; c < m.k(); ++c) {
    out << std::setw(12) << ("Cluster " + std::to_string(c + 1));
    for (int d = 0; d < m.q(); ++d) out << std::setw(12) << m.Y(c, d);
    if (run.has("labeling")) out << "  " << tier_name(run.labeling.tier_of(c));
    out << "\n";
  }
  out << "\nVariable scores:\n";
  for (int i = 0; i < m.p(); ++i) {
    out << std::setw(12) << run.panel.indicator_names[static_cast<std::size_t>(i)];
    for (int d = 0; d < m.q(); ++d) out << std::setw(12) << m.A(i, d);
    out << "\n";
  }
  out << "\nClusters size:\n";
  for (int c = 0; c < m.k(); ++c) out << std::setw(8) << (c + 1);
  out << "\n";
  for (int s : m.sizes()) out << std::setw(8) << s;
  out << "\n";
  if (run.has("labeling")) {
    out << "\nNearest to centroid:\n";
    for (const auto& p : run.nearest) {
      out << "  cluster " << p.cluster + 1 << "  " << p.key();
      for (Eigen::Index d = 0; d < p.coords.size(); ++d) out << "  " << p.coords(d);
      out << "  sq_dist " << p.sq_dist_to_centroid << "\n";
    }
    out << "\nPivot share:\n";
    for (int c = 0; c < m.k(); ++c) {
      out << "  cluster " << c + 1 << "  " << std::setprecision(4) << 100.0 * run.pivots.share(c) << "%\n";
    }
  }
  out << "\nObjective: " << std::setprecision(10) << m.objective << " (best of " << m.restarts << " restarts)\n";
  return out.str();
}

std::vector<std::pair<std::string, std::string>> render_bundle(const RunArtifacts& run) {
  std::vector<std::pair<std::string, std::string>> files;
  std::map<std::string, Json> docs;
  if (run.has("config")) {
    docs["config"] = Json{{"config", run.config}, {"input_sha256", run.input_sha256}, {"fingerprint", run.fingerprint}};
  }
  if (run.has("panel")) docs["panel"] = run.panel;
  if (run.has("standardization")) docs["standardization"] = run.standardized;
  if (run.has("correlation")) docs["correlation"] = run.correlation;
  if (run.has("pca")) {
    docs["pca"] = Json{{"model", run.pca},
                       {"variance_table", variance_table(run.pca)},
                       {"policy", run.config.q_policy.to_string()},
                       {"q", run.q}};
  }
  if (run.has("jdrc")) docs["jdrc"] = Json{{"model", run.fkm}};
  if (run.has("labeling")) {
    docs["labeling"] = Json{{"axis_semantics", run.axes},
                            {"labeling", run.labeling},
                            {"pivots", run.pivots},
                            {"agreement", run.agreement},
                            {"compactness", Json{{"fkm", run.fkm_within},
                                                 {"euris", run.euris_within},
                                                 {"fine_tuned", run.fine_within}}},
                            {"nearest", run.nearest},
                            {"rankings", run.rankings}};
  }
  if (run.has("classifier")) docs["classifier"] = Json{{"leader", run.leader_classifier}};
  if (run.has("evaluation")) {
    docs["evaluation"] = Json{{"leader", run.leader_evaluation}, {"comparison", run.comparison}};
  }
  if (run.has("shift")) {
    docs["shift"] = Json{{"significance", run.config.significance},
                         {"method", to_string(run.config.ks_method)},
                         {"rows", run.shift}};
  }
  for (const auto& [kind, file] : document_files()) {
    auto it = docs.find(kind);
    if (it != docs.end()) files.emplace_back(file, dump(make_document(kind, it->second)));
  }

  if (run.has("correlation")) {
    std::ostringstream s;
    write_correlation_table(s, run.correlation);
    files.emplace_back("reports/correlation.csv", s.str());
  }
  if (run.has("pca")) {
    std::ostringstream s;
    write_variance_table(s, run.pca);
    files.emplace_back("reports/variance.csv", s.str());
  }
  if (run.has("jdrc")) files.emplace_back("reports/clusters.txt", cluster_summary(run));
  if (run.has("labeling")) {
    std::ostringstream s;
    write_labeling_report(s, run.panel, run.fkm.labels, run.labeling, run.pivots);
    files.emplace_back("reports/labeling.csv", s.str());
    std::ostringstream a;
    a << std::setprecision(10) << "fkm_cluster,label";
    for (int e = 1; e <= 4; ++e) a << ",count_" << e;
    for (int e = 1; e <= 4; ++e) a << ",row_pct_" << e;
    for (int e = 1; e <= 4; ++e) a << ",col_pct_" << e;
    a << "\n";
    for (int c = 0; c < run.agreement.counts.rows(); ++c) {
      a << c + 1 << "," << tier_name(run.labeling.tier_of(c));
      for (int e = 0; e < 4; ++e) a << "," << run.agreement.counts(c, e);
      for (int e = 0; e < 4; ++e) a << "," << run.agreement.row_pct(c, e);
      for (int e = 0; e < 4; ++e) a << "," << run.agreement.col_pct(c, e);
      a << "\n";
    }
    files.emplace_back("reports/agreement.csv", a.str());
  }
  if (run.has("evaluation")) {
    std::ostringstream s;
    s << std::setprecision(10)
      << "labeling,seed,accuracy,precision_1,recall_1,f1_1,precision_0,recall_0,tp,fp,tn,fn,n_test\n";
    for (const auto& res : run.comparison) {
      for (std::size_t i = 0; i < res.runs.size(); ++i) {
        const auto& r = res.runs[i];
        s << res.name << "," << res.seeds[i] << "," << r.accuracy << "," << r.precision[1] << "," << r.recall[1]
          << "," << r.f1[1] << "," << r.precision[0] << "," << r.recall[0] << "," << r.tp << "," << r.fp << ","
          << r.tn << "," << r.fn << "," << r.n_test << "\n";
      }
      s << res.name << ",median," << res.median_accuracy << "," << res.median_precision << ","
        << res.median_recall << ",,,,,,,,\n";
    }
    files.emplace_back("reports/comparison.csv", s.str());
  }
  if (run.has("shift")) {
    std::ostringstream s;
    write_shift_report(s, run.shift);
    files.emplace_back("reports/shift.csv", s.str());
  }

  Json manifest;
  manifest["format"] = "innoscope-bundle";
  manifest["version"] = kDocumentVersion;
  manifest["fingerprint"] = run.fingerprint;
  Json entries = Json::array();
  for (const auto& [path, bytes] : files) {
    std::string kind;
    for (const auto& [k, f] : document_files()) {
      if (f == path) kind = k;
    }
    entries.push_back(Json{{"path", path}, {"kind", kind.empty() ? Json(nullptr) : Json(kind)},
                           {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }
  manifest["documents"] = entries;
  files.emplace_back("manifest.json", dump(manifest));
  return files;
}

void write_bundle(const RunArtifacts& run, const fs::path& dir) {
  const auto files = render_bundle(run);
  const fs::path target = fs::absolute(dir).lexically_normal();
  const fs::path parent = target.parent_path();
  fs::create_directories(parent);
  const std::string suffix = "." + std::to_string(::getpid());
  const fs::path tmp = parent / (target.filename().string() + ".tmp" + suffix);
  const fs::path old = parent / (target.filename().string() + ".old" + suffix);
  fs::remove_all(tmp);
  try {
    for (const auto& [path, bytes] : files) {
      const fs::path file = tmp / path;
      fs::create_directories(file.parent_path());
      std::ofstream out(file, std::ios::binary);
      if (!out) throw ArgumentError("cannot write '" + file.string() + "'");
      out << bytes;
      if (!out) throw ArgumentError("write failed for '" + file.string() + "'");
    }
    if (fs::exists(target)) fs::rename(target, old);
    fs::rename(tmp, target);
    fs::remove_all(old);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    if (!fs::exists(target, ec) && fs::exists(old, ec)) fs::rename(old, target, ec);
    throw;
  }
}

RunArtifacts read_bundle(const fs::path& dir, bool verify) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw ArgumentError("'" + dir.string() + "' is not a bundle (no manifest.json)");
  Json manifest;
  try {
    manifest = Json::parse(read_file(manifest_path));
  } catch (const Json::parse_error& e) {
    throw ArgumentError(std::string("manifest.json is not valid JSON: ") + e.what());
  }
  if (manifest.value("format", "") != "innoscope-bundle") throw ArgumentError("unknown bundle format");
  if (manifest.value("version", 0) != kDocumentVersion) throw ArgumentError("unsupported bundle version");

  RunArtifacts run;
  run.fingerprint = manifest.value("fingerprint", "");
  std::map<std::string, Json> docs;
  for (const auto& entry : manifest.at("documents")) {
    const std::string path = entry.at("path").get<std::string>();
    const std::string bytes = read_file(dir / path);
    if (verify && sha256_hex(bytes) != entry.at("sha256").get<std::string>()) {
      throw ArgumentError("hash mismatch for '" + path + "'");
    }
    if (entry.at("kind").is_string()) {
      const std::string kind = entry.at("kind").get<std::string>();
      docs[kind] = document_data(Json::parse(bytes), kind);
    }
  }
  try {
    if (docs.count("config")) {
      const Json& c = docs["config"];
      c.at("config").get_to(run.config);
      run.input_sha256 = c.at("input_sha256").get<std::string>();
      run.fingerprint = c.at("fingerprint").get<std::string>();
      run.present.insert("config");
    }
    if (docs.count("panel")) {
      docs["panel"].get_to(run.panel);
      run.present.insert("panel");
    }
    if (docs.count("standardization")) {
      docs["standardization"].get_to(run.standardized);
      run.standardized.data = run.standardized.apply(run.panel.matrix());
      run.present.insert("standardization");
    }
    if (docs.count("correlation")) {
      docs["correlation"].get_to(run.correlation);
      run.present.insert("correlation");
    }
    if (docs.count("pca")) {
      docs["pca"].at("model").get_to(run.pca);
      run.q = docs["pca"].at("q").get<int>();
      run.present.insert("pca");
    }
    if (docs.count("jdrc")) {
      docs["jdrc"].at("model").get_to(run.fkm);
      run.present.insert("jdrc");
    }
    if (docs.count("labeling")) {
      const Json& l = docs["labeling"];
      l.at("axis_semantics").get_to(run.axes);
      l.at("labeling").get_to(run.labeling);
      l.at("pivots").get_to(run.pivots);
      l.at("agreement").get_to(run.agreement);
      l.at("compactness").at("fkm").get_to(run.fkm_within);
      l.at("compactness").at("euris").get_to(run.euris_within);
      l.at("compactness").at("fine_tuned").get_to(run.fine_within);
      l.at("nearest").get_to(run.nearest);
      l.at("rankings").get_to(run.rankings);
      run.present.insert("labeling");
    }
    if (docs.count("classifier")) {
      docs["classifier"].at("leader").get_to(run.leader_classifier);
      run.present.insert("classifier");
    }
    if (docs.count("evaluation")) {
      docs["evaluation"].at("leader").get_to(run.leader_evaluation);
      docs["evaluation"].at("comparison").get_to(run.comparison);
      run.present.insert("evaluation");
    }
    if (docs.count("shift")) {
      docs["shift"].at("rows").get_to(run.shift);
      run.present.insert("shift");
    }
  } catch (const Json::exception& e) {
    throw ArgumentError(std::string("malformed bundle document: ") + e.what());
  }
  return run;
}

}  // namespace innoscope
