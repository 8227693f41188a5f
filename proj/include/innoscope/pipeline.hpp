#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "innoscope/classifier.hpp"
#include "innoscope/dataset.hpp"
#include "innoscope/jdrc.hpp"
#include "innoscope/labeling.hpp"
#include "innoscope/pca.hpp"
#include "innoscope/serialize.hpp"
#include "innoscope/shift.hpp"

namespace innoscope {

struct PipelineConfig {
  std::filesystem::path input;
  ScoreboardSchema schema;
  int k = 4;
  SelectionPolicy q_policy;
  FitOptions fit;
  std::vector<AxisAnchor> axis_semantics{{"2.1.1", 1}, {"1.2.2", 1}};
  PivotRule pivot_rule = PivotRule::mean_plus_sd;
  RankingTarget ranking_target = RankingTarget::best_corner;
  Hyperparams classifier;
  SplitRatios split;
  std::uint64_t classifier_seed = 20230;
  std::vector<std::uint64_t> comparison_seeds{1, 2, 3, 4, 5};
  double significance = 0.05;
  KsPValue ks_method = KsPValue::asymptotic;
  std::filesystem::path output = "bundle";

  // Checks every field; throws ArgumentError before any computation.
  void validate() const;
};

void to_json(Json& j, const PipelineConfig& v);
void from_json(const Json& j, PipelineConfig& v);
PipelineConfig load_config(const std::filesystem::path& path);
// INNOSCOPE_INPUT, _OUT, _K, _SEED, _RESTARTS, _Q_POLICY, _CLASSIFIER_SEED.
void apply_env_overrides(PipelineConfig& config);
std::string config_fingerprint(const PipelineConfig& config, const std::string& input_sha256);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// Everything a run produces. `present` lists the documents that have been filled in.
struct RunArtifacts {
  PipelineConfig config;
  std::string input_sha256;
  std::string fingerprint;
  std::set<std::string> present;

  IndicatorPanel panel;
  StandardizedMatrix standardized;
  CorrelationReport correlation;
  PcaModel pca;
  int q = 0;
  JdrcModel fkm;
  AxisSemantics axes;
  ClusterLabeling labeling;
  PivotFlags pivots;
  AgreementMatrix agreement;
  WithinSS fkm_within;
  WithinSS euris_within;
  WithinSS fine_within;
  std::vector<ReducedPoint> nearest;
  std::vector<ClusterRanking> rankings;
  MembershipClassifier leader_classifier;
  EvaluationReport leader_evaluation;
  std::vector<ComparisonResult> comparison;
  std::vector<ShiftRow> shift;

  bool has(const std::string& doc) const { return present.count(doc) > 0; }
  // Panel rows whose FKM cluster carries the given tier.
  std::vector<std::size_t> members_of_tier(int tier) const;
  // Standardized panel in the reduced space.
  Eigen::MatrixXd coordinates() const;
};

// Stage functions; each fills its part of the artifacts and marks the document present.
void stage_ingest(RunArtifacts& run);
void stage_correlate(RunArtifacts& run);
void stage_pca(RunArtifacts& run);
void stage_cluster(RunArtifacts& run);
void stage_label(RunArtifacts& run);
void stage_train(RunArtifacts& run);
void stage_shift(RunArtifacts& run);

// ingest -> correlate -> pca -> cluster -> label -> train -> shift. Stage failures raise StageError.
RunArtifacts run_pipeline(const PipelineConfig& config);

// Bundle: one JSON document per stage, CSV reports, and manifest.json with SHA-256 hashes.
// write_bundle replaces `dir` atomically; partial output is removed on failure.
void write_bundle(const RunArtifacts& run, const std::filesystem::path& dir);
// Loads every document listed in the manifest after checking its hash.
RunArtifacts read_bundle(const std::filesystem::path& dir, bool verify = true);
// Bundle files (relative path -> bytes) exactly as write_bundle emits them.
std::vector<std::pair<std::string, std::string>> render_bundle(const RunArtifacts& run);

// Human-readable cluster summary: centroids, variable scores, sizes, nearest regions.
std::string cluster_summary(const RunArtifacts& run);

}  // namespace innoscope
