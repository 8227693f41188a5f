#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "innoscope/dataset.hpp"
#include "innoscope/jdrc.hpp"

namespace innoscope {

// Tier codes share the EURIS numbering: 1 leader, 2 strong, 3 moderate, 4 emerging.
std::string tier_name(int tier);

// +1 when larger values along an axis are better, -1 when smaller values are better.
struct AxisSemantics {
  std::vector<int> orientation;
};

// Orients an axis by the sign of one indicator's score on it.
struct AxisAnchor {
  std::string indicator;
  int sign = 1;  // +1: higher indicator values are better
};

AxisSemantics resolve_axis_semantics(const Eigen::MatrixXd& variable_scores, const std::vector<AxisAnchor>& anchors,
                                     const std::vector<std::string>& names = indicator_codes());

struct ClusterLabel {
  int cluster = 0;  // 0-based
  int tier = 0;     // rank position 1..4
  double distance_to_leader = 0.0;
};

struct ClusterLabeling {
  std::vector<ClusterLabel> clusters;  // indexed by cluster
  int leader_cluster = 0;
  bool fallback_used = false;
  std::vector<std::string> warnings;

  int tier_of(int cluster) const { return clusters.at(static_cast<std::size_t>(cluster)).tier; }
  int cluster_of(int tier) const;
};

// Four centroids: leader dominates in the oriented coordinates, emerging is the opposite extreme,
// the middle pair is ordered by distance to the leader.
ClusterLabeling rank_centroids(const Eigen::MatrixXd& centroids, const AxisSemantics& axes);
ClusterLabeling rank_centroids(const JdrcModel& model, const AxisSemantics& axes);

enum class PivotRule { mean_plus_sd, within_sd };
std::string to_string(PivotRule rule);
PivotRule parse_pivot_rule(std::string_view text);

struct PivotFlags {
  PivotRule rule = PivotRule::mean_plus_sd;
  std::vector<bool> is_pivot;
  std::vector<double> dist;     // Euclidean distance to own centroid
  std::vector<double> mean;     // per cluster
  std::vector<double> sd;       // per cluster, population form
  std::vector<bool> sd_defined; // false for clusters with fewer than 2 members
  std::vector<int> members;
  std::vector<int> pivots;
  std::vector<std::string> warnings;

  double share(int cluster) const;
};

PivotFlags pivot_filter(std::span<const int> labels, const Eigen::MatrixXd& coords, const Eigen::MatrixXd& centroids,
                        PivotRule rule = PivotRule::mean_plus_sd);
PivotFlags pivot_filter(const JdrcModel& model, const Eigen::MatrixXd& std_data,
                        PivotRule rule = PivotRule::mean_plus_sd);

enum class RankingTarget { best_corner, centroid, leader_centroid };
std::string to_string(RankingTarget target);
RankingTarget parse_ranking_target(std::string_view text);

struct RankedMember {
  std::size_t row = 0;
  std::string region_id;
  int year = 0;
  double distance = 0.0;
};

struct ClusterRanking {
  int cluster = 0;
  int tier = 0;
  Eigen::VectorXd target;
  std::vector<RankedMember> members;  // ascending distance, ties by region key
  RankedMember first_in_class;        // member closest to the leader centroid
};

std::vector<ClusterRanking> intra_cluster_ranking(const JdrcModel& model, const IndicatorPanel& panel,
                                                  const Eigen::MatrixXd& std_data, const ClusterLabeling& labeling,
                                                  const AxisSemantics& axes,
                                                  RankingTarget target = RankingTarget::best_corner);

struct FineTunedDataset {
  std::vector<std::size_t> rows;
  std::vector<int> cluster;
  std::vector<int> tier;
};

FineTunedDataset fine_tuned_dataset(const PivotFlags& flags, std::span<const int> labels,
                                    const ClusterLabeling& labeling);

// Columns: region, year, fkm_cluster, label, euris_label, distance, pivot.
void write_labeling_report(std::ostream& out, const IndicatorPanel& panel, std::span<const int> labels,
                           const ClusterLabeling& labeling, const PivotFlags& flags, char delimiter = ',');

}  // namespace innoscope
