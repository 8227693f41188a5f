#include "innoscope/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "innoscope/error.hpp"

namespace innoscope {

namespace {

bool key_less(const RankedMember& a, const RankedMember& b) {
  if (a.region_id != b.region_id) return a.region_id < b.region_id;
  return a.year < b.year;
}

bool rank_less(const RankedMember& a, const RankedMember& b) {
  if (a.distance != b.distance) return a.distance < b.distance;
  return key_less(a, b);
}

}  // namespace

std::string tier_name(int tier) {
  switch (tier) {
    case 1: return "Innovation leader";
    case 2: return "Strong innovator";
    case 3: return "Moderate innovator";
    case 4: return "Emerging innovator";
    default: throw ArgumentError("tier must lie in [1, 4], got " + std::to_string(tier));
  }
}

AxisSemantics resolve_axis_semantics(const Eigen::MatrixXd& variable_scores, const std::vector<AxisAnchor>& anchors,
                                     const std::vector<std::string>& names) {
  if (static_cast<Eigen::Index>(anchors.size()) != variable_scores.cols()) {
    throw ArgumentError("need one axis anchor per reduced dimension (" + std::to_string(variable_scores.cols()) +
                        "), got " + std::to_string(anchors.size()));
  }
  AxisSemantics axes;
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    const auto it = std::find(names.begin(), names.end(), anchors[j].indicator);
    if (it == names.end()) throw ArgumentError("unknown anchor indicator '" + anchors[j].indicator + "'");
    if (anchors[j].sign != 1 && anchors[j].sign != -1) throw ArgumentError("anchor sign must be +1 or -1");
    const double score = variable_scores(it - names.begin(), static_cast<Eigen::Index>(j));
    if (score == 0.0) throw ArgumentError("anchor '" + anchors[j].indicator + "' has zero score on its axis");
    axes.orientation.push_back(score > 0.0 ? anchors[j].sign : -anchors[j].sign);
  }
  return axes;
}

int ClusterLabeling::cluster_of(int tier) const {
  for (const auto& c : clusters) {
    if (c.tier == tier) return c.cluster;
  }
  throw LookupError("no cluster carries tier " + std::to_string(tier));
}

ClusterLabeling rank_centroids(const Eigen::MatrixXd& centroids, const AxisSemantics& axes) {
  const Eigen::Index k = centroids.rows();
  const Eigen::Index q = centroids.cols();
  if (k != 4) throw ArgumentError("labeling needs exactly 4 clusters, got " + std::to_string(k));
  if (static_cast<Eigen::Index>(axes.orientation.size()) != q) {
    throw ArgumentError("axis semantics must cover " + std::to_string(q) + " axes");
  }
  Eigen::MatrixXd oriented = centroids;
  for (Eigen::Index j = 0; j < q; ++j) {
    if (axes.orientation[j] != 1 && axes.orientation[j] != -1) throw ArgumentError("orientation must be +1 or -1");
    oriented.col(j) *= axes.orientation[j];
  }
  auto dominates = [&](Eigen::Index a, bool best) {
    for (Eigen::Index b = 0; b < k; ++b) {
      if (b == a) continue;
      for (Eigen::Index j = 0; j < q; ++j) {
        if (best ? oriented(a, j) < oriented(b, j) : oriented(a, j) > oriented(b, j)) return false;
      }
    }
    return true;
  };
  Eigen::Index leader = -1;
  Eigen::Index emerging = -1;
  for (Eigen::Index c = 0; c < k; ++c) {
    if (leader < 0 && dominates(c, true)) leader = c;
    if (emerging < 0 && dominates(c, false)) emerging = c;
  }

  ClusterLabeling out;
  out.clusters.resize(static_cast<std::size_t>(k));
  std::vector<int> order;
  if (leader >= 0 && emerging >= 0 && leader != emerging) {
    std::vector<int> middle;
    for (int c = 0; c < k; ++c) {
      if (c != leader && c != emerging) middle.push_back(c);
    }
    auto d = [&](int c) { return (centroids.row(c) - centroids.row(leader)).norm(); };
    std::stable_sort(middle.begin(), middle.end(), [&](int a, int b) { return d(a) < d(b); });
    order = {static_cast<int>(leader), middle[0], middle[1], static_cast<int>(emerging)};
  } else {
    out.fallback_used = true;
    out.warnings.push_back("no centroid dominates in the declared directions; ranking by distance to the best corner");
    const Eigen::RowVectorXd corner = oriented.colwise().maxCoeff();
    order.resize(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    auto d = [&](int c) { return (oriented.row(c) - corner).norm(); };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d(a) < d(b); });
  }
  out.leader_cluster = order[0];
  for (int rank = 0; rank < k; ++rank) {
    const int c = order[rank];
    out.clusters[c] = {c, rank + 1, (centroids.row(c) - centroids.row(order[0])).norm()};
  }
  return out;
}

ClusterLabeling rank_centroids(const JdrcModel& model, const AxisSemantics& axes) {
  return rank_centroids(model.Y, axes);
}

std::string to_string(PivotRule rule) { return rule == PivotRule::mean_plus_sd ? "mean_plus_sd" : "within_sd"; }

PivotRule parse_pivot_rule(std::string_view text) {
  if (text == "mean_plus_sd") return PivotRule::mean_plus_sd;
  if (text == "within_sd") return PivotRule::within_sd;
  throw ArgumentError("unknown pivot rule '" + std::string(text) + "'");
}

double PivotFlags::share(int cluster) const {
  const auto c = static_cast<std::size_t>(cluster);
  return members.at(c) == 0 ? 0.0 : static_cast<double>(pivots.at(c)) / members.at(c);
}

PivotFlags pivot_filter(std::span<const int> labels, const Eigen::MatrixXd& coords, const Eigen::MatrixXd& centroids,
                        PivotRule rule) {
  if (static_cast<Eigen::Index>(labels.size()) != coords.rows()) throw ArgumentError("label count mismatch");
  if (coords.cols() != centroids.cols()) throw ArgumentError("centroid dimension mismatch");
  const int k = static_cast<int>(centroids.rows());
  PivotFlags flags;
  flags.rule = rule;
  flags.dist.resize(labels.size());
  flags.is_pivot.assign(labels.size(), false);
  flags.mean.assign(static_cast<std::size_t>(k), 0.0);
  flags.sd.assign(static_cast<std::size_t>(k), 0.0);
  flags.sd_defined.assign(static_cast<std::size_t>(k), true);
  flags.members.assign(static_cast<std::size_t>(k), 0);
  flags.pivots.assign(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= k) throw ArgumentError("cluster label out of range");
    flags.dist[i] = (coords.row(static_cast<Eigen::Index>(i)) - centroids.row(c)).norm();
    flags.mean[c] += flags.dist[i];
    ++flags.members[c];
  }
  for (int c = 0; c < k; ++c) {
    if (flags.members[c] > 0) flags.mean[c] /= flags.members[c];
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double dev = flags.dist[i] - flags.mean[labels[i]];
    flags.sd[labels[i]] += dev * dev;
  }
  for (int c = 0; c < k; ++c) {
    if (flags.members[c] >= 2) {
      flags.sd[c] = std::sqrt(flags.sd[c] / flags.members[c]);
    } else {
      flags.sd[c] = 0.0;
      flags.sd_defined[c] = false;
      if (flags.members[c] == 1) {
        flags.warnings.push_back("cluster " + std::to_string(c + 1) +
                                 " has a single member; its spread is undefined and the member is kept as pivot");
      }
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i];
    bool pivot = true;
    if (flags.sd_defined[c]) {
      const double limit = rule == PivotRule::mean_plus_sd ? flags.mean[c] + flags.sd[c] : flags.sd[c];
      pivot = flags.dist[i] <= limit;
    }
    flags.is_pivot[i] = pivot;
    if (pivot) ++flags.pivots[c];
  }
  return flags;
}

PivotFlags pivot_filter(const JdrcModel& model, const Eigen::MatrixXd& std_data, PivotRule rule) {
  return pivot_filter(model.labels, project(model, std_data), model.Y, rule);
}

std::string to_string(RankingTarget target) {
  switch (target) {
    case RankingTarget::best_corner: return "best_corner";
    case RankingTarget::centroid: return "centroid";
    case RankingTarget::leader_centroid: return "leader_centroid";
  }
  return {};
}

RankingTarget parse_ranking_target(std::string_view text) {
  if (text == "best_corner") return RankingTarget::best_corner;
  if (text == "centroid") return RankingTarget::centroid;
  if (text == "leader_centroid") return RankingTarget::leader_centroid;
  throw ArgumentError("unknown ranking target '" + std::string(text) + "'");
}

std::vector<ClusterRanking> intra_cluster_ranking(const JdrcModel& model, const IndicatorPanel& panel,
                                                  const Eigen::MatrixXd& std_data, const ClusterLabeling& labeling,
                                                  const AxisSemantics& axes, RankingTarget target) {
  if (model.labels.size() != panel.n_rows()) throw ArgumentError("model and panel disagree on row count");
  if (static_cast<int>(axes.orientation.size()) != model.q()) throw ArgumentError("axis semantics size mismatch");
  const Eigen::MatrixXd coords = project(model, std_data);
  const int k = model.k();
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < model.labels.size(); ++i) members[model.labels[i]].push_back(i);

  const Eigen::RowVectorXd leader = model.Y.row(labeling.leader_cluster);
  std::vector<ClusterRanking> out;
  for (int c = 0; c < k; ++c) {
    ClusterRanking ranking;
    ranking.cluster = c;
    ranking.tier = labeling.tier_of(c);
    Eigen::RowVectorXd goal = model.Y.row(c);
    if (target == RankingTarget::leader_centroid) {
      goal = leader;
    } else if (target == RankingTarget::best_corner && !members[c].empty()) {
      for (int j = 0; j < model.q(); ++j) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i : members[c]) best = std::max(best, axes.orientation[j] * coords(static_cast<Eigen::Index>(i), j));
        goal(j) = axes.orientation[j] * best;
      }
    }
    ranking.target = goal.transpose();
    std::vector<RankedMember> to_leader;
    for (std::size_t i : members[c]) {
      const auto& row = panel.rows[i];
      const auto r = coords.row(static_cast<Eigen::Index>(i));
      ranking.members.push_back({i, row.region_id, row.year, (r - goal).norm()});
      to_leader.push_back({i, row.region_id, row.year, (r - leader).norm()});
    }
    std::sort(ranking.members.begin(), ranking.members.end(), rank_less);
    if (!to_leader.empty()) ranking.first_in_class = *std::min_element(to_leader.begin(), to_leader.end(), rank_less);
    out.push_back(std::move(ranking));
  }
  return out;
}

FineTunedDataset fine_tuned_dataset(const PivotFlags& flags, std::span<const int> labels,
                                    const ClusterLabeling& labeling) {
  if (flags.is_pivot.size() != labels.size()) throw ArgumentError("pivot flags and labels differ in length");
  FineTunedDataset out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!flags.is_pivot[i]) continue;
    out.rows.push_back(i);
    out.cluster.push_back(labels[i]);
    out.tier.push_back(labeling.tier_of(labels[i]));
  }
  return out;
}

void write_labeling_report(std::ostream& out, const IndicatorPanel& panel, std::span<const int> labels,
                           const ClusterLabeling& labeling, const PivotFlags& flags, char delimiter) {
  if (labels.size() != panel.n_rows() || flags.dist.size() != panel.n_rows()) {
    throw ArgumentError("labeling report inputs disagree on row count");
  }
  const char d = delimiter;
  out << "region" << d << "year" << d << "fkm_cluster" << d << "label" << d << "euris_label" << d << "distance" << d
      << "pivot\n";
  const auto precision = out.precision(10);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& row = panel.rows[i];
    out << row.region_id << d << row.year << d << labels[i] + 1 << d << tier_name(labeling.tier_of(labels[i])) << d
        << label_name(row.euris_label) << d << flags.dist[i] << d << (flags.is_pivot[i] ? 1 : 0) << '\n';
  }
  out.precision(precision);
}

}  // namespace innoscope
