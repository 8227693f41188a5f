#pragma once

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "innoscope/classifier.hpp"
#include "innoscope/dataset.hpp"
#include "innoscope/jdrc.hpp"
#include "innoscope/labeling.hpp"
#include "innoscope/pca.hpp"
#include "innoscope/shift.hpp"
#include "innoscope/whatif.hpp"

namespace innoscope {

using Json = nlohmann::ordered_json;

// Matrices are arrays of rows; non-finite entries are encoded as strings.
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);
Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

// Versioned document envelope: {"kind", "version", "data"}.
inline constexpr int kDocumentVersion = 1;
Json make_document(const std::string& kind, Json data);
const Json& document_data(const Json& doc, const std::string& kind);

void to_json(Json& j, const RegionYear& v);
void from_json(const Json& j, RegionYear& v);
void to_json(Json& j, const IndicatorPanel& v);
void from_json(const Json& j, IndicatorPanel& v);
void to_json(Json& j, const ScoreboardSchema& v);
void from_json(const Json& j, ScoreboardSchema& v);
void to_json(Json& j, const StandardizedMatrix& v);  // parameters only
void from_json(const Json& j, StandardizedMatrix& v);
void to_json(Json& j, const ScalingParams& v);
void from_json(const Json& j, ScalingParams& v);
void to_json(Json& j, const CorrelationReport& v);
void from_json(const Json& j, CorrelationReport& v);

void to_json(Json& j, const PcaModel& v);
void from_json(const Json& j, PcaModel& v);
void to_json(Json& j, const VarianceRow& v);

void to_json(Json& j, const FitOptions& v);
void from_json(const Json& j, FitOptions& v);
void to_json(Json& j, const JdrcModel& v);
void from_json(const Json& j, JdrcModel& v);
void to_json(Json& j, const ReducedPoint& v);
void from_json(const Json& j, ReducedPoint& v);
void to_json(Json& j, const AgreementMatrix& v);
void from_json(const Json& j, AgreementMatrix& v);
void to_json(Json& j, const WithinSS& v);
void from_json(const Json& j, WithinSS& v);

void to_json(Json& j, const AxisAnchor& v);
void from_json(const Json& j, AxisAnchor& v);
void to_json(Json& j, const AxisSemantics& v);
void from_json(const Json& j, AxisSemantics& v);
void to_json(Json& j, const ClusterLabeling& v);
void from_json(const Json& j, ClusterLabeling& v);
void to_json(Json& j, const PivotFlags& v);
void from_json(const Json& j, PivotFlags& v);
void to_json(Json& j, const RankedMember& v);
void from_json(const Json& j, RankedMember& v);
void to_json(Json& j, const ClusterRanking& v);
void from_json(const Json& j, ClusterRanking& v);

void to_json(Json& j, const Hyperparams& v);
void from_json(const Json& j, Hyperparams& v);
void to_json(Json& j, const SplitRatios& v);
void from_json(const Json& j, SplitRatios& v);
void to_json(Json& j, const Network& v);
void from_json(const Json& j, Network& v);
void to_json(Json& j, const TrainMeta& v);
void from_json(const Json& j, TrainMeta& v);
void to_json(Json& j, const MembershipClassifier& v);
void from_json(const Json& j, MembershipClassifier& v);
void to_json(Json& j, const EvaluationReport& v);
void from_json(const Json& j, EvaluationReport& v);
void to_json(Json& j, const ComparisonResult& v);
void from_json(const Json& j, ComparisonResult& v);

void to_json(Json& j, const Trial& v);
void from_json(const Json& j, Trial& v);
void to_json(Json& j, const TrialLog& v);
void from_json(const Json& j, TrialLog& v);
void to_json(Json& j, const DonorSummary& v);
void to_json(Json& j, const SweepPoint& v);

void to_json(Json& j, const KsResult& v);
void to_json(Json& j, const ShiftRow& v);
void from_json(const Json& j, ShiftRow& v);

// Accepts {"code": value, ...} or [["code", value], ...].
Overrides overrides_from_json(const Json& j);
Json overrides_to_json(const Overrides& o);

}  // namespace innoscope
