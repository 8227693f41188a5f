#include <doctest.h>

#include "fixture.hpp"
#include "innoscope/error.hpp"
#include "innoscope/serialize.hpp"

using namespace innoscope;

TEST_CASE("matrices keep non-finite values and exact bits") {
  Eigen::MatrixXd m(2, 3);
  m << 0.1, -2.5e-300, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
      std::numeric_limits<double>::quiet_NaN(), 1.0 / 3.0;
  const Eigen::MatrixXd back = matrix_from_json(Json::parse(matrix_to_json(m).dump()));
  CHECK(back(0, 0) == m(0, 0));
  CHECK(back(0, 1) == m(0, 1));
  CHECK(back(0, 2) == m(0, 2));
  CHECK(back(1, 0) == m(1, 0));
  CHECK(std::isnan(back(1, 1)));
  CHECK(back(1, 2) == m(1, 2));
}

TEST_CASE("documents carry kind and version") {
  const Json doc = make_document("pca", Json{{"x", 1}});
  CHECK(doc.at("kind") == "pca");
  CHECK(doc.at("version") == kDocumentVersion);
  CHECK(document_data(doc, "pca").at("x") == 1);
  CHECK_THROWS_AS(document_data(doc, "jdrc"), ArgumentError);
}

TEST_CASE("model round trips") {
  const auto& run = fixture::run();

  JdrcModel fkm;
  Json::parse(Json(run.fkm).dump()).get_to(fkm);
  CHECK(fkm.A == run.fkm.A);
  CHECK(fkm.Y == run.fkm.Y);
  CHECK(fkm.labels == run.fkm.labels);
  CHECK(fkm.objective_trace == run.fkm.objective_trace);

  PcaModel pca;
  Json::parse(Json(run.pca).dump()).get_to(pca);
  CHECK(pca.loadings == run.pca.loadings);
  CHECK(pca.eigenvalues == run.pca.eigenvalues);

  MembershipClassifier clf;
  Json::parse(Json(run.leader_classifier).dump()).get_to(clf);
  const Eigen::MatrixXd raw = run.panel.matrix();
  CHECK(clf.predict_proba(raw) == run.leader_classifier.predict_proba(raw));
  CHECK(clf.meta.train_loss == run.leader_classifier.meta.train_loss);

  IndicatorPanel panel;
  Json::parse(Json(run.panel).dump()).get_to(panel);
  CHECK(panel.matrix() == run.panel.matrix());
  CHECK(panel.euris_labels() == run.panel.euris_labels());

  // Clusters are 1-based in JSON.
  const Json j = run.labeling;
  CHECK(j.at("leader_cluster") == run.labeling.leader_cluster + 1);
}

TEST_CASE("override payload forms") {
  const Overrides want{{"2.2.1", 1.22}, {"2.1.1", 1.04}};
  CHECK(overrides_from_json(Json::parse(R"({"2.2.1": 1.22, "2.1.1": 1.04})")) == want);
  CHECK(overrides_from_json(Json::parse(R"([["2.2.1", 1.22], ["2.1.1", 1.04]])")) == want);
  CHECK(overrides_from_json(Json::parse(R"([{"indicator": "2.2.1", "value": 1.22},
                                            {"indicator": "2.1.1", "value": 1.04}])")) == want);
  CHECK(overrides_from_json(overrides_to_json(want)) == want);
  CHECK_THROWS_AS(overrides_from_json(Json::parse(R"({"2.2.1": "high"})")), ArgumentError);
  CHECK_THROWS_AS(overrides_from_json(Json::parse("3")), ArgumentError);
}
