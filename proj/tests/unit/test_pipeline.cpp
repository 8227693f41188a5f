#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "fixture.hpp"
#include "innoscope/error.hpp"

using namespace innoscope;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("fixture run structure") {
  const auto& run = fixture::run();
  CHECK(run.fkm.k() == 4);
  std::vector<int> tiers;
  for (int c = 0; c < 4; ++c) tiers.push_back(run.labeling.tier_of(c));
  std::sort(tiers.begin(), tiers.end());
  CHECK(tiers == std::vector<int>{1, 2, 3, 4});
  CHECK(run.leader_classifier.target == "Innovation leader");
  CHECK(run.shift.size() == 42);
  CHECK(run.comparison.size() == 4);
  CHECK(run.q == 2);
  for (const char* doc : {"config", "panel", "standardization", "correlation", "pca", "jdrc", "labeling",
                          "classifier", "evaluation", "shift"}) {
    CHECK(run.has(doc));
  }
}

TEST_CASE("same config and seed give byte-identical bundles") {
  const auto a = render_bundle(fixture::run());
  const auto b = render_bundle(run_pipeline(fixture::default_config()));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == b[i].first);
    CHECK(a[i].second == b[i].second);
  }
}

TEST_CASE("bundle round trip is byte-exact") {
  fixture::TempDir tmp;
  const fs::path dir = tmp.path / "bundle";
  write_bundle(fixture::run(), dir);
  const RunArtifacts back = read_bundle(dir);
  for (const auto& [path, bytes] : render_bundle(back)) CHECK(slurp(dir / path) == bytes);
  CHECK(back.fingerprint == fixture::run().fingerprint);

  // Rewriting replaces the directory and leaves no temporaries behind.
  write_bundle(back, dir);
  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(tmp.path)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);

  std::ofstream(dir / "jdrc.json", std::ios::app) << " ";
  CHECK_THROWS_AS(read_bundle(dir), ArgumentError);
  CHECK_NOTHROW(read_bundle(dir, false));
}

TEST_CASE("stages run independently through the bundle") {
  fixture::TempDir tmp;
  const fs::path dir = tmp.path / "staged";
  RunArtifacts run;
  run.config = fixture::default_config();
  stage_ingest(run);
  write_bundle(run, dir);
  for (auto stage : {stage_correlate, stage_pca, stage_cluster, stage_label, stage_train, stage_shift}) {
    RunArtifacts next = read_bundle(dir);
    stage(next);
    write_bundle(next, dir);
  }
  const auto want = render_bundle(fixture::run());
  for (const auto& [path, bytes] : want) CHECK(slurp(dir / path) == bytes);

  RunArtifacts early = read_bundle(dir);
  early.present = {"config", "panel", "standardization"};
  CHECK_THROWS_AS(stage_cluster(early), ArgumentError);
}

TEST_CASE("validation rejects k = 1 before any compute") {
  PipelineConfig c = fixture::default_config();
  c.k = 1;
  c.input = "/nonexistent/never-read.csv";
  try {
    run_pipeline(c);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "config");
    CHECK(e.cause_code() == "argument_error");
  }
}

TEST_CASE("stage failures name the stage and cause") {
  PipelineConfig c = fixture::default_config();
  c.input = "/nonexistent/missing.csv";
  try {
    run_pipeline(c);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "ingest");
  }
  PipelineConfig q = fixture::default_config();
  q.q_policy = SelectionPolicy::parse("manual:3");
  try {
    run_pipeline(q);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "label");
    CHECK(e.cause_code() == "argument_error");
  }
}

TEST_CASE("failed bundle writes leave nothing behind") {
  fixture::TempDir tmp;
  std::ofstream(tmp.path / "blocker") << "x";
  CHECK_THROWS(write_bundle(fixture::run(), tmp.path / "blocker" / "bundle"));
  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(tmp.path)) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 1);
}

TEST_CASE("config serialization, env overrides and fingerprint") {
  PipelineConfig c = fixture::default_config();
  c.fit.seed = 7;
  c.q_policy = SelectionPolicy::parse("manual:2");
  PipelineConfig back;
  Json::parse(Json(c).dump()).get_to(back);
  CHECK(Json(back).dump() == Json(c).dump());

  fixture::TempDir tmp;
  std::ofstream(tmp.path / "c.json") << R"({"input": "in.csv", "k": 4, "seed": 11, "restarts": 9})";
  const PipelineConfig loaded = load_config(tmp.path / "c.json");
  CHECK(loaded.fit.seed == 11);
  CHECK(loaded.fit.restarts == 9);
  std::ofstream(tmp.path / "bad.json") << "{";
  CHECK_THROWS_AS(load_config(tmp.path / "bad.json"), ArgumentError);

  ::setenv("INNOSCOPE_SEED", "99", 1);
  ::setenv("INNOSCOPE_K", "5", 1);
  PipelineConfig env = c;
  apply_env_overrides(env);
  CHECK(env.fit.seed == 99);
  CHECK(env.k == 5);
  ::setenv("INNOSCOPE_K", "five", 1);
  CHECK_THROWS_AS(apply_env_overrides(env), ArgumentError);
  ::unsetenv("INNOSCOPE_SEED");
  ::unsetenv("INNOSCOPE_K");

  const std::string h = sha256_hex("abc");
  CHECK(h == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  PipelineConfig other = c;
  other.fit.seed = 8;
  CHECK(config_fingerprint(c, h) != config_fingerprint(other, h));
  PipelineConfig moved = c;
  moved.output = "elsewhere";
  CHECK(config_fingerprint(c, h) == config_fingerprint(moved, h));
}
