#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fixture.hpp"
#include "innoscope/error.hpp"
#include "innoscope/serialize.hpp"
#include "innoscope/whatif.hpp"

using namespace innoscope;

namespace {

const std::vector<Overrides>& table_trials() {
  static const std::vector<Overrides> t{
      {{"2.2.1", 1.22}}, {{"2.1.1", 1.04}}, {{"4.1.1", 21.8}}, {{"2.3.2", 8.53}}, {{"2.3.2", 11.8}}};
  return t;
}

TrialLog campania_session(const RunArtifacts& run) {
  TrialLog log;
  log.session_id = "campania";
  run_trial(log, run.panel, "ITF3 - Campania", 2023, {}, true, run.leader_classifier);
  for (const auto& o : table_trials()) run_trial(log, run.panel, "ITF3 - Campania", 2023, o, true, run.leader_classifier);
  return log;
}

}  // namespace

TEST_CASE("resolve substitutes overrides only") {
  const auto& run = fixture::run();
  const auto row = *run.panel.find("ITF3 - Campania", 2023);
  const auto& base = run.panel.rows[row].values;
  const auto v = resolve(run.panel, Scenario{"ITF3 - Campania", 2023, {{"2.2.1", 1.22}}, true});
  const auto k = indicator_index("2.2.1");
  for (std::size_t j = 0; j < 14; ++j) CHECK(v[j] == (j == k ? 1.22 : base[j]));
  const auto same = resolve(run.panel, Scenario{"ITF3 - Campania", 2023, {}, true});
  CHECK(std::equal(same.begin(), same.end(), base.begin()));
  const auto own = resolve(run.panel, Scenario{"ITF3 - Campania", 2023, {{"2.2.1", base[k]}}, true});
  CHECK(std::equal(own.begin(), own.end(), base.begin()));
  CHECK_THROWS_AS(resolve(run.panel, Scenario{"ITF3 - Campania", 2023, {{"9.9.9", 1.0}}, true}), ArgumentError);
  CHECK_THROWS_AS(resolve(run.panel, Scenario{"ZZ9 - Nowhere", 2023, {}, true}), LookupError);
  const std::vector<double> nan_value{std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(resolve(run.panel, Scenario{"ITF3 - Campania", 2023, {{"2.2.1", nan_value[0]}}, true}),
                  ArgumentError);
}

TEST_CASE("Campania session: the ICT-specialist change gives the session maximum") {
  const auto& run = fixture::run();
  const TrialLog log = campania_session(run);
  REQUIRE(log.trials.size() == 6);
  for (std::size_t i = 0; i < log.trials.size(); ++i) CHECK(log.trials[i].number == static_cast<int>(i) + 1);
  const double last = log.trials.back().probability;
  for (std::size_t i = 0; i + 1 < log.trials.size(); ++i) CHECK(log.trials[i].probability < last);

  // Cumulative: each vector is the previous one plus this trial's overrides.
  for (std::size_t i = 1; i < log.trials.size(); ++i) {
    const auto expect = apply_overrides(log.trials[i - 1].vector, log.trials[i].overrides);
    CHECK(log.trials[i].vector == expect);
  }

  const TrialLog again = campania_session(run);
  for (std::size_t i = 0; i < log.trials.size(); ++i) CHECK(again.trials[i].probability == log.trials[i].probability);

  // Serialized and reloaded logs replay to identical probabilities.
  TrialLog reloaded;
  Json::parse(Json(log).dump()).get_to(reloaded);
  const auto probs = replay(reloaded, run.leader_classifier);
  for (std::size_t i = 0; i < log.trials.size(); ++i) CHECK(probs[i] == log.trials[i].probability);

  std::ostringstream out;
  write_trial_table(out, log);
  const std::string table = out.str();
  CHECK(table.rfind("trial,change,probability_pct\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 7);
}

TEST_CASE("session rules") {
  const auto& run = fixture::run();
  TrialLog log;
  const auto& a = run_trial(log, run.panel, "ITF3 - Campania", 2023, {}, true, run.leader_classifier);
  const double first = a.probability;
  const auto& b = run_trial(log, run.panel, "ITF3 - Campania", 2023, {}, true, run.leader_classifier);
  CHECK(b.probability == first);
  CHECK(log.trials.size() == 2);
  CHECK_THROWS_AS(run_trial(log, run.panel, "DE6 - Hamburg", 2023, {}, true, run.leader_classifier), ArgumentError);

  // Non-cumulative trials start from the base again.
  run_trial(log, run.panel, "ITF3 - Campania", 2023, {{"2.2.1", 1.22}}, true, run.leader_classifier);
  const auto& fresh = run_trial(log, run.panel, "ITF3 - Campania", 2023, {{"2.1.1", 1.04}}, false, run.leader_classifier);
  CHECK(fresh.vector == apply_overrides(log.base_vector, {{"2.1.1", 1.04}}));
}

TEST_CASE("sensitivity sweep") {
  const auto& run = fixture::run();
  const auto row = *run.panel.find("ITF3 - Campania", 2023);
  const std::vector<double> base(run.panel.rows[row].values.begin(), run.panel.rows[row].values.end());
  const auto k = indicator_index("2.3.2");
  const auto one = sensitivity_sweep(base, "2.3.2", {base[k]}, run.leader_classifier);
  REQUIRE(one.size() == 1);
  TrialLog log;
  CHECK(one[0].probability ==
        run_trial(log, run.panel, "ITF3 - Campania", 2023, {}, true, run.leader_classifier).probability);
  const auto grid = linear_grid(0.0, 20.0, 41);
  CHECK(grid.size() == 41);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 20.0);
  const auto curve = sensitivity_sweep(base, "2.3.2", grid, run.leader_classifier);
  CHECK(curve.size() == grid.size());
  for (const auto& p : curve) {
    CHECK(std::isfinite(p.probability));
    CHECK(p.probability > 0.0);
    CHECK(p.probability < 1.0);
  }
  CHECK_THROWS_AS(sensitivity_sweep(base, "2.3.2", {2.0, 1.0}, run.leader_classifier), ArgumentError);
  CHECK_THROWS_AS(sensitivity_sweep(base, "2.3.2", {1.0, std::numeric_limits<double>::infinity()},
                                    run.leader_classifier),
                  ArgumentError);
}

TEST_CASE("sweep is monotone along the discriminative axis of separable blobs") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  Eigen::MatrixXd x(300, 14);
  std::vector<int> y(300);
  for (int i = 0; i < 300; ++i) {
    y[static_cast<std::size_t>(i)] = i % 2;
    for (int j = 0; j < 14; ++j) x(i, j) = 0.2 * z(rng);
    x(i, 0) = (i % 2 ? 2.0 : -2.0) + 0.3 * z(rng);
  }
  Hyperparams hp;
  hp.epochs = 40;
  const auto model = train(x, y, x, y, "blob", hp, 3);
  const std::vector<double> base(14, 0.0);
  const auto curve = sensitivity_sweep(base, "1.1.2", linear_grid(-2.0, 2.0, 21), model);
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].probability >= curve[i - 1].probability);
}

TEST_CASE("donor lookup over the leader cluster") {
  const auto& run = fixture::run();
  const auto members = run.members_of_tier(1);
  const auto d = donor_lookup(run.panel, members, "2.3.2");
  CHECK(d.members == members.size());
  CHECK(d.min <= d.median);
  CHECK(d.median <= d.max);
  bool hamburg = false, berlin = false;
  for (const auto& e : d.exemplars) {
    hamburg |= e.region_id == "DE6 - Hamburg" && e.year == 2023 && e.value == 8.53;
    berlin |= e.region_id == "DE3 - Berlin" && e.year == 2023 && e.value == 11.8;
  }
  CHECK(hamburg);
  CHECK(berlin);
  for (std::size_t i = 1; i < d.exemplars.size(); ++i) CHECK(d.exemplars[i].value <= d.exemplars[i - 1].value);

  const auto limited = donor_lookup(run.panel, members, "2.3.2", 2023, 5);
  CHECK(limited.exemplars.size() == 5);
  for (const auto& e : limited.exemplars) CHECK(e.year == 2023);

  const auto single = donor_lookup(run.panel, {members.front()}, "2.3.2");
  CHECK(single.min == single.max);
  CHECK(single.median == single.max);
  CHECK_THROWS_AS(donor_lookup(run.panel, {}, "2.3.2"), ArgumentError);
  CHECK_THROWS_AS(donor_lookup(run.panel, members, "0.0.0"), ArgumentError);
}
