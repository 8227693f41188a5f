#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "innoscope/error.hpp"
#include "innoscope/shift.hpp"
#include "oracles.hpp"

using namespace innoscope;

TEST_CASE("ECDF") {
  const Ecdf f({3.0, 1.0, 2.0});
  CHECK(f(2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(f(0.5) == 0.0);
  CHECK(f(3.0) == 1.0);
  CHECK(f(10.0) == 1.0);
  CHECK_THROWS_AS(Ecdf({}), ArgumentError);

  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> d(0, 20);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> s(50);
    for (auto& v : s) v = d(rng) * 0.5;
    const Ecdf e(s);
    for (double q = -1.0; q <= 11.0; q += 0.25) CHECK(e(q) == oracle::ecdf_count(s, q));
  }
}

TEST_CASE("series matches a 10^4-term long-double partial sum") {
  double worst = 0.0;
  for (double lambda = 0.2; lambda <= 3.0; lambda += 0.01) {
    worst = std::max(worst, std::abs(kolmogorov_survival(lambda) - oracle::kolmogorov_series(lambda)));
  }
  CHECK(worst < 1e-10);
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(10.0) < 1e-80);
}

TEST_CASE("D statistic against the counting oracle, with ties") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 15);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(30 + t), b(45 - t);
    for (auto& v : a) v = d(rng);
    for (auto& v : b) v = d(rng) + (t % 4);
    const auto r = ks_two_sample(a, b);
    CHECK(std::abs(r.d_stat - oracle::ks_d(a, b)) < 1e-12);
    const auto swapped = ks_two_sample(b, a);
    CHECK(swapped.d_stat == r.d_stat);
    CHECK(swapped.p_value == r.p_value);
    // Strictly increasing transform leaves D unchanged.
    std::vector<double> ea(a), eb(b);
    for (auto& v : ea) v = std::exp(v / 3.0);
    for (auto& v : eb) v = std::exp(v / 3.0);
    CHECK(ks_two_sample(ea, eb).d_stat == r.d_stat);
  }
}

TEST_CASE("trivial cases") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const auto same = ks_two_sample(a, a);
  CHECK(same.d_stat == 0.0);
  CHECK(same.p_value == 1.0);
  const std::vector<double> b{10, 11, 12, 13};
  const auto disjoint = ks_two_sample(a, b);
  CHECK(disjoint.d_stat == 1.0);
  const double ne = 5.0 * 4.0 / 9.0;
  CHECK(disjoint.p_value == kolmogorov_survival(std::sqrt(ne)));
  std::vector<double> big_a(400), big_b(400);
  for (std::size_t i = 0; i < 400; ++i) big_a[i] = static_cast<double>(i), big_b[i] = 1000.0 + static_cast<double>(i);
  CHECK(ks_two_sample(big_a, big_b).p_value < 1e-12);
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, a), ArgumentError);
}

TEST_CASE("p-value variants") {
  std::vector<double> a(100), b(80);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<double>(i);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<double>(i) + 15.5;
  const auto r = ks_two_sample(a, b);
  const double ne = 100.0 * 80.0 / 180.0;
  CHECK(r.p_value == doctest::Approx(oracle::kolmogorov_series(std::sqrt(ne) * r.d_stat)).epsilon(1e-10));
  const auto s = ks_two_sample(a, b, KsPValue::stephens);
  const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * s.d_stat;
  CHECK(s.p_value == doctest::Approx(oracle::kolmogorov_series(lam)).epsilon(1e-10));
  CHECK(parse_ks_method(to_string(KsPValue::stephens)) == KsPValue::stephens);
}

TEST_CASE("null false-positive rate stays near the significance level") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> z;
  int rejections = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> a(200), b(150);
    for (auto& v : a) v = z(rng);
    for (auto& v : b) v = z(rng);
    rejections += ks_two_sample(a, b).p_value < 0.05;
  }
  const double rate = static_cast<double>(rejections) / trials;
  CHECK(rate <= 0.07);
  CHECK(rate >= 0.02);
}

TEST_CASE("shift report on an identically distributed panel") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z;
  IndicatorPanel panel;
  for (int year = 2016; year <= 2023; ++year) {
    for (int r = 0; r < 120; ++r) {
      RegionYear row;
      row.region_id = "R" + std::to_string(r);
      row.year = year;
      row.euris_label = 1 + r % 4;
      for (auto& v : row.values) v = z(rng);
      panel.rows.push_back(row);
    }
  }
  const auto rows = shift_report(panel);
  CHECK(rows.size() == 42);
  const auto shifted = std::count_if(rows.begin(), rows.end(), [](const ShiftRow& r) { return r.verdict == "shifted"; });
  CHECK(shifted <= 7);

  std::ostringstream out;
  write_shift_report(out, rows);
  CHECK(out.str().rfind("indicator,pair,n1,n2,D,p,verdict\n", 0) == 0);
}

TEST_CASE("empty slices are untestable") {
  IndicatorPanel panel;
  for (int year : {2021, 2022, 2018}) {
    RegionYear row;
    row.region_id = "R";
    row.year = year;
    row.euris_label = 1;
    row.values.fill(1.0);
    panel.rows.push_back(row);
  }
  const auto rows = shift_report(panel);
  CHECK(rows.size() == 42);
  for (const auto& r : rows) {
    if (r.pair == "x-y") {
      CHECK(r.verdict != "untestable");
    } else {
      CHECK(r.verdict == "untestable");
      CHECK_FALSE(r.p_value.has_value());
    }
  }
}

TEST_CASE("fixture slices reproduce the published statistics") {
  const IndicatorPanel panel = load_scoreboard_file(oracle::fixture_path());
  const auto& slices = default_period_slices();
  const auto x = slices[0];
  const auto zz = slices[2];
  const auto rd_business = ks_two_sample(slice_values(panel, indicator_index("2.2.1"), x),
                                         slice_values(panel, indicator_index("2.2.1"), zz));
  CHECK(std::abs(rd_business.d_stat - 145.0 / 1434.0) < 1e-15);
  CHECK(std::abs(rd_business.p_value - 0.005676) < 5e-4);
  const auto rd_public = ks_two_sample(slice_values(panel, indicator_index("2.1.1"), x),
                                       slice_values(panel, indicator_index("2.1.1"), zz));
  CHECK(std::abs(rd_public.d_stat - 53.0 / 1434.0) < 1e-15);
  CHECK(std::abs(rd_public.p_value - 0.8282) < 5e-3);

  const auto rows = shift_report(panel);
  for (const auto& r : rows) {
    if (r.indicator == "2.2.1" && r.pair == "x-z") CHECK(r.verdict == "shifted");
    if (r.indicator == "2.1.1" && r.pair == "x-z") CHECK(r.verdict == "stable");
  }
}
