#include <doctest.h>

#include <cmath>
#include <vector>

#include "p2pss/metrics.hpp"

using namespace p2pss;

namespace {

GroundTruth truth_of(std::vector<ItemId> stream, double phi) { return exact_frequencies(stream, phi); }

FrequentReport report_of(std::vector<std::pair<ItemId, double>> entries, double eps_star = 0.0) {
  FrequentReport r;
  r.entries = std::move(entries);
  r.eps_star = eps_star;
  return r;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("perfect report") {
    // counts: 1 -> 5, 2 -> 4, 3 -> 1; phi 0.3 keeps {1, 2}.
    const auto t = truth_of({1, 1, 1, 1, 1, 2, 2, 2, 2, 3}, 0.3);
    REQUIRE(t.frequent == std::vector<ItemId>{1, 2});
    const auto m = score(report_of({{1, 5.0}, {2, 4.0}}), t);
    CHECK(m.recall == 1.0);
    CHECK(m.precision == 1.0);
    CHECK(m.are == 0.0);
  }

  TEST_CASE("false positive and missed item") {
    const auto t = truth_of({1, 1, 1, 1, 1, 2, 2, 2, 2, 3}, 0.3);
    const auto m = score(report_of({{1, 6.0}, {3, 1.5}}), t);
    CHECK(m.recall == 0.5);
    CHECK(m.precision == 0.5);
    CHECK(m.are == doctest::Approx((0.2 + 0.5) / 2.0));
    CHECK(m.true_positives == 1);
  }

  TEST_CASE("empty report and empty frequent set") {
    const auto t = truth_of({1, 2, 3, 4}, 0.5);
    const auto m = score(report_of({}), t);
    CHECK(m.recall == 1.0);
    CHECK(m.precision == 1.0);
    CHECK(m.are == 0.0);
    const auto t2 = truth_of({1, 1, 1, 2}, 0.5);
    CHECK(score(report_of({}), t2).recall == 0.0);
  }

  TEST_CASE("reporting an item that never occurs is an error") {
    const auto t = truth_of({1, 1, 2}, 0.5);
    CHECK_THROWS(score(report_of({{9, 1.0}}), t));
  }

  TEST_CASE("aggregate of one run has no spread") {
    const std::vector<double> v{0.7};
    const auto a = aggregate(v);
    CHECK(a.mean == 0.7);
    CHECK(a.ci_halfwidth == 0.0);
    CHECK(a.count == 1);
  }

  TEST_CASE("identical runs") {
    const std::vector<double> v(10, 0.25);
    const auto a = aggregate(v);
    CHECK(a.mean == 0.25);
    CHECK(a.ci_halfwidth == 0.0);
  }

  TEST_CASE("alternating runs") {
    std::vector<double> v;
    for (int i = 0; i < 10; ++i) v.push_back(i % 2);
    const auto a = aggregate(v);
    CHECK(a.mean == 0.5);
    CHECK(a.ci_halfwidth == doctest::Approx(0.32666666666666667).epsilon(1e-12));
  }

  TEST_CASE("NaN entries are skipped") {
    const std::vector<double> v{1.0, std::nan(""), 3.0};
    const auto a = aggregate(v);
    CHECK(a.count == 2);
    CHECK(a.mean == 2.0);
    const std::vector<double> all_nan{std::nan("")};
    CHECK(std::isnan(aggregate(all_nan).mean));
  }

  TEST_CASE("aggregate over run metrics") {
    std::vector<RunMetrics> runs(4);
    runs[0].recall = 0.0;
    const auto a = aggregate(runs);
    CHECK(a.recall.mean == 0.75);
    CHECK(a.precision.mean == 1.0);
    CHECK(a.are.count == 4);
  }

  TEST_CASE("exact estimates satisfy the envelope") {
    const auto t = truth_of({1, 1, 1, 1, 1, 2, 2, 2, 2, 3}, 0.3);
    const PlanInputs in{0.3, 0.1, 0.05, 10.0, kConvergenceFactor};
    const Plan plan{100, 40, Strategy::Explicit, 0.0, 0.0};
    const auto bc = bound_check(report_of({{1, 5.0}, {2, 4.0}}, 0.0), t, in, plan);
    CHECK(bc.sandwich_ok());
    CHECK(bc.floor_ok());
    CHECK(bc.items.size() == 2);
    CHECK(bc.items[0].upper == doctest::Approx(5.0 + 10.0 / 100.0));
  }

  TEST_CASE("envelope violations are counted") {
    const auto t = truth_of({1, 1, 1, 1, 1, 2, 2, 2, 2, 3}, 0.3);
    const PlanInputs in{0.3, 0.1, 0.05, 10.0, kConvergenceFactor};
    const Plan plan{100, 40, Strategy::Explicit, 0.0, 0.0};
    const auto bc = bound_check(report_of({{1, 4.9}, {2, 4.2}}, 0.0), t, in, plan);
    CHECK(bc.sandwich_violations == 2);
  }

  TEST_CASE("items below the false-positive floor are flagged") {
    // 20 items, phi = 0.3; the floor sits at (0.3 - tol) * 20.
    std::vector<ItemId> stream(20, 0);
    const PlanInputs in{0.3, 0.1, 0.05, 10.0, kConvergenceFactor};
    const Plan plan{40, 200, Strategy::Explicit, 0.0, 0.0};
    const double tol = tolerance(40, 200, in);
    // tol = 1/40 here, so the floor is 5.5 items; choose counts 5 and 6.
    REQUIRE(tol == doctest::Approx(1.0 / 40.0));
    for (int i = 0; i < 5; ++i) stream[i] = 1;
    for (int i = 5; i < 11; ++i) stream[i] = 2;
    const auto t = truth_of(stream, 0.3);
    const auto bc = bound_check(report_of({{1, 5.0}, {2, 6.0}}, 0.0), t, in, plan);
    CHECK(bc.floor_violations == 1);
    CHECK_FALSE(bc.items[0].floor_ok);
    CHECK(bc.items[1].floor_ok);
  }

  TEST_CASE("bound check refuses a radius of one") {
    const auto t = truth_of({1}, 0.5);
    const PlanInputs in{0.3, 0.1, 0.05, 10.0, kConvergenceFactor};
    CHECK_THROWS(bound_check(report_of({}, 1.0), t, in, Plan{}));
  }
}
