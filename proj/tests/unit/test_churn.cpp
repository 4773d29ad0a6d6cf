#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "p2pss/churn.hpp"

using namespace p2pss;

TEST_SUITE("churn") {
  TEST_CASE("inverse transform endpoints") {
    const ShiftedPareto d{1.01, 1.0, 3.0};
    CHECK(d.quantile(0.0) == 1.01);
    CHECK(d.quantile(0.5) == doctest::Approx(1.2699210498948732).epsilon(1e-14));
    CHECK(d.cdf(d.quantile(0.5)) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(d.cdf(1.0) == 0.0);
    CHECK(d.mean() == doctest::Approx(1.51));
  }

  TEST_CASE("shifted Pareto samples pass a KS test") {
    const ShiftedPareto d{1.01, 1.0, 3.0};
    Rng rng(2024);
    std::vector<double> xs(100'000);
    for (auto& x : xs) {
      x = sample_shifted_pareto(d, rng);
      REQUIRE(x >= d.mu);
    }
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    const auto n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = d.cdf(xs[i]);
      ks = std::max({ks, std::abs(f - static_cast<double>(i) / n),
                     std::abs(static_cast<double>(i + 1) / n - f)});
    }
    CHECK(ks < 0.01);
  }

  TEST_CASE("no churn keeps everyone online") {
    Rng rng(1);
    auto st = init_churn(NoChurn{}, 50, rng);
    for (std::uint32_t r = 1; r <= 100; ++r) REQUIRE(step_churn(st, r, rng).size() == 50);
  }

  TEST_CASE("fail-stop with zero probability never kills") {
    Rng rng(1);
    auto st = init_churn(FailStop{0.0}, 50, rng);
    for (std::uint32_t r = 1; r <= 100; ++r) REQUIRE(step_churn(st, r, rng).size() == 50);
  }

  TEST_CASE("fail-stop with probability one kills everyone at once") {
    Rng rng(1);
    auto st = init_churn(FailStop{1.0}, 50, rng);
    CHECK(step_churn(st, 1, rng).empty());
    for (PeerId i = 0; i < 50; ++i) CHECK(st.status(i) == PeerStatus::Dead);
  }

  TEST_CASE("fail-stop survivors follow the binomial law") {
    Rng rng(99);
    auto st = init_churn(FailStop{0.1}, 10'000, rng);
    const auto online = static_cast<double>(step_churn(st, 1, rng).size());
    CHECK(std::abs(online - 9000.0) <= 90.0);
  }

  TEST_CASE("fail-stop is monotone and death is absorbing") {
    Rng rng(3);
    auto st = init_churn(FailStop{0.05}, 500, rng);
    std::vector<PeerStatus> prev(st.status().begin(), st.status().end());
    std::size_t last = 500;
    for (std::uint32_t r = 1; r <= 60; ++r) {
      const auto online = step_churn(st, r, rng).size();
      REQUIRE(online <= last);
      for (PeerId i = 0; i < 500; ++i) {
        if (prev[i] == PeerStatus::Dead) REQUIRE(st.status(i) == PeerStatus::Dead);
        REQUIRE(st.status(i) != PeerStatus::Offline);
      }
      prev.assign(st.status().begin(), st.status().end());
      last = online;
    }
  }

  TEST_CASE("Yao per-peer mean lifetimes average 1.51") {
    Rng rng(5);
    const auto st = init_churn(Yao{}, 1000, rng);
    double sum = 0.0;
    for (PeerId i = 0; i < 1000; ++i) sum += st.mean_lifetime(i);
    CHECK(std::abs(sum / 1000.0 - 1.51) <= 0.05);
    for (PeerId i = 0; i < 1000; ++i) CHECK(st.is_online(i));
  }

  TEST_CASE("a Yao status holds for its drawn duration, then flips") {
    Rng rng(6);
    auto st = init_churn(Yao{}, 200, rng);
    for (std::uint32_t r = 1; r <= 300; ++r) {
      std::vector<PeerStatus> before(st.status().begin(), st.status().end());
      std::vector<std::uint32_t> rem(200);
      for (PeerId i = 0; i < 200; ++i) rem[i] = st.remaining(i);
      step_churn(st, r, rng);
      for (PeerId i = 0; i < 200; ++i) {
        REQUIRE(st.status(i) != PeerStatus::Dead);
        if (rem[i] > 0) {
          REQUIRE(st.status(i) == before[i]);
          REQUIRE(st.remaining(i) == rem[i] - 1);
        } else {
          REQUIRE(st.status(i) != before[i]);
        }
      }
    }
  }

  TEST_CASE("a peer with three rounds left stays three steps") {
    Rng rng(8);
    auto st = init_churn(Yao{}, 400, rng);
    PeerId target = 400;
    for (PeerId i = 0; i < 400; ++i) {
      if (st.remaining(i) == 3) {
        target = i;
        break;
      }
    }
    REQUIRE(target < 400);
    for (std::uint32_t r = 1; r <= 3; ++r) {
      step_churn(st, r, rng);
      CHECK(st.is_online(target));
    }
    step_churn(st, 4, rng);
    CHECK(st.status(target) == PeerStatus::Offline);
  }

  TEST_CASE("Yao peers all go offline eventually") {
    for (auto kind : {LifetimeKind::Pareto, LifetimeKind::Exponential}) {
      Rng rng(10);
      auto st = init_churn(Yao{kind}, 1000, rng);
      std::vector<bool> seen_offline(1000, false);
      for (std::uint32_t r = 1; r <= 10'000; ++r) {
        step_churn(st, r, rng);
        for (PeerId i = 0; i < 1000; ++i) {
          if (st.status(i) == PeerStatus::Offline) seen_offline[i] = true;
        }
      }
      const auto count = std::count(seen_offline.begin(), seen_offline.end(), true);
      CHECK(count >= 990);
    }
  }

  TEST_CASE("durations are whole rounds of at least one") {
    Rng rng(12);
    auto st = init_churn(Yao{LifetimeKind::Exponential}, 100, rng);
    for (int i = 0; i < 1000; ++i) {
      const auto peer = static_cast<PeerId>(i % 100);
      REQUIRE(st.draw_online_duration(peer, rng) >= 1);
      REQUIRE(st.draw_offline_duration(peer, rng) >= 1);
    }
  }

  TEST_CASE("rounds must advance one at a time") {
    Rng rng(1);
    auto st = init_churn(NoChurn{}, 3, rng);
    CHECK_THROWS_AS(step_churn(st, 2, rng), std::logic_error);
    step_churn(st, 1, rng);
    CHECK_THROWS_AS(step_churn(st, 1, rng), std::logic_error);
  }

  TEST_CASE("invalid fail probability") {
    Rng rng(1);
    CHECK_THROWS_AS(init_churn(FailStop{1.5}, 3, rng), ConfigError);
  }
}
