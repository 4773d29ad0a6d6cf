#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "p2pss/engine.hpp"

using namespace p2pss;

namespace {

World make_world(std::vector<PeerState> states, const Topology& g, const ChurnModel& churn,
                 std::uint64_t seed, std::size_t k, bool events = false) {
  Rng init(seed);
  auto cs = init_churn(churn, states.size(), init);
  EngineOptions opt;
  opt.k = k;
  opt.record_events = events;
  return World(std::move(states), g, std::move(cs), seed, opt);
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.peers = 40;
  cfg.n = 20'000;
  cfg.m = 2'000;
  cfg.k = 30;
  cfg.rounds = 12;
  return cfg;
}

std::vector<StreamSummary> summaries_of(std::span<const PeerState> states) {
  std::vector<StreamSummary> out;
  for (const auto& s : states) out.push_back(s.summary);
  return out;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("a two-peer round is one update") {
    const auto x = init_peer(0, std::vector<ItemId>{1, 1, 1, 2}, 3);
    const auto y = init_peer(1, std::vector<ItemId>{2, 3, 4, 4, 5}, 3);
    const Topology g(2, std::vector<std::pair<PeerId, PeerId>>{{0, 1}});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto w = make_world({x, y}, g, NoChurn{}, seed, 3);
      w.run_round();
      const auto u = gossip_update(x, y, 3);
      for (PeerId l = 0; l < 2; ++l) {
        REQUIRE(w.state(l).summary == u.summary);
        REQUIRE(w.state(l).n_avg_est == u.n_avg_est);
        REQUIRE(w.state(l).q_est == 0.5);
        REQUIRE(w.state(l).round == 1);
      }
    }
  }

  TEST_CASE("doubling schedule on four peers reaches the mean exactly") {
    std::vector<PeerState> peers;
    const double lengths[] = {8.0, 0.0, 4.0, 0.0};
    for (PeerId l = 0; l < 4; ++l) {
      PeerState s;
      s.peer_id = l;
      s.summary = StreamSummary(4);
      s.n_avg_est = lengths[l];
      s.q_est = l == 0 ? 1.0 : 0.0;
      peers.push_back(s);
    }
    const std::vector<PeerPair> schedule{{0, 1}, {2, 3}, {1, 2}, {0, 3}};
    for (auto [i, j] : schedule) {
      const auto u = gossip_update(peers[i], peers[j], 4);
      adopt(peers[i], u);
      adopt(peers[j], u);
    }
    for (const auto& s : peers) {
      CHECK(s.n_avg_est == 3.0);
      CHECK(s.q_est == 0.25);
    }
  }

  TEST_CASE("the engine matches the centralized replay of its pairs") {
    for (const TopologyModel& topo : {TopologyModel{ErdosRenyi{}}, TopologyModel{BarabasiAlbert{2}}}) {
      auto cfg = small_config();
      cfg.topology = topo;
      auto sim = run_simulation(cfg, 21);
      const auto replay =
          avg_merge_oracle(summaries_of(sim.initial_states), cfg.k, sim.world.all_pairs());
      for (PeerId l = 0; l < cfg.peers; ++l) REQUIRE(replay[l] == sim.world.state(l).summary);
    }
  }

  TEST_CASE("replay still matches with churn and several partners") {
    auto cfg = small_config();
    cfg.churn = Yao{};
    cfg.fanout = Fanout::of(3);
    auto sim = run_simulation(cfg, 5);
    std::size_t cancelled = 0;
    for (const auto& t : sim.traces) cancelled += t.cancelled;
    CHECK(cancelled > 0);
    const auto replay =
        avg_merge_oracle(summaries_of(sim.initial_states), cfg.k, sim.world.all_pairs());
    for (PeerId l = 0; l < cfg.peers; ++l) REQUIRE(replay[l] == sim.world.state(l).summary);
  }

  TEST_CASE("averaging conserves both masses every round") {
    for (const ChurnModel& churn : {ChurnModel{NoChurn{}}, ChurnModel{Yao{}}, ChurnModel{FailStop{0.05}}}) {
      auto cfg = small_config();
      cfg.churn = churn;
      cfg.rounds = 30;
      const auto sim = run_simulation(cfg, 8);
      for (const auto& t : sim.traces) {
        REQUIRE(std::abs(t.sum_n_avg - 20'000.0) <= 1e-9 * 20'000.0);
        REQUIRE(std::abs(t.sum_q - 1.0) <= 1e-12);
      }
    }
  }

  TEST_CASE("variance of the estimates never grows") {
    auto cfg = small_config();
    cfg.partition = PartitionKind::Adversarial;
    cfg.rounds = 30;
    const auto sim = run_simulation(cfg, 3);
    for (std::size_t r = 1; r < sim.traces.size(); ++r) {
      REQUIRE(sim.traces[r].var_q <= sim.traces[r - 1].var_q * (1.0 + 1e-12));
      REQUIRE(sim.traces[r].var_n_avg <= sim.traces[r - 1].var_n_avg * (1.0 + 1e-12) + 1e-18);
    }
    CHECK(sim.traces.back().var_q < 1e-6 * sim.traces.front().var_q);
  }

  TEST_CASE("ghost step examples") {
    const std::vector<std::vector<ItemId>> streams{{7, 7}, {9, 9, 9, 9}};
    GhostFrequencies ghost(streams);
    ghost_step(ghost, 0, 1);
    for (PeerId l = 0; l < 2; ++l) {
      CHECK(ghost.value(l, 7) == 1.0);
      CHECK(ghost.value(l, 9) == 2.0);
      CHECK(ghost.length(l) == 3.0);
    }
    ghost_step(ghost, 1, 1);
    CHECK(ghost.value(1, 9) == 2.0);
    CHECK(ghost.value(0, 8) == 0.0);
  }

  TEST_CASE("summaries stay sandwiched around the exact averaged frequencies") {
    for (const ChurnModel& churn : {ChurnModel{NoChurn{}}, ChurnModel{Yao{}}}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto cfg = small_config();
        cfg.ghost = true;
        cfg.churn = churn;
        cfg.k = 10 + 5 * seed;
        cfg.partition = seed % 2 ? PartitionKind::Shuffled : PartitionKind::Contiguous;
        auto sim = run_simulation(cfg, seed);
        const auto report = check_sandwich(sim.world);
        REQUIRE(report.checked > 0);
        REQUIRE(report.lower_violations == 0);
        REQUIRE(report.upper_violations == 0);
        REQUIRE(report.unstored_violations == 0);
        const auto& g = *sim.world.ghost();
        for (ItemId x : g.items()) {
          REQUIRE(std::abs(g.item_total(x) - static_cast<double>(sim.truth.count(x))) <= 1e-9 * 20'000.0);
        }
      }
    }
  }

  TEST_CASE("the sandwich check needs a ghost") {
    auto cfg = small_config();
    cfg.rounds = 1;
    const auto sim = run_simulation(cfg, 1);
    CHECK_THROWS_AS(check_sandwich(sim.world), std::logic_error);
  }

  TEST_CASE("exchanges never interleave") {
    const auto g = build_topology(ErdosRenyi{}, 30, 4);
    std::vector<PeerState> states;
    for (PeerId l = 0; l < 30; ++l) states.push_back(init_peer(l, std::vector<ItemId>{l % 7}, 4));
    auto w = make_world(states, g, Yao{}, 4, 4, true);
    for (int r = 0; r < 20; ++r) w.run_round();
    const auto ev = w.events();
    REQUIRE(ev.size() % 2 == 0);
    std::size_t commits = 0;
    for (std::size_t i = 0; i < ev.size(); i += 2) {
      REQUIRE(ev[i].kind == EventKind::Begin);
      REQUIRE(ev[i + 1].kind != EventKind::Begin);
      REQUIRE(ev[i + 1].initiator == ev[i].initiator);
      REQUIRE(ev[i + 1].partner == ev[i].partner);
      REQUIRE(ev[i + 1].round == ev[i].round);
      if (ev[i + 1].kind == EventKind::Commit) ++commits;
    }
    CHECK(commits == w.all_pairs().size());
  }

  TEST_CASE("only online peers take part in committed exchanges") {
    const auto g = build_topology(ErdosRenyi{}, 50, 6);
    std::vector<PeerState> states;
    for (PeerId l = 0; l < 50; ++l) states.push_back(init_peer(l, std::vector<ItemId>{l}, 4));
    auto w = make_world(states, g, Yao{}, 6, 4);
    for (int r = 0; r < 15; ++r) {
      const auto before = std::vector<PeerState>(w.states().begin(), w.states().end());
      w.run_round();
      std::vector<bool> touched(50, false);
      for (auto [u, v] : w.pairs().back()) {
        REQUIRE(w.churn().is_online(u));
        REQUIRE(w.churn().is_online(v));
        touched[u] = touched[v] = true;
      }
      for (PeerId l = 0; l < 50; ++l) {
        if (touched[l]) continue;
        REQUIRE(w.state(l).summary == before[l].summary);
        REQUIRE(w.state(l).n_avg_est == before[l].n_avg_est);
        REQUIRE(w.state(l).q_est == before[l].q_est);
      }
    }
  }

  TEST_CASE("same seed, same run") {
    auto cfg = small_config();
    cfg.churn = Yao{};
    const auto a = run_simulation(cfg, 17);
    const auto b = run_simulation(cfg, 17);
    CHECK(std::equal(a.world.states().begin(), a.world.states().end(), b.world.states().begin(),
                     b.world.states().end()));
    CHECK(a.world.all_pairs() == b.world.all_pairs());
    const auto c = run_simulation(cfg, 18);
    CHECK(a.world.all_pairs() != c.world.all_pairs());
  }

  TEST_CASE("zero rounds leave the initial states") {
    auto cfg = small_config();
    cfg.rounds = 0;
    const auto sim = run_simulation(cfg, 2);
    CHECK(std::equal(sim.world.states().begin(), sim.world.states().end(),
                     sim.initial_states.begin(), sim.initial_states.end()));
    CHECK(sim.traces.size() == 1);
  }

  TEST_CASE("pair distribution") {
    Rng rng(31);
    std::vector<int> partner_hits(8, 0);
    for (int t = 0; t < 4000; ++t) {
      const auto pairs = get_pair_distr(8, rng);
      REQUIRE(pairs.size() == 8);
      std::vector<PeerId> firsts;
      for (auto [i, j] : pairs) {
        REQUIRE(i != j);
        REQUIRE(j < 8);
        firsts.push_back(i);
        if (i == 0) ++partner_hits[j];
      }
      std::sort(firsts.begin(), firsts.end());
      for (PeerId i = 0; i < 8; ++i) REQUIRE(firsts[i] == i);
    }
    CHECK(partner_hits[0] == 0);
    for (PeerId j = 1; j < 8; ++j) CHECK(std::abs(partner_hits[j] - 4000.0 / 7.0) < 100.0);
    CHECK_THROWS(get_pair_distr(1, rng));
  }
}
