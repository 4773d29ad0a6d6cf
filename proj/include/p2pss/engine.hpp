#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "p2pss/churn.hpp"
#include "p2pss/config.hpp"
#include "p2pss/protocol.hpp"
#include "p2pss/random.hpp"
#include "p2pss/topology.hpp"
#include "p2pss/workload.hpp"

namespace p2pss {

using PeerPair = std::pair<PeerId, PeerId>;

/**
 * Exact per-peer frequency vectors evolved by the same pairwise averaging
 * as the summaries. Column l is the (fractional) stream that peer l's
 * summary implicitly describes. Memory is peers x distinct items.
 */
class GhostFrequencies {
 public:
  explicit GhostFrequencies(std::span<const std::vector<ItemId>> local_streams);

  std::size_t peer_count() const { return columns_.size(); }
  /// Distinct items of the global stream, sorted.
  std::span<const ItemId> items() const { return items_; }
  std::span<const double> column(PeerId peer) const { return columns_.at(peer); }
  double value(PeerId peer, ItemId item) const;
  double length(PeerId peer) const { return lengths_.at(peer); }
  double item_total(ItemId item) const;

  /// Replaces columns i and j by their component-wise mean.
  void average(PeerId i, PeerId j);

 private:
  std::optional<std::size_t> index_of(ItemId item) const;

  std::vector<ItemId> items_;
  std::vector<std::vector<double>> columns_;
  std::vector<double> lengths_;
};

void ghost_step(GhostFrequencies& ghost, PeerId i, PeerId j);

struct RoundTrace {
  std::uint32_t round = 0;
  double sum_n_avg = 0.0;
  double sum_q = 0.0;
  /// Sample variances (1/(p-1)) across all peers.
  double var_n_avg = 0.0;
  double var_q = 0.0;
  std::size_t online = 0;
  std::size_t exchanges = 0;
  std::size_t cancelled = 0;
};

enum class EventKind { Begin, Commit, Cancel };

struct ExchangeEvent {
  std::uint32_t round = 0;
  PeerId initiator = 0;
  PeerId partner = 0;
  EventKind kind = EventKind::Begin;
};

struct EngineOptions {
  std::size_t k = 1;
  Fanout fanout = Fanout::of(1);
  bool record_events = false;
};

/// One simulated network. Single-threaded; independent worlds share nothing.
class World {
 public:
  World(std::vector<PeerState> states, Topology topology, ChurnState churn,
        std::uint64_t seed, EngineOptions options,
        std::optional<GhostFrequencies> ghost = std::nullopt);

  std::uint32_t round() const { return round_; }
  std::size_t peer_count() const { return states_.size(); }
  std::span<const PeerState> states() const { return states_; }
  const PeerState& state(PeerId peer) const { return states_.at(peer); }
  const Topology& topology() const { return topology_; }
  const ChurnState& churn() const { return churn_; }
  const EngineOptions& options() const { return options_; }
  const GhostFrequencies* ghost() const { return ghost_ ? &*ghost_ : nullptr; }

  /// Committed exchanges, one list per executed round.
  const std::vector<std::vector<PeerPair>>& pairs() const { return pairs_; }
  std::vector<PeerPair> all_pairs() const;
  std::span<const ExchangeEvent> events() const { return events_; }

  RoundTrace trace() const;

  /**
   * Steps churn, then lets each online peer, in a uniformly random order,
   * run its fan-out exchanges one at a time on its current state. An
   * exchange with an offline or dead partner is cancelled and leaves the
   * initiator unchanged; peers with no online neighbour skip the round.
   */
  void run_round();

 private:
  std::vector<PeerState> states_;
  Topology topology_;
  ChurnState churn_;
  Rng gossip_rng_;
  Rng churn_rng_;
  EngineOptions options_;
  std::optional<GhostFrequencies> ghost_;
  std::uint32_t round_ = 0;
  std::size_t last_exchanges_ = 0;
  std::size_t last_cancelled_ = 0;
  std::vector<std::vector<PeerPair>> pairs_;
  std::vector<ExchangeEvent> events_;
};

inline void run_round(World& world) { world.run_round(); }

struct SimulationResult {
  World world;
  /// Entry r describes the state after r rounds (entry 0 is the start).
  std::vector<RoundTrace> traces;
  GroundTruth truth;
  std::vector<PeerState> initial_states;
};

/// Builds stream, partition, peers, topology and churn for one seed, then
/// runs config.rounds rounds.
SimulationResult run_simulation(const ExperimentConfig& config, std::uint64_t seed);

/// Centralized replay: for each pair, S_i <- S_j <- scale(merge(S_i, S_j, k), 2).
std::vector<StreamSummary> avg_merge_oracle(std::vector<StreamSummary> summaries, std::size_t k,
                                            std::span<const PeerPair> pair_sequence);

/// p pairs: a random permutation of the peers, each paired with a uniformly
/// chosen other peer.
std::vector<PeerPair> get_pair_distr(std::size_t peers, Rng& rng);

struct SandwichReport {
  std::size_t checked = 0;
  /// Stored item with summary frequency below its ghost frequency.
  std::size_t lower_violations = 0;
  /// Stored item above ghost frequency + ñ/k.
  std::size_t upper_violations = 0;
  /// Unstored item whose ghost frequency exceeds the summary minimum.
  std::size_t unstored_violations = 0;

  std::size_t violations() const { return lower_violations + upper_violations + unstored_violations; }
};

/// Requires a ghost-enabled world.
SandwichReport check_sandwich(const World& world);

}  // namespace p2pss
