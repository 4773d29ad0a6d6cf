#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "p2pss/planner.hpp"
#include "p2pss/sketch.hpp"
#include "p2pss/types.hpp"

namespace p2pss {

/// The single peer that starts the peer-count averaging with q̃ = 1.
inline constexpr PeerId kSeedPeer = 0;

/// Gossip state of one peer.
struct PeerState {
  PeerId peer_id = 0;
  std::uint32_t round = 0;
  StreamSummary summary{1};
  /// Estimate of the average local stream length n/p.
  double n_avg_est = 0.0;
  /// Estimate of 1/p.
  double q_est = 0.0;

  friend bool operator==(const PeerState&, const PeerState&) = default;
};

struct QueryParams {
  double phi = 0.02;
  double delta = 0.05;
  double p_star = 1e4;
  double conv_factor = kConvergenceFactor;
};

struct FrequentReport {
  /// (item, estimated global frequency), sorted by item.
  std::vector<std::pair<ItemId, double>> entries;
  /// Threshold applied to summary frequencies.
  double threshold = 0.0;
  double eps_star = 0.0;
  double p_est = 0.0;
};

/// Space-Saving over the local stream; q̃ = 1 only at kSeedPeer.
PeerState init_peer(PeerId peer_id, std::span<const ItemId> local_stream, std::size_t k);

/// One push-pull exchange: the merged summary halved, and both estimates
/// averaged. The result carries a's id and round; both parties adopt it.
PeerState gossip_update(const PeerState& a, const PeerState& b, std::size_t k);

/// Copies the shared part of an exchange result into a peer's own state.
void adopt(PeerState& peer, const PeerState& shared);

/// 1 / q̃. Throws DegenerateEstimate when q̃ = 0.
double estimate_peers(const PeerState& state);

/// Frequent-item query with an explicit confidence radius eps_star in [0, 1).
/// Reports every counter above phi ñ (1 - e) / (1 + e), scaled by p̃.
FrequentReport query_at(const PeerState& state, double phi, double eps_star);

/// Query with eps_star derived from the state's round count.
/// Throws DegenerateEstimate (q̃ = 0) or InsufficientRounds (eps_star >= 1).
FrequentReport query(const PeerState& state, const QueryParams& params);

}  // namespace p2pss
