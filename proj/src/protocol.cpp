#include "p2pss/protocol.hpp"

#include <stdexcept>
#include <string>

namespace p2pss {

PeerState init_peer(PeerId peer_id, std::span<const ItemId> local_stream, std::size_t k) {
  PeerState state;
  state.peer_id = peer_id;
  state.round = 0;
  state.summary = space_saving(local_stream, k);
  state.n_avg_est = static_cast<double>(local_stream.size());
  state.q_est = peer_id == kSeedPeer ? 1.0 : 0.0;
  return state;
}

PeerState gossip_update(const PeerState& a, const PeerState& b, std::size_t k) {
  PeerState out;
  out.peer_id = a.peer_id;
  out.round = a.round;
  out.summary = scale(merge(a.summary, b.summary, k), 2.0);
  out.n_avg_est = (a.n_avg_est + b.n_avg_est) / 2.0;
  out.q_est = (a.q_est + b.q_est) / 2.0;
  return out;
}

void adopt(PeerState& peer, const PeerState& shared) {
  peer.summary = shared.summary;
  peer.n_avg_est = shared.n_avg_est;
  peer.q_est = shared.q_est;
}

double estimate_peers(const PeerState& state) {
  if (state.q_est <= 0.0) {
    throw DegenerateEstimate("peer " + std::to_string(state.peer_id) +
                             " has q=0; the averaging mass never reached it");
  }
  return 1.0 / state.q_est;
}

FrequentReport query_at(const PeerState& state, double phi, double eps_star) {
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("phi must lie in (0, 1)");
  if (!(eps_star >= 0.0)) throw std::invalid_argument("eps_star must be nonnegative");
  if (eps_star >= 1.0) {
    throw InsufficientRounds("eps*=" + std::to_string(eps_star) + " >= 1 after " +
                             std::to_string(state.round) + " rounds");
  }
  FrequentReport report;
  report.p_est = estimate_peers(state);
  report.eps_star = eps_star;
  report.threshold = phi * state.n_avg_est * (1.0 - eps_star) / (1.0 + eps_star);
  for (const Counter& c : state.summary.counters()) {
    if (c.freq > report.threshold) report.entries.emplace_back(c.item, c.freq * report.p_est);
  }
  return report;
}

FrequentReport query(const PeerState& state, const QueryParams& params) {
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  estimate_peers(state);
  return query_at(state, params.phi,
                  epsilon_star(params.p_star, params.delta, params.conv_factor, state.round));
}

}  // namespace p2pss
