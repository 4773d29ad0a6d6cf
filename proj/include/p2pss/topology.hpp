#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "p2pss/random.hpp"
#include "p2pss/types.hpp"

namespace p2pss {

/// Preferential attachment: every new peer links to `attach` distinct peers.
struct BarabasiAlbert {
  std::uint32_t attach = 2;
};

/// G(p, edge_prob). Without an explicit probability, 2 ln(p) / p is used.
struct ErdosRenyi {
  std::optional<double> edge_prob;
};

using TopologyModel = std::variant<BarabasiAlbert, ErdosRenyi>;

/// Undirected simple graph over peers 0..p-1.
class Topology {
 public:
  Topology(std::size_t peer_count, std::span<const std::pair<PeerId, PeerId>> edges);

  std::size_t peer_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::span<const PeerId> neighbors(PeerId peer) const { return adjacency_.at(peer); }
  std::size_t degree(PeerId peer) const { return adjacency_.at(peer).size(); }
  std::size_t max_degree() const;

  bool is_connected() const;
  /// Symmetric adjacency with no self-loops or duplicate edges.
  bool is_simple_undirected() const;

  /// Edges (u, v) with u < v in increasing order.
  std::vector<std::pair<PeerId, PeerId>> edges() const;

  /// One "u v" pair per line.
  void write_edge_list(std::ostream& out) const;

 private:
  std::vector<std::vector<PeerId>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Connected random graph; ER samples are redrawn with derived seeds until
/// connected, up to 100 attempts (then ConnectivityFailure).
Topology build_topology(const TopologyModel& model, std::size_t peers, std::uint64_t seed);

/// One G(p, prob) draw; may be disconnected.
Topology erdos_renyi_graph(std::size_t peers, double prob, Rng& rng);

/// Fan-out: a neighbour count, or every neighbour.
struct Fanout {
  std::uint32_t count = 1;
  bool all = false;

  static Fanout every() { return Fanout{0, true}; }
  static Fanout of(std::uint32_t n) { return Fanout{n, false}; }
};

/// Uniform sample without replacement of min(fo, degree) neighbours, in
/// random order. Throws IsolatedPeer if the peer has no neighbours.
std::vector<PeerId> sample_fanout(const Topology& topology, PeerId peer, Fanout fo, Rng& rng);

/// As above, but also throws IsolatedPeer when none of the neighbours is
/// online. Offline neighbours can still be drawn; the initiator learns of
/// their absence only by the failed exchange.
std::vector<PeerId> sample_fanout(const Topology& topology, PeerId peer, Fanout fo, Rng& rng,
                                  std::span<const PeerStatus> status);

bool has_online_neighbor(const Topology& topology, PeerId peer,
                         std::span<const PeerStatus> status);

}  // namespace p2pss
