#include "p2pss/topology.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace p2pss {

Topology::Topology(std::size_t peer_count, std::span<const std::pair<PeerId, PeerId>> edges)
    : adjacency_(peer_count) {
  for (auto [u, v] : edges) {
    if (u >= peer_count || v >= peer_count) throw std::out_of_range("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop on peer " + std::to_string(u));
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    edge_count_ += adj.size();
  }
  edge_count_ /= 2;
}

std::size_t Topology::max_degree() const {
  std::size_t best = 0;
  for (const auto& adj : adjacency_) best = std::max(best, adj.size());
  return best;
}

bool Topology::is_connected() const {
  if (adjacency_.empty()) return true;
  std::vector<char> seen(adjacency_.size(), 0);
  std::vector<PeerId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const PeerId u = stack.back();
    stack.pop_back();
    for (PeerId v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == adjacency_.size();
}

bool Topology::is_simple_undirected() const {
  for (PeerId u = 0; u < adjacency_.size(); ++u) {
    const auto& adj = adjacency_[u];
    for (std::size_t i = 0; i < adj.size(); ++i) {
      if (adj[i] == u) return false;
      if (i > 0 && adj[i] == adj[i - 1]) return false;
      const auto& back = adjacency_[adj[i]];
      if (!std::binary_search(back.begin(), back.end(), u)) return false;
    }
  }
  return true;
}

std::vector<std::pair<PeerId, PeerId>> Topology::edges() const {
  std::vector<std::pair<PeerId, PeerId>> out;
  out.reserve(edge_count_);
  for (PeerId u = 0; u < adjacency_.size(); ++u) {
    for (PeerId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

void Topology::write_edge_list(std::ostream& out) const {
  for (auto [u, v] : edges()) out << u << ' ' << v << '\n';
}

namespace {

std::vector<std::pair<PeerId, PeerId>> barabasi_albert_edges(std::size_t p, std::uint32_t attach,
                                                             Rng& rng) {
  // Seed graph: a star on attach+1 peers. Each later peer picks `attach`
  // distinct targets with probability proportional to degree, drawn from
  // the list of edge endpoints.
  std::vector<std::pair<PeerId, PeerId>> edges;
  std::vector<PeerId> endpoints;
  const auto seed_size = static_cast<PeerId>(attach + 1);
  for (PeerId v = 1; v < seed_size; ++v) {
    edges.emplace_back(0, v);
    endpoints.push_back(0);
    endpoints.push_back(v);
  }
  std::vector<PeerId> targets;
  for (auto v = seed_size; v < p; ++v) {
    targets.clear();
    while (targets.size() < attach) {
      const PeerId t = endpoints[uniform_below(rng, endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (PeerId t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

std::vector<std::pair<PeerId, PeerId>> erdos_renyi_edges(std::size_t p, double prob, Rng& rng) {
  std::vector<std::pair<PeerId, PeerId>> edges;
  if (prob >= 1.0) {
    for (PeerId u = 0; u < p; ++u)
      for (PeerId v = u + 1; v < p; ++v) edges.emplace_back(u, v);
    return edges;
  }
  // Geometric skipping over the p(p-1)/2 candidate pairs in row order.
  const double log_q = std::log1p(-prob);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto n = static_cast<std::int64_t>(p);
  while (v < n) {
    const double r = uniform_unit(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) edges.emplace_back(static_cast<PeerId>(w), static_cast<PeerId>(v));
  }
  return edges;
}

}  // namespace

Topology erdos_renyi_graph(std::size_t peers, double prob, Rng& rng) {
  const auto edges = erdos_renyi_edges(peers, prob, rng);
  return Topology(peers, edges);
}

Topology build_topology(const TopologyModel& model, std::size_t peers, std::uint64_t seed) {
  if (peers < 2) throw ConfigError("topology needs at least 2 peers");
  if (const auto* ba = std::get_if<BarabasiAlbert>(&model)) {
    if (ba->attach < 1 || ba->attach >= peers) {
      throw ConfigError("Barabasi-Albert attach must lie in [1, peers)");
    }
    Rng rng(derive_seed(seed, 0xBA));
    const auto edges = barabasi_albert_edges(peers, ba->attach, rng);
    return Topology(peers, edges);
  }
  const auto& er = std::get<ErdosRenyi>(model);
  const double prob = er.edge_prob.value_or(2.0 * std::log(static_cast<double>(peers)) /
                                            static_cast<double>(peers));
  if (!(prob > 0.0 && prob <= 1.0)) throw ConfigError("Erdos-Renyi edge probability must lie in (0, 1]");
  constexpr int kAttempts = 100;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(derive_seed(seed, 0xE5000 + static_cast<std::uint64_t>(attempt)));
    Topology topology = erdos_renyi_graph(peers, prob, rng);
    if (topology.is_connected()) return topology;
  }
  throw ConnectivityFailure("no connected Erdos-Renyi graph with p=" + std::to_string(peers) +
                            ", edge_prob=" + std::to_string(prob) + " in 100 attempts");
}

std::vector<PeerId> sample_fanout(const Topology& topology, PeerId peer, Fanout fo, Rng& rng) {
  const auto adj = topology.neighbors(peer);
  if (adj.empty()) throw IsolatedPeer("peer " + std::to_string(peer) + " has no neighbours");
  std::vector<PeerId> pool(adj.begin(), adj.end());
  const std::size_t take = fo.all ? pool.size() : std::min<std::size_t>(fo.count, pool.size());
  // Partial Fisher-Yates: the first `take` slots form the sample.
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  return pool;
}

bool has_online_neighbor(const Topology& topology, PeerId peer,
                         std::span<const PeerStatus> status) {
  const auto adj = topology.neighbors(peer);
  return std::any_of(adj.begin(), adj.end(),
                     [&](PeerId v) { return status[v] == PeerStatus::Online; });
}

std::vector<PeerId> sample_fanout(const Topology& topology, PeerId peer, Fanout fo, Rng& rng,
                                  std::span<const PeerStatus> status) {
  if (!has_online_neighbor(topology, peer, status)) {
    throw IsolatedPeer("peer " + std::to_string(peer) + " has no online neighbours");
  }
  return sample_fanout(topology, peer, fo, rng);
}

}  // namespace p2pss
