#include "p2pss/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace p2pss {

namespace {

double sample_variance(std::span<const PeerState> states, double PeerState::*field, double sum) {
  if (states.size() < 2) return 0.0;
  const double mean = sum / static_cast<double>(states.size());
  double ss = 0.0;
  for (const auto& s : states) ss += (s.*field - mean) * (s.*field - mean);
  return ss / static_cast<double>(states.size() - 1);
}

}  // namespace

GhostFrequencies::GhostFrequencies(std::span<const std::vector<ItemId>> local_streams) {
  for (const auto& stream : local_streams) items_.insert(items_.end(), stream.begin(), stream.end());
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  columns_.assign(local_streams.size(), std::vector<double>(items_.size(), 0.0));
  lengths_.resize(local_streams.size());
  for (std::size_t l = 0; l < local_streams.size(); ++l) {
    for (ItemId x : local_streams[l]) columns_[l][*index_of(x)] += 1.0;
    lengths_[l] = static_cast<double>(local_streams[l].size());
  }
}

std::optional<std::size_t> GhostFrequencies::index_of(ItemId item) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), item);
  if (it == items_.end() || *it != item) return std::nullopt;
  return static_cast<std::size_t>(it - items_.begin());
}

double GhostFrequencies::value(PeerId peer, ItemId item) const {
  const auto idx = index_of(item);
  return idx ? columns_.at(peer)[*idx] : 0.0;
}

double GhostFrequencies::item_total(ItemId item) const {
  const auto idx = index_of(item);
  if (!idx) return 0.0;
  double total = 0.0;
  for (const auto& col : columns_) total += col[*idx];
  return total;
}

void GhostFrequencies::average(PeerId i, PeerId j) {
  if (i == j) return;
  auto& a = columns_.at(i);
  auto& b = columns_.at(j);
  for (std::size_t x = 0; x < a.size(); ++x) {
    const double mean = (a[x] + b[x]) / 2.0;
    a[x] = mean;
    b[x] = mean;
  }
  const double len = (lengths_[i] + lengths_[j]) / 2.0;
  lengths_[i] = len;
  lengths_[j] = len;
}

void ghost_step(GhostFrequencies& ghost, PeerId i, PeerId j) { ghost.average(i, j); }

World::World(std::vector<PeerState> states, Topology topology, ChurnState churn,
             std::uint64_t seed, EngineOptions options, std::optional<GhostFrequencies> ghost)
    : states_(std::move(states)),
      topology_(std::move(topology)),
      churn_(std::move(churn)),
      gossip_rng_(derive_seed(seed, 0x60551)),
      churn_rng_(derive_seed(seed, 0xC4024)),
      options_(options),
      ghost_(std::move(ghost)) {
  if (states_.size() != topology_.peer_count() || churn_.peer_count() != states_.size()) {
    throw std::invalid_argument("world: states, topology and churn disagree on the peer count");
  }
  if (ghost_ && ghost_->peer_count() != states_.size()) {
    throw std::invalid_argument("world: ghost peer count mismatch");
  }
}

std::vector<PeerPair> World::all_pairs() const {
  std::vector<PeerPair> out;
  for (const auto& round : pairs_) out.insert(out.end(), round.begin(), round.end());
  return out;
}

RoundTrace World::trace() const {
  RoundTrace t;
  t.round = round_;
  for (const auto& s : states_) {
    t.sum_n_avg += s.n_avg_est;
    t.sum_q += s.q_est;
  }
  t.var_n_avg = sample_variance(states_, &PeerState::n_avg_est, t.sum_n_avg);
  t.var_q = sample_variance(states_, &PeerState::q_est, t.sum_q);
  t.online = churn_.online_count();
  t.exchanges = last_exchanges_;
  t.cancelled = last_cancelled_;
  return t;
}

void World::run_round() {
  ++round_;
  std::vector<PeerId> order = step_churn(churn_, round_, churn_rng_);
  shuffle(std::span<PeerId>(order), gossip_rng_);

  const auto status = churn_.status();
  auto& committed = pairs_.emplace_back();
  last_exchanges_ = 0;
  last_cancelled_ = 0;
  for (PeerId u : order) {
    if (!has_online_neighbor(topology_, u, status)) continue;
    for (PeerId v : sample_fanout(topology_, u, options_.fanout, gossip_rng_)) {
      if (options_.record_events) events_.push_back({round_, u, v, EventKind::Begin});
      if (status[v] != PeerStatus::Online) {
        ++last_cancelled_;
        if (options_.record_events) events_.push_back({round_, u, v, EventKind::Cancel});
        continue;
      }
      PeerState shared = gossip_update(states_[u], states_[v], options_.k);
      adopt(states_[v], shared);
      states_[u].n_avg_est = shared.n_avg_est;
      states_[u].q_est = shared.q_est;
      states_[u].summary = std::move(shared.summary);
      if (ghost_) ghost_->average(u, v);
      committed.emplace_back(u, v);
      ++last_exchanges_;
      if (options_.record_events) events_.push_back({round_, u, v, EventKind::Commit});
    }
  }
  for (auto& s : states_) s.round = round_;
}

SimulationResult run_simulation(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  std::vector<std::vector<ItemId>> locals;
  GroundTruth truth;
  {
    const auto stream = gen_zipf(config.stream_spec(derive_seed(seed, 1)));
    truth = exact_frequencies(stream, config.phi);
    PartitionScheme scheme;
    scheme.kind = config.partition;
    scheme.seed = derive_seed(seed, 4);
    scheme.item = config.adversarial_item.value_or(most_frequent_item(truth));
    locals = partition(stream, config.peers, scheme);
  }

  std::vector<PeerState> states;
  states.reserve(config.peers);
  for (PeerId l = 0; l < config.peers; ++l) states.push_back(init_peer(l, locals[l], config.k));

  Topology topology = build_topology(config.topology, config.peers, derive_seed(seed, 2));
  Rng churn_init(derive_seed(seed, 5));
  ChurnState churn = init_churn(config.churn, config.peers, churn_init);
  std::optional<GhostFrequencies> ghost;
  if (config.ghost) ghost.emplace(locals);
  locals.clear();
  locals.shrink_to_fit();

  EngineOptions options;
  options.k = config.k;
  options.fanout = config.fanout;
  SimulationResult result{World(states, std::move(topology), std::move(churn), derive_seed(seed, 3),
                                options, std::move(ghost)),
                          {},
                          std::move(truth),
                          std::move(states)};
  result.traces.push_back(result.world.trace());
  for (std::uint32_t r = 0; r < config.rounds; ++r) {
    result.world.run_round();
    result.traces.push_back(result.world.trace());
  }
  return result;
}

std::vector<StreamSummary> avg_merge_oracle(std::vector<StreamSummary> summaries, std::size_t k,
                                            std::span<const PeerPair> pair_sequence) {
  for (auto [i, j] : pair_sequence) {
    StreamSummary merged = scale(merge(summaries.at(i), summaries.at(j), k), 2.0);
    summaries.at(j) = merged;
    summaries.at(i) = std::move(merged);
  }
  return summaries;
}

std::vector<PeerPair> get_pair_distr(std::size_t peers, Rng& rng) {
  if (peers < 2) throw std::invalid_argument("pair selection needs at least 2 peers");
  std::vector<PeerId> order(peers);
  for (PeerId i = 0; i < peers; ++i) order[i] = i;
  shuffle(std::span<PeerId>(order), rng);
  std::vector<PeerPair> pairs;
  pairs.reserve(peers);
  for (PeerId i : order) {
    auto j = static_cast<PeerId>(uniform_below(rng, peers - 1));
    if (j >= i) ++j;
    pairs.emplace_back(i, j);
  }
  return pairs;
}

SandwichReport check_sandwich(const World& world) {
  const GhostFrequencies* ghost = world.ghost();
  if (ghost == nullptr) throw std::logic_error("sandwich check needs a ghost-enabled world");
  SandwichReport report;
  const auto k = static_cast<double>(world.options().k);
  for (PeerId l = 0; l < world.peer_count(); ++l) {
    const PeerState& s = world.state(l);
    const auto counters = s.summary.counters();
    for (const Counter& c : counters) {
      const double exact = ghost->value(l, c.item);
      ++report.checked;
      if (c.freq < exact) ++report.lower_violations;
      if (c.freq > exact + s.n_avg_est / k) ++report.upper_violations;
    }
    const double min = s.summary.min_frequency();
    const auto column = ghost->column(l);
    const auto items = ghost->items();
    for (std::size_t x = 0; x < items.size(); ++x) {
      if (column[x] > min && !s.summary.contains(items[x])) ++report.unstored_violations;
    }
  }
  return report;
}

}  // namespace p2pss
