#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "p2pss/churn.hpp"
#include "p2pss/protocol.hpp"
#include "p2pss/topology.hpp"
#include "p2pss/workload.hpp"

namespace p2pss {

inline constexpr std::uint64_t kDeskScaleItems = 2'000'000;
inline constexpr std::uint64_t kFullScaleItems = 200'000'000;

/// Full parameterization of a batch of repetitions. Defaults follow the
/// reference experiment, with a desk-scale stream length.
struct ExperimentConfig {
  std::uint64_t n = kDeskScaleItems;
  std::uint32_t m = 1'000'000;
  double rho = 1.2;
  std::uint32_t peers = 10'000;
  std::uint64_t k = 2200;
  std::uint32_t rounds = 24;
  Fanout fanout = Fanout::of(1);
  double phi = 0.02;
  double delta = 0.05;
  /// Upper bound on the peer count used for eps*; defaults to `peers`.
  std::optional<double> p_star;
  /// Target false-positive tolerance; when set, (k, rounds) is checked
  /// against it before anything runs.
  std::optional<double> eps;
  TopologyModel topology = ErdosRenyi{};
  ChurnModel churn = NoChurn{};
  PartitionKind partition = PartitionKind::Contiguous;
  /// Adversarial partition target; the most frequent item when unset.
  std::optional<ItemId> adversarial_item;
  std::uint32_t repetitions = 10;
  std::uint64_t base_seed = 1;
  bool ghost = false;
  /// Query only this peer instead of every online peer.
  std::optional<PeerId> query_peer;
  unsigned jobs = 1;

  double p_star_value() const { return p_star.value_or(static_cast<double>(peers)); }
  QueryParams query_params() const;
  StreamSpec stream_spec(std::uint64_t seed) const;
  /// Throws ConfigError.
  void validate() const;
};

/// Sets one named parameter from its text form. Throws ConfigError on an
/// unknown key or malformed value. Keys: n, m, rho, peers, k, rounds,
/// fanout, phi, delta, p_star, eps, topology, ba_attach, er_prob, churn,
/// fail_prob, yao_lifetime, partition, adversarial_item, repetitions, seed,
/// ghost, query_peer, jobs, scale.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Applies a flat key=value file ('#' starts a comment).
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

std::string fanout_to_string(Fanout fo);
Fanout parse_fanout(std::string_view text);

}  // namespace p2pss
