#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "p2pss/random.hpp"
#include "p2pss/types.hpp"

namespace p2pss {

/// Pareto type II: F(x) = 1 - (1 + (x - mu)/beta)^(-alpha) for x >= mu.
struct ShiftedPareto {
  double mu = 0.0;
  double beta = 1.0;
  double alpha = 1.0;

  double cdf(double x) const;
  /// Inverse CDF at u in [0, 1).
  double quantile(double u) const;
  /// Finite only for alpha > 1.
  double mean() const;
};

double sample_shifted_pareto(const ShiftedPareto& dist, Rng& rng);

struct NoChurn {};

/// Every online peer dies independently with fail_prob at the start of each
/// round. Dead peers never return.
struct FailStop {
  double fail_prob = 0.0;
};

enum class LifetimeKind { Pareto, Exponential };

/// Peers alternate between online and offline periods with per-peer
/// heavy-tailed duration distributions.
struct Yao {
  LifetimeKind lifetime = LifetimeKind::Pareto;
};

using ChurnModel = std::variant<NoChurn, FailStop, Yao>;

// Parameters of the per-peer mean draws and the derived duration laws.
inline constexpr ShiftedPareto kYaoMeanLifetime{1.01, 1.0, 3.0};
inline constexpr ShiftedPareto kYaoMeanOffline{1.01, 2.0, 3.0};
inline constexpr double kYaoLifetimeBeta = 2.0;
inline constexpr double kYaoOfflineBeta = 3.0;

class ChurnState {
 public:
  const ChurnModel& model() const { return model_; }
  std::size_t peer_count() const { return status_.size(); }
  std::span<const PeerStatus> status() const { return status_; }
  PeerStatus status(PeerId peer) const { return status_.at(peer); }
  bool is_online(PeerId peer) const { return status_.at(peer) == PeerStatus::Online; }
  std::size_t online_count() const;
  std::vector<PeerId> online_peers() const;

  /// Yao only: rounds the current status still holds.
  std::uint32_t remaining(PeerId peer) const { return remaining_.at(peer); }
  /// Yao only: the per-peer mean lifetime l_i and mean offline time d_i.
  double mean_lifetime(PeerId peer) const { return mean_lifetime_.at(peer); }
  double mean_offline(PeerId peer) const { return mean_offline_.at(peer); }

  /// Duration laws F_i (online) and G_i (offline) of a Yao peer, in rounds.
  std::uint32_t draw_online_duration(PeerId peer, Rng& rng) const;
  std::uint32_t draw_offline_duration(PeerId peer, Rng& rng) const;

 private:
  friend ChurnState init_churn(const ChurnModel& model, std::size_t peers, Rng& rng);
  friend std::vector<PeerId> step_churn(ChurnState& state, std::uint32_t round, Rng& rng);

  ChurnModel model_;
  std::vector<PeerStatus> status_;
  std::vector<std::uint32_t> remaining_;
  std::vector<double> mean_lifetime_;
  std::vector<double> mean_offline_;
  std::uint32_t last_round_ = 0;
};

/// All peers start online; Yao peers draw l_i, d_i and a first lifetime.
ChurnState init_churn(const ChurnModel& model, std::size_t peers, Rng& rng);

/// Advances churn to `round` (one more than the previous call) and returns
/// the online peers in increasing order.
std::vector<PeerId> step_churn(ChurnState& state, std::uint32_t round, Rng& rng);

}  // namespace p2pss
