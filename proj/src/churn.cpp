#include "p2pss/churn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace p2pss {

double ShiftedPareto::cdf(double x) const {
  if (x < mu) return 0.0;
  return 1.0 - std::pow(1.0 + (x - mu) / beta, -alpha);
}

double ShiftedPareto::quantile(double u) const {
  return mu + beta * (std::pow(1.0 - u, -1.0 / alpha) - 1.0);
}

double ShiftedPareto::mean() const {
  if (alpha <= 1.0) return std::numeric_limits<double>::infinity();
  return mu + beta / (alpha - 1.0);
}

double sample_shifted_pareto(const ShiftedPareto& dist, Rng& rng) {
  return dist.quantile(uniform_unit(rng));
}

namespace {

std::uint32_t to_rounds(double duration) {
  if (!(duration < 1e9)) return 1'000'000'000u;
  return static_cast<std::uint32_t>(std::max(1.0, std::ceil(duration)));
}

}  // namespace

std::size_t ChurnState::online_count() const {
  return static_cast<std::size_t>(std::count(status_.begin(), status_.end(), PeerStatus::Online));
}

std::vector<PeerId> ChurnState::online_peers() const {
  std::vector<PeerId> out;
  for (PeerId i = 0; i < status_.size(); ++i) {
    if (status_[i] == PeerStatus::Online) out.push_back(i);
  }
  return out;
}

std::uint32_t ChurnState::draw_online_duration(PeerId peer, Rng& rng) const {
  const double l = mean_lifetime_.at(peer);
  const auto& yao = std::get<Yao>(model_);
  if (yao.lifetime == LifetimeKind::Exponential) {
    return to_rounds(-l * std::log1p(-uniform_unit(rng)));
  }
  return to_rounds(sample_shifted_pareto({0.0, kYaoLifetimeBeta, 2.0 * l}, rng));
}

std::uint32_t ChurnState::draw_offline_duration(PeerId peer, Rng& rng) const {
  return to_rounds(sample_shifted_pareto({0.0, kYaoOfflineBeta, 2.0 * mean_offline_.at(peer)}, rng));
}

ChurnState init_churn(const ChurnModel& model, std::size_t peers, Rng& rng) {
  if (peers == 0) throw ConfigError("churn needs at least one peer");
  if (const auto* fs = std::get_if<FailStop>(&model)) {
    if (!(fs->fail_prob >= 0.0 && fs->fail_prob <= 1.0)) {
      throw ConfigError("fail probability must lie in [0, 1]");
    }
  }
  ChurnState state;
  state.model_ = model;
  state.status_.assign(peers, PeerStatus::Online);
  if (std::holds_alternative<Yao>(model)) {
    state.mean_lifetime_.resize(peers);
    state.mean_offline_.resize(peers);
    state.remaining_.resize(peers);
    for (std::size_t i = 0; i < peers; ++i) {
      state.mean_lifetime_[i] = sample_shifted_pareto(kYaoMeanLifetime, rng);
      state.mean_offline_[i] = sample_shifted_pareto(kYaoMeanOffline, rng);
    }
    for (PeerId i = 0; i < peers; ++i) state.remaining_[i] = state.draw_online_duration(i, rng);
  }
  return state;
}

std::vector<PeerId> step_churn(ChurnState& state, std::uint32_t round, Rng& rng) {
  if (round != state.last_round_ + 1) {
    throw std::logic_error("churn must advance one round at a time (got " + std::to_string(round) +
                           " after " + std::to_string(state.last_round_) + ")");
  }
  state.last_round_ = round;
  if (const auto* fs = std::get_if<FailStop>(&state.model_)) {
    for (auto& s : state.status_) {
      if (s == PeerStatus::Online && bernoulli(rng, fs->fail_prob)) s = PeerStatus::Dead;
    }
  } else if (std::holds_alternative<Yao>(state.model_)) {
    // A status drawn for d rounds holds through d steps and flips on the next.
    for (PeerId i = 0; i < state.status_.size(); ++i) {
      if (state.remaining_[i] == 0) {
        if (state.status_[i] == PeerStatus::Online) {
          state.status_[i] = PeerStatus::Offline;
          state.remaining_[i] = state.draw_offline_duration(i, rng);
        } else {
          state.status_[i] = PeerStatus::Online;
          state.remaining_[i] = state.draw_online_duration(i, rng);
        }
      }
      --state.remaining_[i];
    }
  }
  return state.online_peers();
}

}  // namespace p2pss
