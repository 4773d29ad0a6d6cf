#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace p2pss {

/// Expected per-round variance reduction of pairwise averaging when each
/// peer of a random permutation picks one partner: E[2^-psi] = 1/(2 sqrt(e)).
inline const double kConvergenceFactor = 1.0 / (2.0 * std::sqrt(std::numbers::e));

/// Confidence radius p* sqrt(C^r / delta) after r rounds.
double epsilon_star(double p_star, double delta, double conv_factor, double rounds);

struct PlanInputs {
  double phi = 0.02;
  double eps = 0.01;
  double delta = 0.05;
  double p_star = 1e4;
  double conv_factor = kConvergenceFactor;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;
};

enum class Strategy { TimeDominant, SpaceDominant, Explicit };

std::string_view to_string(Strategy s);

struct Plan {
  std::uint64_t k = 0;
  std::uint32_t rounds = 0;
  Strategy strategy = Strategy::Explicit;
  double eps_star = 0.0;
  /// Tolerance achieved by (k, rounds), recomputed from the closed form.
  double tolerance = 0.0;
};

/// False-positive tolerance 4 e phi / (1+e)^2 + (1-e) / (k (1+e)) for a
/// given confidence radius e. k may be infinite.
double tolerance_at(double k, double eps_star, double phi);

/// Tolerance reached with k counters after r rounds.
double tolerance(double k, std::uint32_t rounds, const PlanInputs& in);

/// Smallest integer k reaching in.eps after R rounds.
/// Throws InfeasibleRounds when no finite k does.
std::uint64_t k_of_R(const PlanInputs& in, std::uint32_t rounds);

/// Fewest rounds for which some finite k reaches in.eps.
std::uint32_t r_min(const PlanInputs& in);

/// Minimum rounds, with k from k_of_R at that round count.
Plan time_dominant_plan(const PlanInputs& in);

/// Minimum counters floor(1/eps)+1, with the rounds that make it sufficient.
Plan space_dominant_plan(const PlanInputs& in);

/// Evaluates a user-chosen (k, R) pair.
Plan explicit_plan(const PlanInputs& in, std::uint64_t k, std::uint32_t rounds);

/// High-probability bound on max_l |w_{r,l} - mean| for pairwise averaging
/// started from values with sample variance sigma0_sq over p peers.
double gossip_deviation_bound(double sigma0_sq, std::size_t peers, double delta,
                              double conv_factor, double rounds);

}  // namespace p2pss
