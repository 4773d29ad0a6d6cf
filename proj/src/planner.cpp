#include "p2pss/planner.hpp"

#include <limits>
#include <string>

#include "p2pss/types.hpp"

namespace p2pss {

namespace {

// Sign of this decides whether k_of_R has a positive finite solution.
double k_denominator(double eps_star, const PlanInputs& in) {
  return in.eps * (1.0 + eps_star) * (1.0 + eps_star) - 4.0 * in.phi * eps_star;
}

}  // namespace

double epsilon_star(double p_star, double delta, double conv_factor, double rounds) {
  return p_star * std::sqrt(std::pow(conv_factor, rounds) / delta);
}

void PlanInputs::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (!(phi > 0.0 && phi < 1.0)) throw ConfigError("phi must lie in (0, 1)");
  if (!(eps > 0.0 && eps < phi)) throw ConfigError("eps must lie in (0, phi)");
  if (!(p_star >= 2.0)) throw ConfigError("p_star must be at least 2");
  if (!(conv_factor > 0.0 && conv_factor < 1.0)) {
    throw ConfigError("convergence factor must lie in (0, 1)");
  }
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::TimeDominant:
      return "time-dominant";
    case Strategy::SpaceDominant:
      return "space-dominant";
    case Strategy::Explicit:
      return "explicit";
  }
  return "unknown";
}

double tolerance_at(double k, double eps_star, double phi) {
  const double one_plus = 1.0 + eps_star;
  const double counter_term = std::isinf(k) ? 0.0 : (1.0 - eps_star) / (k * one_plus);
  return 4.0 * eps_star * phi / (one_plus * one_plus) + counter_term;
}

double tolerance(double k, std::uint32_t rounds, const PlanInputs& in) {
  return tolerance_at(k, epsilon_star(in.p_star, in.delta, in.conv_factor, rounds), in.phi);
}

std::uint64_t k_of_R(const PlanInputs& in, std::uint32_t rounds) {
  in.validate();
  const double e = epsilon_star(in.p_star, in.delta, in.conv_factor, rounds);
  const double denom = k_denominator(e, in);
  if (e >= 1.0 || denom <= 0.0) {
    throw InfeasibleRounds("no finite number of counters reaches eps=" + std::to_string(in.eps) +
                           " after " + std::to_string(rounds) + " rounds (eps*=" +
                           std::to_string(e) + ")");
  }
  const double k = std::ceil((1.0 - e * e) / denom);
  if (!(k < 9.0e18)) throw InfeasibleRounds("required counters overflow");
  return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

std::uint32_t r_min(const PlanInputs& in) {
  in.validate();
  const double root =
      (2.0 * in.phi - in.eps - 2.0 * std::sqrt(in.phi * in.phi - in.eps * in.phi)) /
      (in.eps * in.p_star);
  const double bound = (std::log(in.delta) + 2.0 * std::log(root)) / std::log(in.conv_factor);
  const double r = std::floor(bound) + 1.0;
  return r < 0.0 ? 0u : static_cast<std::uint32_t>(r);
}

Plan explicit_plan(const PlanInputs& in, std::uint64_t k, std::uint32_t rounds) {
  Plan plan;
  plan.k = k;
  plan.rounds = rounds;
  plan.strategy = Strategy::Explicit;
  plan.eps_star = epsilon_star(in.p_star, in.delta, in.conv_factor, rounds);
  plan.tolerance = tolerance_at(static_cast<double>(k), plan.eps_star, in.phi);
  return plan;
}

Plan time_dominant_plan(const PlanInputs& in) {
  const std::uint32_t rounds = r_min(in);
  Plan plan = explicit_plan(in, k_of_R(in, rounds), rounds);
  plan.strategy = Strategy::TimeDominant;
  return plan;
}

Plan space_dominant_plan(const PlanInputs& in) {
  in.validate();
  auto radius_for = [&](double k) {
    return (k * (2.0 * in.phi - in.eps) - std::sqrt(4.0 * in.phi * k * k * (in.phi - in.eps) + 1.0)) /
           (1.0 + in.eps * k);
  };
  double k = std::floor(1.0 / in.eps) + 1.0;
  // When 1/eps rounds just below an integer, k lands on 1/eps and only e = 0 works.
  while (!(radius_for(k) > 0.0)) k += 1.0;
  const double e = radius_for(k);
  const double r = std::floor((2.0 * std::log(e) - 2.0 * std::log(in.p_star) + std::log(in.delta)) /
                              std::log(in.conv_factor)) +
                   1.0;
  Plan plan = explicit_plan(in, static_cast<std::uint64_t>(k),
                            r < 0.0 ? 0u : static_cast<std::uint32_t>(r));
  plan.strategy = Strategy::SpaceDominant;
  return plan;
}

double gossip_deviation_bound(double sigma0_sq, std::size_t peers, double delta,
                              double conv_factor, double rounds) {
  return std::sqrt(static_cast<double>(peers - 1) * sigma0_sq) *
         std::sqrt(std::pow(conv_factor, rounds) / delta);
}

}  // namespace p2pss
