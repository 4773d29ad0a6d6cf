#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "p2pss/config.hpp"
#include "p2pss/engine.hpp"
#include "p2pss/metrics.hpp"
#include "p2pss/planner.hpp"

namespace p2pss {

/// Outcome of querying one peer after one repetition.
struct QueryRow {
  std::uint32_t run_id = 0;
  std::uint64_t seed = 0;
  PeerId peer = 0;
  std::string param_name = "none";
  std::string param_value;
  /// Empty when the query failed (see failure).
  std::optional<RunMetrics> metrics;
  std::string failure;
  double eps_star = 0.0;
  double p_est = 0.0;
  std::uint32_t rounds = 0;
  std::uint64_t k = 0;
  std::size_t online = 0;
  /// Frequency-envelope and false-positive-floor violations of this report.
  std::size_t sandwich_violations = 0;
  std::size_t floor_violations = 0;
};

struct RepetitionResult {
  std::vector<QueryRow> rows;
  std::vector<RoundTrace> traces;
};

/// Runs repetition `rep` (seed base_seed + rep) and queries the configured
/// peers. Query failures become rows without metrics.
RepetitionResult run_repetition(const ExperimentConfig& config, std::uint32_t rep,
                                const std::string& param_name = "none",
                                const std::string& param_value = "");

struct ExperimentResult {
  std::vector<QueryRow> rows;
  std::vector<std::vector<RoundTrace>> traces;
  /// Per-peer means over repetitions, then mean and CI over peers.
  MetricsAggregate aggregate;
  std::size_t failed_queries = 0;
};

/// All repetitions, in parallel when config.jobs > 1; row order is always
/// (repetition, peer).
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::string& param_name = "none",
                                const std::string& param_value = "");

MetricsAggregate aggregate_rows(std::span<const QueryRow> rows);

inline constexpr const char* kCsvHeader =
    "run_id,seed,peer_id,param_name,param_value,recall,precision,are,eps_star,p_est,rounds,k,"
    "online_peers";

void write_csv_rows(std::ostream& out, std::span<const QueryRow> rows);
/// Two summary rows: run_id "aggregate" (means) and "ci95" (half-widths).
void write_csv_aggregate(std::ostream& out, const ExperimentConfig& config,
                         const std::string& param_name, const std::string& param_value,
                         const MetricsAggregate& agg);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitRuntime = 3;

/// Sweepable parameter names.
inline constexpr const char* kSweepParameters[] = {"rho",    "phi",    "peers",    "k",
                                                   "rounds", "fanout", "fail_prob"};

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const ExperimentConfig& config, const std::string& parameter,
              std::span<const std::string> values, std::ostream& out, std::ostream& err);

/// Explicit strategy uses k and rounds; the others ignore them.
int cmd_plan(const PlanInputs& inputs, Strategy strategy, std::optional<std::uint64_t> k,
             std::optional<std::uint32_t> rounds, std::ostream& out, std::ostream& err);

}  // namespace p2pss
