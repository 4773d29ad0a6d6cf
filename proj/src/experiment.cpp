#include "p2pss/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

namespace p2pss {

namespace {

std::string fmt_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PlanInputs plan_inputs(const ExperimentConfig& config) {
  PlanInputs in;
  in.phi = config.phi;
  in.eps = config.eps.value_or(config.phi / 2.0);
  in.delta = config.delta;
  in.p_star = config.p_star_value();
  return in;
}

// Maps a sweep parameter onto its config key.
std::optional<std::string> sweep_key(const std::string& parameter) {
  for (const char* name : kSweepParameters) {
    if (parameter == name) return parameter;
  }
  return std::nullopt;
}

// Surfaces an infeasible (k, rounds) choice before anything runs.
void check_feasible(const ExperimentConfig& config) {
  if (!config.eps) return;
  const PlanInputs in = plan_inputs(config);
  const std::uint64_t needed = k_of_R(in, config.rounds);
  if (config.k < needed) {
    throw InfeasibleRounds("k=" + std::to_string(config.k) + " is below the " +
                           std::to_string(needed) + " counters needed for eps=" +
                           fmt_real(*config.eps) + " after " + std::to_string(config.rounds) +
                           " rounds");
  }
}

}  // namespace

RepetitionResult run_repetition(const ExperimentConfig& config, std::uint32_t rep,
                                const std::string& param_name, const std::string& param_value) {
  const std::uint64_t seed = config.base_seed + rep;
  SimulationResult sim = run_simulation(config, seed);
  const World& world = sim.world;

  std::vector<PeerId> targets;
  if (config.query_peer) {
    targets.push_back(*config.query_peer);
  } else {
    targets = world.churn().online_peers();
  }

  const QueryParams qp = config.query_params();
  const PlanInputs in = plan_inputs(config);
  const Plan plan = explicit_plan(in, config.k, config.rounds);

  RepetitionResult out;
  out.traces = std::move(sim.traces);
  out.rows.reserve(targets.size());
  for (PeerId peer : targets) {
    const PeerState& state = world.state(peer);
    QueryRow row;
    row.run_id = rep;
    row.seed = seed;
    row.peer = peer;
    row.param_name = param_name;
    row.param_value = param_value;
    row.eps_star = epsilon_star(qp.p_star, qp.delta, qp.conv_factor, state.round);
    row.p_est = state.q_est > 0.0 ? 1.0 / state.q_est : std::numeric_limits<double>::infinity();
    row.rounds = state.round;
    row.k = config.k;
    row.online = world.churn().online_count();
    if (!world.churn().is_online(peer)) {
      row.failure = "peer " + std::to_string(peer) + " is not online";
    } else {
      try {
        const FrequentReport report = query(state, qp);
        row.metrics = score(report, sim.truth);
        const BoundCheck bounds = bound_check(report, sim.truth, in, plan);
        row.sandwich_violations = bounds.sandwich_violations;
        row.floor_violations = bounds.floor_violations;
      } catch (const DegenerateEstimate& e) {
        row.failure = e.what();
      } catch (const InsufficientRounds& e) {
        row.failure = e.what();
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

MetricsAggregate aggregate_rows(std::span<const QueryRow> rows) {
  std::map<PeerId, std::vector<RunMetrics>> per_peer;
  for (const auto& row : rows) {
    if (row.metrics) per_peer[row.peer].push_back(*row.metrics);
  }
  std::vector<RunMetrics> peer_means;
  peer_means.reserve(per_peer.size());
  for (const auto& [peer, runs] : per_peer) {
    const MetricsAggregate a = aggregate(std::span<const RunMetrics>(runs));
    RunMetrics m;
    m.recall = a.recall.mean;
    m.precision = a.precision.mean;
    m.are = a.are.mean;
    peer_means.push_back(m);
  }
  return aggregate(std::span<const RunMetrics>(peer_means));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::string& param_name,
                                const std::string& param_value) {
  config.validate();
  std::vector<RepetitionResult> reps(config.repetitions);
  const unsigned workers = std::min<unsigned>(config.jobs, config.repetitions);
  if (workers <= 1) {
    for (std::uint32_t r = 0; r < config.repetitions; ++r) {
      reps[r] = run_repetition(config, r, param_name, param_value);
    }
  } else {
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint32_t r = next++; r < config.repetitions; r = next++) {
          try {
            reps[r] = run_repetition(config, r, param_name, param_value);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  ExperimentResult result;
  for (auto& rep : reps) {
    for (auto& row : rep.rows) {
      if (!row.metrics) ++result.failed_queries;
      result.rows.push_back(std::move(row));
    }
    result.traces.push_back(std::move(rep.traces));
  }
  result.aggregate = aggregate_rows(result.rows);
  return result;
}

void write_csv_rows(std::ostream& out, std::span<const QueryRow> rows) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows) {
    out << r.run_id << ',' << r.seed << ',' << r.peer << ',' << r.param_name << ','
        << r.param_value << ',' << fmt_real(r.metrics ? r.metrics->recall : nan) << ','
        << fmt_real(r.metrics ? r.metrics->precision : nan) << ','
        << fmt_real(r.metrics ? r.metrics->are : nan) << ',' << fmt_real(r.eps_star) << ','
        << fmt_real(r.p_est) << ',' << r.rounds << ',' << r.k << ',' << r.online << '\n';
  }
}

void write_csv_aggregate(std::ostream& out, const ExperimentConfig& config,
                         const std::string& param_name, const std::string& param_value,
                         const MetricsAggregate& agg) {
  const double e = epsilon_star(config.p_star_value(), config.delta, kConvergenceFactor,
                                config.rounds);
  out << "aggregate," << config.base_seed << ",*," << param_name << ',' << param_value << ','
      << fmt_real(agg.recall.mean) << ',' << fmt_real(agg.precision.mean) << ','
      << fmt_real(agg.are.mean) << ',' << fmt_real(e) << ",," << config.rounds << ',' << config.k
      << ",\n";
  out << "ci95," << config.base_seed << ",*," << param_name << ',' << param_value << ','
      << fmt_real(agg.recall.ci_halfwidth) << ',' << fmt_real(agg.precision.ci_halfwidth) << ','
      << fmt_real(agg.are.ci_halfwidth) << ",,," << config.rounds << ',' << config.k << ",\n";
}

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleRounds& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

void report_failures(std::ostream& err, const ExperimentResult& result) {
  if (result.failed_queries == 0) return;
  std::string first;
  for (const auto& row : result.rows) {
    if (!row.metrics) {
      first = row.failure;
      break;
    }
  }
  err << "warning: " << result.failed_queries << " of " << result.rows.size()
      << " queries returned no report (first: " << first << ")\n";
}

}  // namespace

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    check_feasible(config);
    const ExperimentResult result = run_experiment(config);
    out << kCsvHeader << '\n';
    write_csv_rows(out, result.rows);
    write_csv_aggregate(out, config, "none", "", result.aggregate);
    report_failures(err, result);
    return kExitOk;
  });
}

int cmd_sweep(const ExperimentConfig& config, const std::string& parameter,
              std::span<const std::string> values, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto key = sweep_key(parameter);
    if (!key) throw ConfigError("unknown sweep parameter '" + parameter + "'");
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<ExperimentConfig> configs;
    for (const auto& value : values) {
      ExperimentConfig c = config;
      apply_setting(c, *key, value);
      c.validate();
      check_feasible(c);
      configs.push_back(std::move(c));
    }
    out << kCsvHeader << '\n';
    for (std::size_t i = 0; i < configs.size(); ++i) {
      const ExperimentResult result = run_experiment(configs[i], parameter, values[i]);
      write_csv_rows(out, result.rows);
      write_csv_aggregate(out, configs[i], parameter, values[i], result.aggregate);
      report_failures(err, result);
    }
    return kExitOk;
  });
}

int cmd_plan(const PlanInputs& inputs, Strategy strategy, std::optional<std::uint64_t> k,
             std::optional<std::uint32_t> rounds, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    inputs.validate();
    Plan plan;
    switch (strategy) {
      case Strategy::TimeDominant:
        plan = time_dominant_plan(inputs);
        break;
      case Strategy::SpaceDominant:
        plan = space_dominant_plan(inputs);
        break;
      case Strategy::Explicit:
        if (!k || !rounds) throw ConfigError("explicit plan needs both k and rounds");
        if (*k < 1) throw ConfigError("k must be at least 1");
        plan = explicit_plan(inputs, *k, *rounds);
        break;
    }
    const bool within = plan.eps_star < 1.0 && plan.tolerance <= inputs.eps;
    out << "strategy:  " << to_string(plan.strategy) << '\n'
        << "k:         " << plan.k << '\n'
        << "rounds:    " << plan.rounds << '\n'
        << "eps_star:  " << fmt_real(plan.eps_star) << '\n'
        << "tolerance: " << fmt_real(plan.tolerance) << " (requested " << fmt_real(inputs.eps)
        << (within ? ", met" : ", NOT met") << ")\n";
    nlohmann::json line = {{"strategy", std::string(to_string(plan.strategy))},
                           {"k", plan.k},
                           {"rounds", plan.rounds},
                           {"eps_star", plan.eps_star},
                           {"tolerance", plan.tolerance},
                           {"eps", inputs.eps},
                           {"phi", inputs.phi},
                           {"delta", inputs.delta},
                           {"p_star", inputs.p_star},
                           {"feasible", within}};
    out << line.dump() << '\n';
    if (!within) {
      err << "infeasible: tolerance " << fmt_real(plan.tolerance) << " exceeds eps "
          << fmt_real(inputs.eps) << '\n';
      return strategy == Strategy::Explicit ? kExitInfeasible : kExitRuntime;
    }
    return kExitOk;
  });
}

}  // namespace p2pss
