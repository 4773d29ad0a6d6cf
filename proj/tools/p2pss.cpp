#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "p2pss/config.hpp"
#include "p2pss/experiment.hpp"
#include "p2pss/planner.hpp"
#include "p2pss/topology.hpp"
#include "p2pss/workload.hpp"

namespace {

using p2pss::ExperimentConfig;

// Settings given as flags, in CLI11 option order; applied after the file.
struct SettingFlags {
  std::string config_file;
  std::map<std::string, std::string> values;

  void attach(CLI::App& app) {
    app.add_option("-c,--config", config_file, "key=value configuration file")
        ->check(CLI::ExistingFile);
    const std::pair<const char*, const char*> keys[] = {
        {"n", "stream length"},
        {"m", "item universe size"},
        {"rho", "Zipf skew"},
        {"peers", "number of peers"},
        {"k", "counters per summary"},
        {"rounds", "gossip rounds"},
        {"fanout", "partners per peer and round (integer or ALL)"},
        {"phi", "frequent-item threshold"},
        {"delta", "failure probability of the confidence radius"},
        {"p_star", "upper bound on the peer count"},
        {"eps", "target tolerance; checks k and rounds before running"},
        {"topology", "ba or er"},
        {"ba_attach", "edges per new node of the BA model"},
        {"er_prob", "edge probability of the ER model"},
        {"churn", "none, failstop or yao"},
        {"fail_prob", "per-round fail-stop probability"},
        {"yao_lifetime", "pareto or exponential"},
        {"partition", "contiguous, roundrobin, shuffled or adversarial"},
        {"adversarial_item", "item placed on a single peer"},
        {"repetitions", "independent repetitions"},
        {"seed", "base seed"},
        {"ghost", "track exact per-peer frequencies"},
        {"query_peer", "query only this peer"},
        {"jobs", "parallel repetitions"},
        {"scale", "desk or full stream length"},
    };
    for (const auto& [key, help] : keys) {
      std::string flag = "--" + std::string(key);
      for (auto& ch : flag) {
        if (ch == '_') ch = '-';
      }
      app.add_option_function<std::string>(
          flag, [this, k = std::string(key)](const std::string& v) { values[k] = v; }, help);
    }
  }

  ExperimentConfig build() const {
    ExperimentConfig config;
    if (const char* env = std::getenv("P2PSS_SEED"); env != nullptr && *env != '\0') {
      p2pss::apply_setting(config, "seed", env);
    }
    if (!config_file.empty()) p2pss::apply_config_file(config, config_file);
    for (const auto& [key, value] : values) p2pss::apply_setting(config, key, value);
    return config;
  }
};

std::ostream* open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw p2pss::ConfigError("cannot write " + path);
  return &file;
}

int with_config(const SettingFlags& flags, const std::string& out_path,
                const std::function<int(const ExperimentConfig&, std::ostream&)>& fn) {
  try {
    const ExperimentConfig config = flags.build();
    std::ofstream file;
    return fn(config, *open_output(out_path, file));
  } catch (const p2pss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return p2pss::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return p2pss::kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gossip-based frequent item mining simulator"};
  app.require_subcommand(1);
  int status = p2pss::kExitOk;

  SettingFlags run_flags;
  std::string run_out;
  auto* run = app.add_subcommand("run", "run repetitions and print one CSV row per queried peer");
  run_flags.attach(*run);
  run->add_option("-o,--out", run_out, "CSV output file (default stdout)");
  run->callback([&] {
    status = with_config(run_flags, run_out, [](const ExperimentConfig& c, std::ostream& out) {
      return p2pss::cmd_run(c, out, std::cerr);
    });
  });

  SettingFlags sweep_flags;
  std::string sweep_out;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "vary one parameter with the others fixed");
  sweep_flags.attach(*sweep);
  sweep->add_option("--param", sweep_param, "rho, phi, peers, k, rounds, fanout or fail_prob")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("-o,--out", sweep_out, "CSV output file (default stdout)");
  sweep->callback([&] {
    status = with_config(sweep_flags, sweep_out, [&](const ExperimentConfig& c, std::ostream& out) {
      return p2pss::cmd_sweep(c, sweep_param, sweep_values, out, std::cerr);
    });
  });

  p2pss::PlanInputs plan_in;
  std::string strategy_name = "time";
  std::optional<std::uint64_t> plan_k;
  std::optional<std::uint32_t> plan_rounds;
  auto* plan = app.add_subcommand("plan", "choose counters and rounds for a target tolerance");
  plan->add_option("--strategy", strategy_name, "time, space or explicit")
      ->check(CLI::IsMember({"time", "space", "explicit"}));
  plan->add_option("--phi", plan_in.phi, "frequent-item threshold");
  plan->add_option("--eps", plan_in.eps, "target tolerance");
  plan->add_option("--delta", plan_in.delta, "failure probability");
  plan->add_option("--p-star", plan_in.p_star, "upper bound on the peer count");
  plan->add_option("--k", plan_k, "counters (explicit strategy)");
  plan->add_option("--rounds", plan_rounds, "rounds (explicit strategy)");
  plan->callback([&] {
    const auto strategy = strategy_name == "space"      ? p2pss::Strategy::SpaceDominant
                          : strategy_name == "explicit" ? p2pss::Strategy::Explicit
                                                        : p2pss::Strategy::TimeDominant;
    status = p2pss::cmd_plan(plan_in, strategy, plan_k, plan_rounds, std::cout, std::cerr);
  });

  SettingFlags stream_flags;
  std::string stream_out;
  auto* stream = app.add_subcommand("stream", "write the Zipf stream of a seed as little-endian u32");
  stream_flags.attach(*stream);
  stream->add_option("-o,--out", stream_out, "output file")->required();
  stream->callback([&] {
    status = with_config(stream_flags, "", [&](const ExperimentConfig& c, std::ostream&) {
      c.validate();
      const auto items = p2pss::gen_zipf(c.stream_spec(p2pss::derive_seed(c.base_seed, 1)));
      p2pss::write_stream(stream_out, items);
      std::cerr << items.size() << " items written to " << stream_out << '\n';
      return p2pss::kExitOk;
    });
  });

  SettingFlags topo_flags;
  std::string topo_out;
  auto* topo = app.add_subcommand("topology", "write the overlay of a seed as an edge list");
  topo_flags.attach(*topo);
  topo->add_option("-o,--out", topo_out, "edge list file (default stdout)");
  topo->callback([&] {
    status = with_config(topo_flags, topo_out, [](const ExperimentConfig& c, std::ostream& out) {
      c.validate();
      const auto graph =
          p2pss::build_topology(c.topology, c.peers, p2pss::derive_seed(c.base_seed, 2));
      graph.write_edge_list(out);
      return p2pss::kExitOk;
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? p2pss::kExitOk : p2pss::kExitConfig;
  }
  return status;
}
