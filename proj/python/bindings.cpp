#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

#include "p2pss/engine.hpp"
#include "p2pss/experiment.hpp"
#include "p2pss/planner.hpp"
#include "p2pss/protocol.hpp"
#include "p2pss/sketch.hpp"
#include "p2pss/workload.hpp"

namespace py = pybind11;
using namespace p2pss;

namespace {

ExperimentConfig config_from(const std::map<std::string, std::string>& settings) {
  ExperimentConfig c;
  for (const auto& [key, value] : settings) apply_setting(c, key, value);
  c.validate();
  return c;
}

py::dict aggregate_dict(const Aggregate& a) {
  py::dict d;
  d["mean"] = a.mean;
  d["ci95"] = a.ci_halfwidth;
  d["count"] = a.count;
  return d;
}

PlanInputs inputs(double phi, double eps, double delta, double p_star) {
  PlanInputs in{phi, eps, delta, p_star, kConvergenceFactor};
  in.validate();
  return in;
}

}  // namespace

PYBIND11_MODULE(_p2pss, m) {
  m.doc() = "Gossip-based frequent item mining over Space-Saving summaries";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DegenerateEstimate>(m, "DegenerateEstimate", base.ptr());
  py::register_exception<InsufficientRounds>(m, "InsufficientRounds", base.ptr());
  py::register_exception<InfeasibleRounds>(m, "InfeasibleRounds", base.ptr());
  py::register_exception<ConnectivityFailure>(m, "ConnectivityFailure", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.attr("CONVERGENCE_FACTOR") = kConvergenceFactor;

  py::class_<StreamSummary>(m, "StreamSummary")
      .def(py::init<std::size_t>(), py::arg("capacity"))
      .def_static(
          "from_counters",
          [](const std::vector<std::pair<ItemId, double>>& pairs, std::size_t k) {
            std::vector<Counter> cs;
            for (auto [item, freq] : pairs) cs.push_back({item, freq});
            return StreamSummary::from_counters(std::move(cs), k);
          },
          py::arg("counters"), py::arg("capacity"))
      .def_property_readonly("capacity", &StreamSummary::capacity)
      .def_property_readonly("min_frequency", &StreamSummary::min_frequency)
      .def_property_readonly("total", &StreamSummary::total)
      .def("find", &StreamSummary::find)
      .def("process", &StreamSummary::process)
      .def("counters",
           [](const StreamSummary& s) {
             std::vector<std::pair<ItemId, double>> out;
             for (const auto& c : s.ranked()) out.emplace_back(c.item, c.freq);
             return out;
           })
      .def("__len__", &StreamSummary::size)
      .def("__eq__", [](const StreamSummary& a, const StreamSummary& b) { return a == b; });

  m.def(
      "space_saving",
      [](const std::vector<ItemId>& items, std::size_t k) { return space_saving(items, k); },
      py::arg("items"), py::arg("k"));
  m.def("merge", &merge, py::arg("a"), py::arg("b"), py::arg("k"));
  m.def("scale", &scale, py::arg("summary"), py::arg("d"));

  py::class_<PeerState>(m, "PeerState")
      .def_readonly("peer_id", &PeerState::peer_id)
      .def_readonly("round", &PeerState::round)
      .def_readonly("summary", &PeerState::summary)
      .def_readonly("n_avg_est", &PeerState::n_avg_est)
      .def_readonly("q_est", &PeerState::q_est);

  m.def(
      "init_peer",
      [](PeerId id, const std::vector<ItemId>& local, std::size_t k) { return init_peer(id, local, k); },
      py::arg("peer_id"), py::arg("local_stream"), py::arg("k"));
  m.def("gossip_update", &gossip_update, py::arg("a"), py::arg("b"), py::arg("k"));
  m.def("estimate_peers", &estimate_peers, py::arg("state"));
  m.def(
      "query",
      [](const PeerState& s, double phi, double delta, double p_star, std::optional<double> eps_star) {
        const auto r = eps_star ? query_at(s, phi, *eps_star)
                                : query(s, QueryParams{phi, delta, p_star, kConvergenceFactor});
        py::dict d;
        d["entries"] = r.entries;
        d["threshold"] = r.threshold;
        d["eps_star"] = r.eps_star;
        d["p_est"] = r.p_est;
        return d;
      },
      py::arg("state"), py::arg("phi"), py::arg("delta") = 0.05, py::arg("p_star") = 1e4,
      py::arg("eps_star") = py::none());

  m.def("epsilon_star",
        [](double p_star, double delta, double rounds) {
          return epsilon_star(p_star, delta, kConvergenceFactor, rounds);
        },
        py::arg("p_star"), py::arg("delta"), py::arg("rounds"));
  m.def("tolerance",
        [](double k, std::uint32_t rounds, double phi, double eps, double delta, double p_star) {
          return tolerance(k, rounds, inputs(phi, eps, delta, p_star));
        },
        py::arg("k"), py::arg("rounds"), py::arg("phi") = 0.02, py::arg("eps") = 0.01,
        py::arg("delta") = 0.05, py::arg("p_star") = 1e4);
  m.def("k_of_R",
        [](std::uint32_t rounds, double phi, double eps, double delta, double p_star) {
          return k_of_R(inputs(phi, eps, delta, p_star), rounds);
        },
        py::arg("rounds"), py::arg("phi") = 0.02, py::arg("eps") = 0.01, py::arg("delta") = 0.05,
        py::arg("p_star") = 1e4);
  m.def("r_min",
        [](double phi, double eps, double delta, double p_star) {
          return r_min(inputs(phi, eps, delta, p_star));
        },
        py::arg("phi") = 0.02, py::arg("eps") = 0.01, py::arg("delta") = 0.05,
        py::arg("p_star") = 1e4);
  m.def(
      "plan",
      [](const std::string& strategy, double phi, double eps, double delta, double p_star,
         std::optional<std::uint64_t> k, std::optional<std::uint32_t> rounds) {
        const auto in = inputs(phi, eps, delta, p_star);
        Plan p;
        if (strategy == "time") {
          p = time_dominant_plan(in);
        } else if (strategy == "space") {
          p = space_dominant_plan(in);
        } else if (strategy == "explicit") {
          if (!k || !rounds) throw ConfigError("explicit plan needs both k and rounds");
          p = explicit_plan(in, *k, *rounds);
        } else {
          throw ConfigError("strategy must be time, space or explicit");
        }
        py::dict d;
        d["strategy"] = std::string(to_string(p.strategy));
        d["k"] = p.k;
        d["rounds"] = p.rounds;
        d["eps_star"] = p.eps_star;
        d["tolerance"] = p.tolerance;
        return d;
      },
      py::arg("strategy") = "time", py::arg("phi") = 0.02, py::arg("eps") = 0.01,
      py::arg("delta") = 0.05, py::arg("p_star") = 1e4, py::arg("k") = py::none(),
      py::arg("rounds") = py::none());

  m.def("gen_zipf",
        [](std::uint64_t n, std::uint32_t universe, double rho, std::uint64_t seed) {
          return gen_zipf(StreamSpec{n, universe, rho, seed});
        },
        py::arg("n"), py::arg("m"), py::arg("rho"), py::arg("seed"));
  m.def(
      "frequent_items",
      [](const std::vector<ItemId>& stream, double phi) { return exact_frequencies(stream, phi).frequent; },
      py::arg("stream"), py::arg("phi"));

  m.def(
      "simulate",
      [](const std::map<std::string, std::string>& settings, std::uint64_t seed) {
        const auto c = config_from(settings);
        std::vector<PeerState> states;
        {
          py::gil_scoped_release release;
          auto sim = run_simulation(c, seed);
          states.assign(sim.world.states().begin(), sim.world.states().end());
        }
        return states;
      },
      py::arg("settings") = std::map<std::string, std::string>{}, py::arg("seed") = 1,
      "Runs one repetition and returns the final peer states.");

  m.def(
      "run_experiment",
      [](const std::map<std::string, std::string>& settings) {
        const auto c = config_from(settings);
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(c);
        }
        py::dict d;
        d["recall"] = aggregate_dict(r.aggregate.recall);
        d["precision"] = aggregate_dict(r.aggregate.precision);
        d["are"] = aggregate_dict(r.aggregate.are);
        d["failed_queries"] = r.failed_queries;
        d["rows"] = r.rows.size();
        return d;
      },
      py::arg("settings") = std::map<std::string, std::string>{},
      "Runs all repetitions with key=value settings (same keys as the CLI).");
}
