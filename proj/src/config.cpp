#include "p2pss/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

namespace p2pss {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value '" + s + "' for " + std::string(key));
}

// Accepts plain integers and integral scientific notation such as 2e8.
std::uint64_t parse_count(std::string_view key, std::string_view text) {
  const double v = parse_real(key, text);
  if (v < 0.0 || v != std::floor(v) || v > 1.8e19) {
    throw ConfigError("expected a nonnegative integer for " + std::string(key) + ", got '" +
                      std::string(trim(text)) + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::uint32_t parse_u32(std::string_view key, std::string_view text) {
  const auto v = parse_count(key, text);
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError(std::string(key) + " is out of range");
  }
  return static_cast<std::uint32_t>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  const auto s = lower(trim(text));
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError("invalid boolean '" + s + "' for " + std::string(key));
}

}  // namespace

QueryParams ExperimentConfig::query_params() const {
  return QueryParams{phi, delta, p_star_value(), kConvergenceFactor};
}

StreamSpec ExperimentConfig::stream_spec(std::uint64_t seed) const {
  return StreamSpec{n, m, rho, seed};
}

void ExperimentConfig::validate() const {
  stream_spec(base_seed).validate();
  if (peers < 2) throw ConfigError("peers must be at least 2");
  if (k < 1) throw ConfigError("k must be at least 1");
  if (!fanout.all && fanout.count < 1) throw ConfigError("fanout must be at least 1 or ALL");
  if (!(phi > 0.0 && phi < 1.0)) throw ConfigError("phi must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (p_star && *p_star < peers) throw ConfigError("p_star must be at least the peer count");
  if (eps && !(*eps > 0.0 && *eps < phi)) throw ConfigError("eps must lie in (0, phi)");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (query_peer && *query_peer >= peers) throw ConfigError("query_peer is out of range");
  if (const auto* ba = std::get_if<BarabasiAlbert>(&topology)) {
    if (ba->attach < 1 || ba->attach >= peers) throw ConfigError("ba_attach must lie in [1, peers)");
  }
  if (const auto* fs = std::get_if<FailStop>(&churn)) {
    if (!(fs->fail_prob >= 0.0 && fs->fail_prob <= 1.0)) {
      throw ConfigError("fail_prob must lie in [0, 1]");
    }
  }
}

std::string fanout_to_string(Fanout fo) { return fo.all ? "ALL" : std::to_string(fo.count); }

Fanout parse_fanout(std::string_view text) {
  const auto s = lower(trim(text));
  if (s == "all") return Fanout::every();
  const auto v = parse_u32("fanout", s);
  if (v < 1) throw ConfigError("fanout must be at least 1 or ALL");
  return Fanout::of(v);
}

void apply_setting(ExperimentConfig& c, std::string_view raw_key, std::string_view value) {
  const auto key = lower(trim(raw_key));
  const auto v = trim(value);
  if (key == "n") {
    c.n = parse_count(key, v);
  } else if (key == "m") {
    c.m = parse_u32(key, v);
  } else if (key == "rho") {
    c.rho = parse_real(key, v);
  } else if (key == "peers" || key == "p") {
    c.peers = parse_u32(key, v);
  } else if (key == "k") {
    c.k = parse_count(key, v);
  } else if (key == "rounds" || key == "r") {
    c.rounds = parse_u32(key, v);
  } else if (key == "fanout" || key == "fo") {
    c.fanout = parse_fanout(v);
  } else if (key == "phi") {
    c.phi = parse_real(key, v);
  } else if (key == "delta") {
    c.delta = parse_real(key, v);
  } else if (key == "p_star") {
    c.p_star = parse_real(key, v);
  } else if (key == "eps") {
    c.eps = parse_real(key, v);
  } else if (key == "topology") {
    const auto s = lower(v);
    if (s == "ba") {
      if (!std::holds_alternative<BarabasiAlbert>(c.topology)) c.topology = BarabasiAlbert{};
    } else if (s == "er") {
      if (!std::holds_alternative<ErdosRenyi>(c.topology)) c.topology = ErdosRenyi{};
    } else {
      throw ConfigError("topology must be ba or er");
    }
  } else if (key == "ba_attach") {
    c.topology = BarabasiAlbert{parse_u32(key, v)};
  } else if (key == "er_prob") {
    c.topology = ErdosRenyi{parse_real(key, v)};
  } else if (key == "churn") {
    const auto s = lower(v);
    if (s == "none") {
      c.churn = NoChurn{};
    } else if (s == "failstop" || s == "fail-stop") {
      if (!std::holds_alternative<FailStop>(c.churn)) c.churn = FailStop{};
    } else if (s == "yao") {
      if (!std::holds_alternative<Yao>(c.churn)) c.churn = Yao{};
    } else {
      throw ConfigError("churn must be none, failstop or yao");
    }
  } else if (key == "fail_prob") {
    c.churn = FailStop{parse_real(key, v)};
  } else if (key == "yao_lifetime") {
    const auto s = lower(v);
    if (s == "pareto") {
      c.churn = Yao{LifetimeKind::Pareto};
    } else if (s == "exponential") {
      c.churn = Yao{LifetimeKind::Exponential};
    } else {
      throw ConfigError("yao_lifetime must be pareto or exponential");
    }
  } else if (key == "partition") {
    const auto s = lower(v);
    if (s == "contiguous") {
      c.partition = PartitionKind::Contiguous;
    } else if (s == "roundrobin" || s == "round-robin") {
      c.partition = PartitionKind::RoundRobin;
    } else if (s == "shuffled") {
      c.partition = PartitionKind::Shuffled;
    } else if (s == "adversarial") {
      c.partition = PartitionKind::Adversarial;
    } else {
      throw ConfigError("partition must be contiguous, roundrobin, shuffled or adversarial");
    }
  } else if (key == "adversarial_item") {
    c.adversarial_item = parse_u32(key, v);
  } else if (key == "repetitions" || key == "reps") {
    c.repetitions = parse_u32(key, v);
  } else if (key == "seed") {
    c.base_seed = parse_count(key, v);
  } else if (key == "ghost") {
    c.ghost = parse_bool(key, v);
  } else if (key == "query_peer") {
    c.query_peer = parse_u32(key, v);
  } else if (key == "jobs") {
    c.jobs = std::max(1u, parse_u32(key, v));
  } else if (key == "scale") {
    const auto s = lower(v);
    if (s == "desk") {
      c.n = kDeskScaleItems;
    } else if (s == "full") {
      c.n = kFullScaleItems;
    } else {
      throw ConfigError("scale must be desk or full");
    }
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
  }
}

}  // namespace p2pss
