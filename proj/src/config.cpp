#include "reachsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace reachsim {

Protocol parse_protocol(std::string_view text) {
    if (text == "link_state") return Protocol::link_state;
    if (text == "distance_vector") return Protocol::distance_vector;
    if (text == "path_vector") return Protocol::path_vector;
    if (text == "q_routing") return Protocol::q_routing;
    if (text == "ants") return Protocol::ants;
    if (text == "neg_reinforcement") return Protocol::neg_reinforcement;
    throw ConfigError("unknown protocol '" + std::string(text) + "'");
}

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::link_state: return "link_state";
        case Protocol::distance_vector: return "distance_vector";
        case Protocol::path_vector: return "path_vector";
        case Protocol::q_routing: return "q_routing";
        case Protocol::ants: return "ants";
        case Protocol::neg_reinforcement: return "neg_reinforcement";
    }
    return "?";
}

bool is_deterministic(Protocol p) {
    return p == Protocol::link_state || p == Protocol::distance_vector || p == Protocol::path_vector;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
    }
    return out;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError(std::string(key) + ": expected a nonnegative integer, got '" + std::string(v) + "'");
    }
    return out;
}

RouterId to_router(std::string_view key, std::string_view v) {
    const std::uint64_t id = to_uint(key, v);
    if (id > UINT32_MAX) throw ConfigError(std::string(key) + ": router id out of range");
    return static_cast<RouterId>(id);
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

Cost to_cost(std::string_view key, std::string_view v) {
    try {
        return Cost::parse(v);
    } catch (const Error& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

TopologyAction parse_action(std::string_view key, std::string_view v) {
    const auto parts = split(v, ':');
    if (parts.size() < 3) throw ConfigError(std::string(key) + ": expected time:kind:router[...]");
    TopologyAction a;
    a.at_ms = to_double(key, parts[0]);
    a.router = to_router(key, parts[2]);
    if (parts[1] == "remove" && parts.size() == 3) {
        a.kind = TopologyAction::Kind::remove_router;
    } else if (parts[1] == "set_cost" && parts.size() == 6) {
        a.kind = TopologyAction::Kind::set_cost;
        a.iface = std::string(parts[3]);
        a.cost_out = to_cost(key, parts[4]);
        a.cost_in = to_cost(key, parts[5]);
    } else {
        throw ConfigError(std::string(key) + ": expected time:remove:router or time:set_cost:router:iface:out:in");
    }
    if (a.at_ms < 0.0) throw ConfigError(std::string(key) + ": time must be nonnegative");
    return a;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
            }
            const std::string_view key = trim(line.substr(0, eq));
            if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
            kv[std::string(key)] = std::string(trim(line.substr(eq + 1)));
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return kv;
}

std::pair<std::string, std::string> parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || trim(text.substr(0, eq)).empty()) {
        throw ConfigError("override '" + std::string(text) + "' is not key=value");
    }
    return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "topology.file",      "topology.generate", "protocol",          "forward_policy",
        "q.eta",              "q.variant",         "q.init",            "ants.mix",
        "ants.rate",          "ants.count",        "ants.destinations", "ants.cost_function",
        "ants.gain",          "ants.backward",     "ants.hop_budget",   "ants.regular_row",
        "ants.share_queue",   "neg.level",         "traffic",           "traffic.hop_budget",
        "duration",           "seed",              "delay.model",       "link.service",
        "rounds.interval",    "rounds.infinity",   "snapshot.interval", "coverage.eps",
        "convergence.delta",  "convergence.window", "split",            "trace.updates",
    };
    return keys;
}

ScenarioConfig build_config(const KeyValues& kv, const std::string& base_dir) {
    ScenarioConfig cfg;
    const auto& known = config_keys();
    std::string cost_function = "affine:1,1";
    double gain = 0.05;

    std::vector<std::pair<std::string, TopologyAction>> actions;
    for (const auto& [key, value] : kv) {
        const std::string_view v = value;
        if (key.rfind("action.", 0) == 0) {
            actions.emplace_back(key, parse_action(key, v));
            continue;
        }
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        if (key == "topology.file") {
            std::filesystem::path p(value);
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            cfg.topology_file = p.lexically_normal().string();
        } else if (key == "topology.generate") {
            try {
                cfg.topology_spec = parse_generator_spec(v);
            } catch (const Error& e) {
                throw ConfigError(std::string("topology.generate: ") + e.what());
            }
        } else if (key == "protocol") {
            cfg.protocol = parse_protocol(v);
        } else if (key == "forward_policy") {
            cfg.forward_policy = parse_forward_policy(v);
        } else if (key == "q.eta") {
            cfg.q_eta = to_double(key, v);
        } else if (key == "q.variant") {
            if (v == "argmax") {
                cfg.q_variant = QVariant::argmax;
            } else if (v == "ratio") {
                cfg.q_variant = QVariant::ratio;
            } else {
                throw ConfigError("q.variant: expected argmax or ratio");
            }
        } else if (key == "q.init") {
            cfg.q_init = to_double(key, v);
        } else if (key == "ants.mix") {
            cfg.ant_mix = to_double(key, v);
        } else if (key == "ants.rate") {
            cfg.ant_rate = to_double(key, v);
        } else if (key == "ants.count") {
            cfg.ant_count = to_uint(key, v);
        } else if (key == "ants.destinations") {
            cfg.ant_destinations.clear();
            if (v != "uniform") {
                for (std::string_view item : split(v, ',')) {
                    const auto parts = split(item, ':');
                    if (parts.size() != 2) throw ConfigError("ants.destinations: expected uniform or id:weight,...");
                    cfg.ant_destinations.emplace_back(to_router(key, parts[0]), to_double(key, parts[1]));
                }
            }
        } else if (key == "ants.cost_function") {
            cost_function = value;
        } else if (key == "ants.gain") {
            gain = to_double(key, v);
        } else if (key == "ants.backward") {
            cfg.ant_backward = to_bool(key, v);
        } else if (key == "ants.hop_budget") {
            cfg.ant_hop_budget = to_uint(key, v);
        } else if (key == "ants.regular_row") {
            if (v == "after") {
                cfg.regular_row_after_update = true;
            } else if (v == "before") {
                cfg.regular_row_after_update = false;
            } else {
                throw ConfigError("ants.regular_row: expected before or after");
            }
        } else if (key == "ants.share_queue") {
            cfg.ants_share_queue = to_bool(key, v);
        } else if (key == "neg.level") {
            cfg.neg_level = parse_neg_qualifier(v);
        } else if (key == "traffic") {
            cfg.traffic.clear();
            if (!v.empty() && v != "none") {
                for (std::string_view item : split(v, ',')) {
                    const auto parts = split(item, ':');
                    if (parts.size() != 3) throw ConfigError("traffic: expected src:dst:rate,...");
                    cfg.traffic.push_back(
                        Flow{to_router(key, parts[0]), to_router(key, parts[1]), to_double(key, parts[2])});
                }
            }
        } else if (key == "traffic.hop_budget") {
            cfg.data_hop_budget = to_uint(key, v);
        } else if (key == "duration") {
            cfg.duration_ms = to_double(key, v);
        } else if (key == "seed") {
            cfg.seed = to_uint(key, v);
        } else if (key == "delay.model") {
            if (v == "cost") {
                cfg.fixed_delay = false;
            } else if (v.rfind("fixed:", 0) == 0) {
                cfg.fixed_delay = true;
                cfg.fixed_delay_ms = to_double(key, v.substr(6));
            } else {
                throw ConfigError("delay.model: expected cost or fixed:<ms>");
            }
        } else if (key == "link.service") {
            cfg.service_ms = to_double(key, v);
        } else if (key == "rounds.interval") {
            cfg.round_interval_ms = to_double(key, v);
        } else if (key == "rounds.infinity") {
            cfg.dv_infinity = to_cost(key, v);
        } else if (key == "snapshot.interval") {
            cfg.snapshot_interval_ms = to_double(key, v);
        } else if (key == "coverage.eps") {
            cfg.coverage_eps = to_double(key, v);
        } else if (key == "convergence.delta") {
            cfg.convergence_delta = to_double(key, v);
        } else if (key == "convergence.window") {
            cfg.convergence_window = to_uint(key, v);
        } else if (key == "split") {
            cfg.split_pairs.clear();
            for (std::string_view item : split(v, ',')) {
                const auto parts = split(item, ':');
                if (parts.size() != 2) throw ConfigError("split: expected src:dst,...");
                cfg.split_pairs.emplace_back(to_router(key, parts[0]), to_router(key, parts[1]));
            }
        } else if (key == "trace.updates") {
            cfg.trace_updates = to_bool(key, v);
        }
    }
    // Keys arrive sorted by name; actions run in time order, ties by key.
    std::stable_sort(actions.begin(), actions.end(),
                     [](const auto& a, const auto& b) { return a.second.at_ms < b.second.at_ms; });
    for (auto& [key, action] : actions) cfg.actions.push_back(std::move(action));

    try {
        cfg.cost_fn = CostFunction::parse(cost_function, gain);
    } catch (const Error& e) {
        throw ConfigError(std::string("ants.cost_function: ") + e.what());
    }

    if (cfg.topology_file.empty() == !cfg.topology_spec.has_value()) {
        throw ConfigError("exactly one of topology.file and topology.generate is required");
    }
    if (!(cfg.duration_ms > 0.0)) throw ConfigError("duration must be positive");
    if (!(cfg.q_eta > 0.0 && cfg.q_eta <= 1.0)) throw ConfigError("q.eta must lie in (0, 1]");
    if (!(cfg.q_init > 0.0)) throw ConfigError("q.init must be positive");
    if (!(cfg.ant_mix >= 0.0 && cfg.ant_mix <= 1.0)) throw ConfigError("ants.mix must lie in [0, 1]");
    if (!(cfg.ant_rate >= 0.0)) throw ConfigError("ants.rate must be nonnegative");
    for (const auto& [id, w] : cfg.ant_destinations) {
        if (!(w >= 0.0)) throw ConfigError("ants.destinations: weights must be nonnegative");
    }
    for (const Flow& f : cfg.traffic) {
        if (!(f.rate >= 0.0)) throw ConfigError("traffic: rates must be nonnegative");
        if (f.source == f.destination) throw ConfigError("traffic: source and destination must differ");
    }
    if (cfg.data_hop_budget == 0) throw ConfigError("traffic.hop_budget must be positive");
    if (cfg.fixed_delay && !(cfg.fixed_delay_ms >= 0.0)) throw ConfigError("delay.model: delay must be nonnegative");
    if (!(cfg.service_ms >= 0.0)) throw ConfigError("link.service must be nonnegative");
    if (!(cfg.round_interval_ms > 0.0)) throw ConfigError("rounds.interval must be positive");
    if (!(cfg.snapshot_interval_ms > 0.0)) throw ConfigError("snapshot.interval must be positive");
    if (!(cfg.coverage_eps > 0.0 && cfg.coverage_eps <= 1.0)) throw ConfigError("coverage.eps must lie in (0, 1]");
    if (!(cfg.convergence_delta > 0.0)) throw ConfigError("convergence.delta must be positive");
    if (cfg.convergence_window == 0) throw ConfigError("convergence.window must be positive");
    return cfg;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_key_values(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

Topology load_scenario_topology(const ScenarioConfig& cfg) {
    if (cfg.topology_spec) return generate(*cfg.topology_spec);
    return load_topology_file(cfg.topology_file);
}

}  // namespace reachsim
