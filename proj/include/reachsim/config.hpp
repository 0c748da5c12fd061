#pragma once

#include "reachsim/generators.hpp"
#include "reachsim/rl.hpp"
#include "reachsim/tables.hpp"
#include "reachsim/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reachsim {

enum class Protocol { link_state, distance_vector, path_vector, q_routing, ants, neg_reinforcement };

Protocol parse_protocol(std::string_view text);
std::string_view to_string(Protocol p);
bool is_deterministic(Protocol p);

enum class QVariant { argmax, ratio };

struct Flow {
    RouterId source = 0;
    RouterId destination = 0;
    double rate = 0.0;  // packets per ms
};

struct TopologyAction {
    enum class Kind { remove_router, set_cost };
    double at_ms = 0.0;
    Kind kind = Kind::remove_router;
    RouterId router = 0;
    std::string iface;  // set_cost: interface at `router`
    Cost cost_out;      // set_cost: router -> peer
    Cost cost_in;       // set_cost: peer -> router
};

struct ScenarioConfig {
    std::string topology_file;  // resolved path; empty when generated
    std::optional<GeneratorSpec> topology_spec;

    Protocol protocol = Protocol::ants;
    ForwardPolicy forward_policy = ForwardPolicy::proportional;

    double q_eta = 0.5;
    QVariant q_variant = QVariant::argmax;
    double q_init = 0.1;

    double ant_mix = 1.0;   // fraction of uniform ants
    double ant_rate = 1.0;  // ants per ms
    std::optional<std::uint64_t> ant_count;
    std::vector<std::pair<RouterId, double>> ant_destinations;  // empty: uniform
    CostFunction cost_fn{CostFunction::Kind::affine, 1.0, 1.0, 1.0, 0.05};  // affine:1,1 with gain 0.05
    bool ant_backward = false;
    std::size_t ant_hop_budget = 0;  // 0: four times the diameter
    bool regular_row_after_update = true;
    bool ants_share_queue = true;

    NegQualifier neg_level = NegQualifier::source_destination_incoming_link;

    std::vector<Flow> traffic;
    std::size_t data_hop_budget = 64;

    double duration_ms = 1000.0;
    std::uint64_t seed = 1;

    bool fixed_delay = false;
    double fixed_delay_ms = 1.0;
    double service_ms = 0.01;
    double round_interval_ms = 1.0;
    double snapshot_interval_ms = 10.0;
    Cost dv_infinity = Cost::whole(16);

    double coverage_eps = 1e-3;
    double convergence_delta = 1e-3;
    std::size_t convergence_window = 5;

    std::vector<std::pair<RouterId, RouterId>> split_pairs;
    std::vector<TopologyAction> actions;

    bool trace_updates = false;
};

/// Flat `key = value` text, `#` comments. Later keys override earlier ones.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);

/// Splits "key=value"; throws ConfigError when there is no '='.
std::pair<std::string, std::string> parse_override(std::string_view text);

/// Builds a validated config. Relative topology paths resolve against
/// `base_dir`. Unknown keys and bad values throw ConfigError.
ScenarioConfig build_config(const KeyValues& kv, const std::string& base_dir = ".");

/// Reads a config file; ConfigError names the path when it cannot be read.
KeyValues read_config_file(const std::string& path);

/// The topology a config describes. A missing file throws ConfigError.
Topology load_scenario_topology(const ScenarioConfig& cfg);

/// Keys build_config understands, for documentation and validation.
const std::vector<std::string>& config_keys();

}  // namespace reachsim
