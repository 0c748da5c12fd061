#pragma once

#include "reachsim/config.hpp"
#include "reachsim/deterministic.hpp"
#include "reachsim/metrics.hpp"
#include "reachsim/rl.hpp"
#include "reachsim/rng.hpp"
#include "reachsim/tables.hpp"
#include "reachsim/topology.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace reachsim {

enum class EventKind : std::uint8_t {
    packet_arrival,
    packet_origin,
    ant_arrival,
    backward_ant_arrival,
    ant_generation,
    data_generation,
    round_tick,
    snapshot,
    topology_action,
    scenario_end,
};

std::string_view to_string(EventKind k);

struct Event {
    Ticks time = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::scenario_end;
    std::size_t node = 0;
    std::size_t port = 0;     // arrival interface, when there is one
    std::size_t payload = 0;  // packet, ant or flow index

    // Reversed so std::priority_queue pops the earliest (time, seq).
    bool operator<(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
};

struct Packet {
    std::size_t source = 0;
    std::size_t destination = 0;
    std::size_t hop_budget = 64;
    Trace trace;
    Ticks created_at = 0;
    std::optional<Ticks> delivered_at;
    bool dropped = false;

    // Q-routing: where the packet was last forwarded from.
    std::size_t last_router = 0;
    std::size_t last_port = 0;
    Ticks sent_at = 0;
};

struct UpdateTraceRow {
    Ticks time = 0;
    ReinforcementUpdate update;
};

/// One seeded scenario run. Single-threaded; identical configs and seeds
/// replay identical event sequences.
class Engine {
public:
    /// Throws TopologyError when the topology is disconnected and
    /// ConfigError for flows or actions naming unknown routers.
    Engine(ScenarioConfig cfg, Topology topology);

    /// Processes the earliest event; nullopt once the queue is exhausted or
    /// the scenario has ended.
    std::optional<Event> step();

    /// Steps until the scenario ends.
    void run();

    /// Steps every event scheduled strictly before `until`.
    void run_until(Ticks until);

    Ticks now() const { return now_; }
    bool finished() const { return finished_; }

    /// Coverage of the tables the data plane uses right now.
    Coverage anytime_snapshot() const;

    /// Forwarding view: one-hot rows for deterministic protocols, the
    /// preference ratio or argmax one-hot for Q-routing, and the probability
    /// rows (with negative masks for traffic originating at the router) for
    /// the ant protocols.
    ProbTable effective_table() const;

    MetricsReport report() const;

    /// Injects one data packet at `source` at time `at` (dense indices).
    void inject_packet(std::size_t source, std::size_t destination, Ticks at);

    const Topology& topology() const { return topology_; }
    const ScenarioConfig& config() const { return cfg_; }
    const std::vector<Packet>& packets() const { return packets_; }
    const std::vector<UpdateTraceRow>& update_trace() const { return update_trace_; }
    std::string update_trace_csv() const;

    ProbTable& prob_table() { return prob_; }
    const ProbTable& prob_table() const { return prob_; }
    const QTable& q_table() const { return q_; }
    const DetTables& det_tables() const { return det_; }
    const QualifiedTable& qualified_table() const { return qualified_; }

    /// FNV-1a over every processed event, as 16 hex digits.
    std::string event_log_hash() const;
    std::uint64_t events_processed() const { return events_; }

    /// Queues an event; times before the current clock are raised to it.
    void schedule(Ticks at, EventKind kind, std::size_t node = 0, std::size_t port = 0, std::size_t payload = 0);

private:
    void record(const Event& e);

    void on_packet(std::size_t node, std::optional<std::size_t> arrival_port, std::size_t packet);
    void on_ant(std::size_t node, std::optional<std::size_t> arrival_port, std::size_t ant);
    void on_backward_ant(std::size_t node, std::size_t walk);
    void on_ant_generation();
    void on_data_generation(std::size_t flow);
    void on_round();
    void on_snapshot();
    void on_action(std::size_t action);

    std::optional<std::size_t> choose_data_port(std::size_t node, std::optional<std::size_t> arrival_port,
                                                const Packet& p);
    Ticks transmit(std::size_t node, std::size_t port, bool data_queue);
    Ticks link_delay(std::size_t node, std::size_t port) const;
    void drop_packet(std::size_t packet, std::uint64_t& counter);
    void send_backward(std::size_t walk);
    void q_learn(std::size_t node, const Packet& p);
    void recompute_link_state();
    std::vector<std::size_t> down_ports(std::size_t node) const;
    void trace_update(const ReinforcementUpdate& u);

    ScenarioConfig cfg_;
    Topology topology_;
    Rng rng_;
    std::priority_queue<Event> queue_;
    std::uint64_t seq_ = 0;
    Ticks now_ = 0;
    Ticks end_ = 0;
    bool finished_ = false;
    std::uint64_t events_ = 0;
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;

    ProbTable prob_;
    QTable q_;
    QualifiedTable qualified_;
    DetTables det_;
    PathVectorTable pv_;
    std::vector<std::size_t> eccentricity_;  // link state: rounds until a router's table is complete
    std::size_t ls_rounds_ = 0;
    AntParams ant_params_;
    std::size_t ant_budget_ = 1;

    std::vector<std::size_t> flow_src_, flow_dst_;
    std::vector<std::size_t> split_src_, split_dst_;
    std::vector<std::vector<Ticks>> busy_until_;  // [router][port]

    std::vector<Packet> packets_;
    std::vector<Ant> ants_;
    struct BackwardWalk {
        std::size_t ant = 0;
        BackwardPlan plan;
        std::size_t next = 0;  // index into plan.updates
    };
    std::vector<BackwardWalk> walks_;
    std::vector<bool> ant_live_;

    std::vector<TableSnapshot> history_;
    std::vector<std::pair<double, double>> coverage_curve_;
    std::vector<UpdateTraceRow> update_trace_;

    MessageCounts messages_;
    Discards discards_;
    std::uint64_t packets_delivered_ = 0;
    std::uint64_t packets_dropped_ = 0;
    std::uint64_t ants_generated_ = 0;
    std::uint64_t ants_delivered_ = 0;
    std::uint64_t ants_finished_ = 0;
};

/// Loads the topology, runs the scenario to completion, and returns the
/// finished engine.
Engine run_scenario(const ScenarioConfig& cfg);

}  // namespace reachsim
