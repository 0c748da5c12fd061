#pragma once

#include "reachsim/tables.hpp"
#include "reachsim/topology.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace reachsim {

/// RIP convention: 16 means unreachable.
inline constexpr Cost kDefaultInfinity = Cost::whole(16);

// ---------------------------------------------------------------------------
// Link state

struct LinkStateResult {
    DetTables tables;
    std::size_t message_count = 0;           // link-state advertisements originated
    std::size_t flood_link_traversals = 0;   // transmissions summed over all floods
    std::vector<std::size_t> lsa_size;       // per router, entries in its advertisement
};

/// Shortest-path next-hop table rooted at `root` by forward costs. Equal-cost
/// alternatives resolve to the lowest next-hop router id, then lowest port.
DetTable shortest_path_table(const Topology& t, std::size_t root);

/// Link-state transmissions for one advertisement flooded from `origin`.
/// Each router forwards a new advertisement on every link it has not yet
/// seen it on, so every up link carries it exactly once.
std::size_t flood_traversals(const Topology& t, std::size_t origin);

/// Full link-state run. Throws TopologyError for disconnected topologies.
LinkStateResult run_link_state(const Topology& t);

// ---------------------------------------------------------------------------
// Distance vector

struct DvRound {
    DetTables tables;
    bool changed = false;
    std::size_t messages = 0;
};

/// Empty tables: the state before the first exchange.
DetTables dv_cold_start(const Topology& t);

/// One synchronous exchange. Every active router advertises its full
/// table (R-1 entries, unknown ones as `infinity`) on every up interface.
/// Receivers take the advertisement of their current next hop as
/// authoritative, switch to any strictly cheaper neighbor, and cap costs at
/// `infinity`; an entry at the cap means unreachable.
DvRound dv_round(const DetTables& states, const Topology& t, Cost infinity = kDefaultInfinity);

struct DvResult {
    DetTables tables;
    std::size_t rounds_used = 0;  // rounds that changed some entry
    bool converged = false;
    std::vector<std::size_t> per_round_messages;
};

/// Iterates dv_round from a cold start until a round changes nothing or
/// `max_rounds` rounds have run. Non-convergence is reported, not thrown.
DvResult run_distance_vector(const Topology& t, Cost infinity = kDefaultInfinity, std::size_t max_rounds = 1000);

// ---------------------------------------------------------------------------
// Path vector

/// Receiver-side handling of one advertised best path: prepend the receiver
/// and reject vectors that already contain it.
std::optional<PathVector> extend_path_vector(const Topology& t, std::size_t receiver, std::size_t port,
                                             const PathVector& advertised);

struct PathVectorRound {
    PathVectorTable table;
    bool changed = false;
    std::size_t messages = 0;
    std::size_t discarded = 0;  // advertisements rejected for containing the receiver
};

PathVectorRound path_vector_round(const PathVectorTable& state, const Topology& t);

struct PathVectorResult {
    PathVectorTable table;
    std::size_t rounds_used = 0;
    bool converged = false;
    std::vector<std::size_t> per_round_messages;
};

PathVectorResult run_path_vector(const Topology& t, std::size_t max_rounds = 1000);

/// Next-hop view of the best path vectors.
DetTables path_vector_next_hops(const Topology& t, const PathVectorTable& table);

// ---------------------------------------------------------------------------
// Failure traces

struct TraceRow {
    std::size_t round = 0;
    std::size_t router = 0;
    std::optional<Cost> cost;  // nullopt: no route at all
    std::optional<std::size_t> next_hop;
};

struct FailureTrace {
    std::vector<TraceRow> rows;  // rounds after the removal, active routers only
    std::size_t rounds = 0;
    bool settled = false;  // every router reports unreachable
};

/// Converges distance vector, removes `removed`, and records every remaining
/// router's cost to it each round until all of them sit at `infinity`.
/// Routers whose next hop was the removed router invalidate the route
/// immediately; no split horizon or poison reverse is applied.
FailureTrace simulate_count_to_infinity(Topology t, RouterId removed, Cost infinity = kDefaultInfinity,
                                        std::size_t max_rounds = 1000);

/// Same scenario under path vector.
FailureTrace simulate_path_vector_withdrawal(Topology t, RouterId removed, std::size_t max_rounds = 1000);

/// CSV `round,router,destination,cost,next_hop`; unreachable costs print as
/// "inf" and missing next hops as "-".
std::string trace_csv(const Topology& t, const FailureTrace& trace, RouterId destination);

}  // namespace reachsim
