#include "reachsim/deterministic.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <tuple>

namespace reachsim {

namespace {

std::size_t active_count(const Topology& t) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) n += t.active(i) ? 1 : 0;
    return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Link state

DetTable shortest_path_table(const Topology& t, std::size_t root) {
    // Labels compare lexicographically by (distance, first-hop id, first-hop port).
    using Label = std::tuple<Cost, RouterId, std::size_t>;
    struct Item {
        Label label;
        std::size_t node;
        bool operator>(const Item& o) const { return std::tie(label, node) > std::tie(o.label, o.node); }
    };
    std::vector<std::optional<Label>> best(t.size());
    std::vector<bool> done(t.size(), false);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

    const auto root_ports = t.ports(root);
    for (std::size_t p = 0; p < root_ports.size(); ++p) {
        const Port& port = root_ports[p];
        if (!t.link_up(port.link) || !t.active(port.peer)) continue;
        Label l{port.cost_out, t.id(port.peer), p};
        if (!best[port.peer] || l < *best[port.peer]) {
            best[port.peer] = l;
            heap.push({l, port.peer});
        }
    }
    done[root] = true;
    while (!heap.empty()) {
        const Item item = heap.top();
        heap.pop();
        if (done[item.node] || item.label != *best[item.node]) continue;
        done[item.node] = true;
        for (const Port& port : t.ports(item.node)) {
            if (!t.link_up(port.link) || done[port.peer]) continue;
            Label l{std::get<0>(item.label) + port.cost_out, std::get<1>(item.label), std::get<2>(item.label)};
            if (!best[port.peer] || l < *best[port.peer]) {
                best[port.peer] = l;
                heap.push({l, port.peer});
            }
        }
    }
    DetTable table(t.size());
    for (std::size_t d = 0; d < t.size(); ++d) {
        if (d == root || !best[d]) continue;
        table.entries[d] = DetEntry{std::get<2>(*best[d]), std::get<0>(*best[d])};
    }
    return table;
}

std::size_t flood_traversals(const Topology& t, std::size_t origin) {
    // seen[node][port]: this advertisement already crossed that interface.
    std::vector<std::vector<bool>> seen(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) seen[i].assign(t.ports(i).size(), false);
    std::vector<bool> has(t.size(), false);
    std::size_t sent = 0;

    // Depth-first delivery: a transmission is received before the sender
    // moves on to its next interface.
    auto forward = [&](auto&& self, std::size_t u) -> void {
        const auto ports = t.ports(u);
        for (std::size_t p = 0; p < ports.size(); ++p) {
            const Port& port = ports[p];
            if (!t.link_up(port.link) || seen[u][p]) continue;
            seen[u][p] = true;
            seen[port.peer][port.peer_port] = true;
            ++sent;
            if (!has[port.peer]) {
                has[port.peer] = true;
                self(self, port.peer);
            }
        }
    };
    has[origin] = true;
    forward(forward, origin);
    return sent;
}

LinkStateResult run_link_state(const Topology& t) {
    if (!is_connected(t)) throw TopologyError("link state needs a connected topology");
    LinkStateResult out;
    out.tables.reserve(t.size());
    for (std::size_t r = 0; r < t.size(); ++r) {
        out.tables.push_back(t.active(r) ? shortest_path_table(t, r) : DetTable(t.size()));
        if (!t.active(r)) continue;
        out.message_count += 1;
        out.flood_link_traversals += flood_traversals(t, r);
        out.lsa_size.push_back(t.degree(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distance vector

DetTables dv_cold_start(const Topology& t) { return DetTables(t.size(), DetTable(t.size())); }

DvRound dv_round(const DetTables& states, const Topology& t, Cost infinity) {
    DvRound out;
    out.tables = states;
    const std::size_t entries = active_count(t) - (active_count(t) > 0 ? 1 : 0);

    for (std::size_t r = 0; r < t.size(); ++r) {
        if (!t.active(r)) continue;
        const auto ports = t.ports(r);
        out.messages += t.degree(r) * entries;

        for (std::size_t d = 0; d < t.size(); ++d) {
            if (d == r) continue;
            // Candidate cost through each interface from the neighbor's last advertisement.
            auto via = [&](std::size_t p) -> std::optional<Cost> {
                const Port& port = ports[p];
                if (!t.link_up(port.link) || !t.active(port.peer)) return std::nullopt;
                if (port.peer == d) return std::min(infinity, port.cost_out);
                const auto& adv = states[port.peer].entries[d];
                if (!adv) return infinity;
                return std::min(infinity, port.cost_out + adv->cost);
            };
            auto better = [&](std::size_t p, Cost c, std::size_t q, Cost cq) {
                if (c != cq) return c < cq;
                const RouterId ip = t.id(ports[p].peer), iq = t.id(ports[q].peer);
                return ip != iq ? ip < iq : p < q;
            };

            const auto& current = states[r].entries[d];
            std::optional<DetEntry> next;
            if (current) {
                if (const auto c = via(current->port)) {
                    next = DetEntry{current->port, *c};
                } else {
                    next = DetEntry{current->port, infinity};
                }
            }
            for (std::size_t p = 0; p < ports.size(); ++p) {
                const auto c = via(p);
                if (!c || *c >= infinity) continue;
                if (!next || (*c < next->cost) || (!current && better(p, *c, next->port, next->cost))) {
                    next = DetEntry{p, *c};
                }
            }
            if (next != current) {
                out.tables[r].entries[d] = next;
                out.changed = true;
            }
        }
    }
    return out;
}

DvResult run_distance_vector(const Topology& t, Cost infinity, std::size_t max_rounds) {
    DvResult out;
    out.tables = dv_cold_start(t);
    for (std::size_t round = 1; round <= max_rounds; ++round) {
        DvRound step = dv_round(out.tables, t, infinity);
        out.per_round_messages.push_back(step.messages);
        if (!step.changed) {
            out.converged = true;
            return out;
        }
        out.tables = std::move(step.tables);
        out.rounds_used = round;
    }
    // One more exchange tells whether the last round reached the fixpoint.
    out.converged = !dv_round(out.tables, t, infinity).changed;
    return out;
}

// ---------------------------------------------------------------------------
// Path vector

std::optional<PathVector> extend_path_vector(const Topology& t, std::size_t receiver, std::size_t port,
                                             const PathVector& advertised) {
    if (std::find(advertised.routers.begin(), advertised.routers.end(), receiver) != advertised.routers.end()) {
        return std::nullopt;
    }
    PathVector out;
    out.routers.reserve(advertised.routers.size() + 1);
    out.routers.push_back(receiver);
    out.routers.insert(out.routers.end(), advertised.routers.begin(), advertised.routers.end());
    out.cost = t.port(receiver, port).cost_out + advertised.cost;
    return out;
}

namespace {

void assert_loop_free(const PathVector& pv) {
    std::vector<std::size_t> sorted = pv.routers;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::logic_error("path vector with a repeated router");
    }
}

}  // namespace

PathVectorRound path_vector_round(const PathVectorTable& state, const Topology& t) {
    PathVectorRound out;
    out.table = PathVectorTable(t.size());
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (!t.active(r)) continue;
        std::size_t advertised_entries = 0;
        for (std::size_t d = 0; d < t.size(); ++d) advertised_entries += state.best(r, d) ? 1 : 0;
        out.messages += t.degree(r) * advertised_entries;
    }
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (!t.active(r)) continue;
        const auto ports = t.ports(r);
        for (std::size_t d = 0; d < t.size(); ++d) {
            if (d == r) continue;
            auto& list = out.table.paths[r][d];
            for (std::size_t p = 0; p < ports.size(); ++p) {
                const Port& port = ports[p];
                if (!t.link_up(port.link) || !t.active(port.peer)) continue;
                std::optional<PathVector> candidate;
                if (port.peer == d) {
                    candidate = PathVector{{r, d}, port.cost_out};
                } else if (const PathVector* adv = state.best(port.peer, d)) {
                    candidate = extend_path_vector(t, r, p, *adv);
                    if (!candidate) ++out.discarded;
                }
                if (!candidate) continue;
                assert_loop_free(*candidate);
                if (std::find(list.begin(), list.end(), *candidate) == list.end()) list.push_back(std::move(*candidate));
            }
            std::sort(list.begin(), list.end(),
                      [&t](const PathVector& a, const PathVector& b) { return path_vector_less(t, a, b); });
            if (list != state.paths[r][d]) out.changed = true;
        }
    }
    return out;
}

PathVectorResult run_path_vector(const Topology& t, std::size_t max_rounds) {
    PathVectorResult out;
    out.table = PathVectorTable(t.size());
    for (std::size_t round = 1; round <= max_rounds; ++round) {
        PathVectorRound step = path_vector_round(out.table, t);
        out.per_round_messages.push_back(step.messages);
        if (!step.changed) {
            out.converged = true;
            return out;
        }
        out.table = std::move(step.table);
        out.rounds_used = round;
    }
    out.converged = !path_vector_round(out.table, t).changed;
    return out;
}

DetTables path_vector_next_hops(const Topology& t, const PathVectorTable& table) {
    DetTables out(t.size(), DetTable(t.size()));
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (std::size_t d = 0; d < t.size(); ++d) {
            const PathVector* best = table.best(r, d);
            if (!best || best->routers.size() < 2) continue;
            const auto ports = t.ports(r);
            // Cheapest up interface to the first hop (parallel links are possible).
            std::optional<std::size_t> chosen;
            for (std::size_t p = 0; p < ports.size(); ++p) {
                if (ports[p].peer != best->routers[1] || !t.link_up(ports[p].link)) continue;
                if (!chosen || ports[p].cost_out < ports[*chosen].cost_out) chosen = p;
            }
            if (chosen) out[r].entries[d] = DetEntry{*chosen, best->cost};
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Failure traces

FailureTrace simulate_count_to_infinity(Topology t, RouterId removed, Cost infinity, std::size_t max_rounds) {
    const std::size_t gone = t.index(removed);
    DvResult converged = run_distance_vector(t, infinity, max_rounds);
    DetTables state = std::move(converged.tables);

    t.remove_router(gone);
    state[gone] = DetTable(t.size());
    bool any_route = false;
    for (std::size_t r = 0; r < t.size(); ++r) {
        auto& e = state[r].entries[gone];
        if (!e) continue;
        if (t.port(r, e->port).peer == gone) e->cost = infinity;
        any_route = any_route || e->cost < infinity;
    }

    FailureTrace trace;
    if (!any_route) {
        trace.settled = true;
        return trace;
    }
    for (std::size_t round = 1; round <= max_rounds; ++round) {
        state = dv_round(state, t, infinity).tables;
        bool all_infinite = true;
        for (std::size_t r = 0; r < t.size(); ++r) {
            if (!t.active(r)) continue;
            const auto& e = state[r].entries[gone];
            trace.rows.push_back(TraceRow{round, r, e ? std::optional<Cost>(e->cost) : std::nullopt,
                                          e ? std::optional<std::size_t>(t.port(r, e->port).peer) : std::nullopt});
            if (e && e->cost < infinity) all_infinite = false;
        }
        trace.rounds = round;
        if (all_infinite) {
            trace.settled = true;
            break;
        }
    }
    return trace;
}

FailureTrace simulate_path_vector_withdrawal(Topology t, RouterId removed, std::size_t max_rounds) {
    const std::size_t gone = t.index(removed);
    PathVectorTable state = run_path_vector(t, max_rounds).table;

    t.remove_router(gone);
    bool any_route = false;
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (std::size_t d = 0; d < t.size(); ++d) {
            auto& list = state.paths[r][d];
            // Candidates whose first hop was the removed router vanish with the link.
            std::erase_if(list, [&](const PathVector& pv) { return pv.routers.size() > 1 && pv.routers[1] == gone; });
            if (r == gone) list.clear();
        }
        any_route = any_route || state.best(r, gone) != nullptr;
    }

    FailureTrace trace;
    if (!any_route) {
        trace.settled = true;
        return trace;
    }
    for (std::size_t round = 1; round <= max_rounds; ++round) {
        state = path_vector_round(state, t).table;
        bool none_left = true;
        for (std::size_t r = 0; r < t.size(); ++r) {
            if (!t.active(r)) continue;
            const PathVector* best = state.best(r, gone);
            trace.rows.push_back(TraceRow{round, r, best ? std::optional<Cost>(best->cost) : std::nullopt,
                                          best ? std::optional<std::size_t>(best->routers[1]) : std::nullopt});
            if (best) none_left = false;
        }
        trace.rounds = round;
        if (none_left) {
            trace.settled = true;
            break;
        }
    }
    return trace;
}

std::string trace_csv(const Topology& t, const FailureTrace& trace, RouterId destination) {
    std::ostringstream out;
    out << "round,router,destination,cost,next_hop\n";
    for (const TraceRow& row : trace.rows) {
        out << row.round << ',' << t.id(row.router) << ',' << destination << ','
            << (row.cost ? row.cost->str() : std::string("inf")) << ','
            << (row.next_hop ? std::to_string(t.id(*row.next_hop)) : std::string("-")) << '\n';
    }
    return out.str();
}

}  // namespace reachsim
