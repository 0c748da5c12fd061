#include "reachsim/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace reachsim {

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::packet_arrival: return "packet_arrival";
        case EventKind::packet_origin: return "packet_origin";
        case EventKind::ant_arrival: return "ant_arrival";
        case EventKind::backward_ant_arrival: return "backward_ant_arrival";
        case EventKind::ant_generation: return "ant_generation";
        case EventKind::data_generation: return "data_generation";
        case EventKind::round_tick: return "round_tick";
        case EventKind::snapshot: return "snapshot";
        case EventKind::topology_action: return "topology_action";
        case EventKind::scenario_end: return "scenario_end";
    }
    return "?";
}

namespace {

std::size_t router_index(const Topology& t, RouterId id, std::string_view what) {
    const auto idx = t.find(id);
    if (!idx) throw ConfigError(std::string(what) + ": unknown router " + std::to_string(id));
    return *idx;
}

std::vector<std::size_t> eccentricities(const Topology& t) {
    std::vector<std::size_t> out(t.size(), 0);
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (!t.active(r)) continue;
        for (const auto& d : hop_distances(t, r)) {
            if (d) out[r] = std::max(out[r], *d);
        }
    }
    return out;
}

}  // namespace

Engine::Engine(ScenarioConfig cfg, Topology topology)
    : cfg_(std::move(cfg)),
      topology_(std::move(topology)),
      rng_(cfg_.seed),
      qualified_(cfg_.neg_level, topology_.size()) {
    if (topology_.empty()) throw TopologyError("empty topology");
    if (!is_connected(topology_)) throw TopologyError("scenario topology is disconnected");
    end_ = ms_to_ticks(cfg_.duration_ms);

    for (const Flow& f : cfg_.traffic) {
        flow_src_.push_back(router_index(topology_, f.source, "traffic"));
        flow_dst_.push_back(router_index(topology_, f.destination, "traffic"));
    }
    for (const auto& [s, d] : cfg_.split_pairs) {
        split_src_.push_back(router_index(topology_, s, "split"));
        split_dst_.push_back(router_index(topology_, d, "split"));
    }
    for (const TopologyAction& a : cfg_.actions) {
        const std::size_t r = router_index(topology_, a.router, "action");
        if (a.kind == TopologyAction::Kind::set_cost && !topology_.find_port(r, a.iface)) {
            throw ConfigError("action: router " + std::to_string(a.router) + " has no interface " + a.iface);
        }
    }
    for (const auto& [id, w] : cfg_.ant_destinations) router_index(topology_, id, "ants.destinations");

    busy_until_.resize(topology_.size());
    for (std::size_t r = 0; r < topology_.size(); ++r) busy_until_[r].assign(topology_.ports(r).size(), 0);

    ant_params_.cost_fn = cfg_.cost_fn;
    ant_params_.regular_row_after_update = cfg_.regular_row_after_update;
    ant_budget_ = cfg_.ant_hop_budget > 0 ? cfg_.ant_hop_budget : std::max<std::size_t>(1, 4 * diameter(topology_));

    switch (cfg_.protocol) {
        case Protocol::ants:
        case Protocol::neg_reinforcement: prob_ = ProbTable::uniform(topology_); break;
        case Protocol::q_routing: q_ = QTable(topology_, cfg_.q_init); break;
        case Protocol::distance_vector: {
            // Routers start out knowing their neighbors.
            DvRound first = dv_round(dv_cold_start(topology_), topology_, cfg_.dv_infinity);
            det_ = std::move(first.tables);
            messages_.dv_entries += first.messages;
            ++messages_.rounds;
            break;
        }
        case Protocol::path_vector: {
            PathVectorRound first = path_vector_round(PathVectorTable(topology_.size()), topology_);
            pv_ = std::move(first.table);
            det_ = path_vector_next_hops(topology_, pv_);
            messages_.pv_entries += first.messages;
            ++messages_.rounds;
            break;
        }
        case Protocol::link_state: {
            det_ = DetTables(topology_.size(), DetTable(topology_.size()));
            eccentricity_ = eccentricities(topology_);
            const LinkStateResult ls = run_link_state(topology_);
            messages_.lsa_originated += ls.message_count;
            messages_.lsa_flood_traversals += ls.flood_link_traversals;
            recompute_link_state();
            break;
        }
    }

    schedule(end_, EventKind::scenario_end);
    schedule(0, EventKind::snapshot);
    if (is_deterministic(cfg_.protocol)) schedule(ms_to_ticks(cfg_.round_interval_ms), EventKind::round_tick);
    const bool ant_protocol = cfg_.protocol == Protocol::ants || cfg_.protocol == Protocol::neg_reinforcement;
    if (ant_protocol && cfg_.ant_rate > 0.0 && topology_.size() > 1 && (!cfg_.ant_count || *cfg_.ant_count > 0)) {
        schedule(ms_to_ticks(rng_.exponential(cfg_.ant_rate)), EventKind::ant_generation);
    }
    for (std::size_t f = 0; f < cfg_.traffic.size(); ++f) {
        if (cfg_.traffic[f].rate > 0.0) {
            schedule(ms_to_ticks(rng_.exponential(cfg_.traffic[f].rate)), EventKind::data_generation, 0, 0, f);
        }
    }
    for (std::size_t a = 0; a < cfg_.actions.size(); ++a) {
        schedule(ms_to_ticks(cfg_.actions[a].at_ms), EventKind::topology_action, 0, 0, a);
    }
}

void Engine::schedule(Ticks at, EventKind kind, std::size_t node, std::size_t port, std::size_t payload) {
    queue_.push(Event{std::max(at, now_), seq_++, kind, node, port, payload});
}

void Engine::record(const Event& e) {
    auto mix = [this](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            hash_ ^= (v >> (8 * i)) & 0xffU;
            hash_ *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(e.time));
    mix(static_cast<std::uint64_t>(e.kind));
    mix(e.node);
    mix(e.port);
    mix(e.payload);
    ++events_;
}

std::string Engine::event_log_hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
}

std::optional<Event> Engine::step() {
    if (finished_ || queue_.empty()) return std::nullopt;
    const Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    record(e);
    switch (e.kind) {
        case EventKind::packet_arrival: on_packet(e.node, e.port, e.payload); break;
        case EventKind::packet_origin: on_packet(e.node, std::nullopt, e.payload); break;
        case EventKind::ant_arrival: on_ant(e.node, e.port, e.payload); break;
        case EventKind::backward_ant_arrival: on_backward_ant(e.node, e.payload); break;
        case EventKind::ant_generation: on_ant_generation(); break;
        case EventKind::data_generation: on_data_generation(e.payload); break;
        case EventKind::round_tick: on_round(); break;
        case EventKind::snapshot: on_snapshot(); break;
        case EventKind::topology_action: on_action(e.payload); break;
        case EventKind::scenario_end:
            if (history_.empty() || history_.back().time != now_) on_snapshot();
            finished_ = true;
            break;
    }
    return e;
}

void Engine::run() {
    while (step()) {
    }
}

void Engine::run_until(Ticks until) {
    while (!finished_ && !queue_.empty() && queue_.top().time < until) step();
}

void Engine::inject_packet(std::size_t source, std::size_t destination, Ticks at) {
    if (source >= topology_.size() || destination >= topology_.size() || source == destination) {
        throw ConfigError("inject_packet: bad source or destination");
    }
    Packet p;
    p.source = source;
    p.destination = destination;
    p.hop_budget = cfg_.data_hop_budget;
    p.created_at = std::max(at, now_);
    packets_.push_back(std::move(p));
    schedule(at, EventKind::packet_origin, source, 0, packets_.size() - 1);
}

std::vector<std::size_t> Engine::down_ports(std::size_t node) const {
    std::vector<std::size_t> down;
    const auto ports = topology_.ports(node);
    for (std::size_t p = 0; p < ports.size(); ++p) {
        if (!topology_.link_up(ports[p].link)) down.push_back(p);
    }
    return down;
}

Ticks Engine::link_delay(std::size_t node, std::size_t port) const {
    if (cfg_.fixed_delay) return ms_to_ticks(cfg_.fixed_delay_ms);
    return to_ticks(topology_.port(node, port).cost_out);
}

Ticks Engine::transmit(std::size_t node, std::size_t port, bool data_queue) {
    const Ticks service = ms_to_ticks(cfg_.service_ms);
    Ticks start = now_;
    if (data_queue || cfg_.ants_share_queue) {
        start = std::max(now_, busy_until_[node][port]);
        busy_until_[node][port] = start + service;
    }
    return start + service + link_delay(node, port);
}

void Engine::drop_packet(std::size_t packet, std::uint64_t& counter) {
    packets_[packet].dropped = true;
    ++packets_dropped_;
    ++counter;
}

// ---------------------------------------------------------------------------
// Data plane

void Engine::q_learn(std::size_t node, const Packet& p) {
    const std::size_t x = p.last_router;
    const std::size_t d = p.destination;
    double best = 0.0;
    if (node != d) {
        std::optional<double> m;
        const auto ports = topology_.ports(node);
        for (std::size_t k = 0; k < ports.size(); ++k) {
            if (!topology_.link_up(ports[k].link)) continue;
            const double v = q_.at(node, d, k);
            if (!m || v < *m) m = v;
        }
        if (!m) return;
        best = *m;
    }
    const double zeta = ticks_to_ms(now_ - p.sent_at);
    double& q = q_.at(x, d, p.last_port);
    q = q_update(q, best, zeta, cfg_.q_eta);
    ++messages_.q_estimates;
}

std::optional<std::size_t> Engine::choose_data_port(std::size_t node, std::optional<std::size_t> arrival_port,
                                                    const Packet& p) {
    const std::size_t d = p.destination;
    if (is_deterministic(cfg_.protocol)) {
        const auto& e = det_[node].entries[d];
        if (!e) return std::nullopt;
        if (cfg_.protocol == Protocol::distance_vector && e->cost >= cfg_.dv_infinity) return std::nullopt;
        return e->port;
    }
    const auto down = down_ports(node);
    const std::size_t degree = topology_.ports(node).size();
    if (down.size() == degree) return std::nullopt;

    if (cfg_.protocol == Protocol::q_routing) {
        const Eigen::VectorXd& q = q_.row(node, d);
        if (cfg_.q_variant == QVariant::argmax) {
            std::optional<std::size_t> best;
            for (std::size_t k = 0; k < degree; ++k) {
                if (std::find(down.begin(), down.end(), k) != down.end()) continue;
                if (!best || q(static_cast<Eigen::Index>(k)) < q(static_cast<Eigen::Index>(*best))) best = k;
            }
            return best;
        }
        ProbRow pref = q.cwiseInverse();
        for (std::size_t k : down) pref(static_cast<Eigen::Index>(k)) = 0.0;
        return choose_interface(prob_from_q(pref), ForwardPolicy::proportional, rng_, down);
    }

    const ProbRow row = cfg_.protocol == Protocol::neg_reinforcement
                            ? qualified_.row(prob_, node, d, p.source, arrival_port)
                            : prob_.row(node, d);
    if (cfg_.forward_policy == ForwardPolicy::deflection) {
        std::vector<std::size_t> blocked = down;
        for (std::size_t k = 0; k < degree; ++k) {
            if (busy_until_[node][k] > now_) blocked.push_back(k);
        }
        std::sort(blocked.begin(), blocked.end());
        blocked.erase(std::unique(blocked.begin(), blocked.end()), blocked.end());
        // Every link busy: wait in the queue of the preferred one.
        if (blocked.size() == degree) return choose_interface(row, ForwardPolicy::argmax, rng_, down);
        return choose_interface(row, ForwardPolicy::deflection, rng_, blocked);
    }
    return choose_interface(row, cfg_.forward_policy, rng_, down);
}

void Engine::on_packet(std::size_t node, std::optional<std::size_t> arrival_port, std::size_t id) {
    Packet& p = packets_[id];
    if (!topology_.active(node)) {
        drop_packet(id, discards_.packets_dead_link);
        return;
    }
    p.trace.push_back(node);
    if (arrival_port && cfg_.protocol == Protocol::q_routing) q_learn(node, p);
    if (node == p.destination) {
        p.delivered_at = now_;
        ++packets_delivered_;
        return;
    }
    if (p.trace.size() - 1 >= p.hop_budget) {
        drop_packet(id, discards_.packets_ttl);
        return;
    }
    const auto port = choose_data_port(node, arrival_port, p);
    if (!port) {
        drop_packet(id, discards_.packets_no_route);
        return;
    }
    if (!topology_.port_up(node, *port)) {
        drop_packet(id, discards_.packets_dead_link);
        return;
    }
    p.last_router = node;
    p.last_port = *port;
    p.sent_at = now_;
    ++messages_.data_hops;
    const Port& out = topology_.port(node, *port);
    schedule(transmit(node, *port, true), EventKind::packet_arrival, out.peer, out.peer_port, id);
}

void Engine::on_data_generation(std::size_t flow) {
    const double rate = cfg_.traffic[flow].rate;
    const Ticks next = now_ + ms_to_ticks(rng_.exponential(rate));
    if (next < end_) schedule(next, EventKind::data_generation, 0, 0, flow);
    Packet p;
    p.source = flow_src_[flow];
    p.destination = flow_dst_[flow];
    p.hop_budget = cfg_.data_hop_budget;
    p.created_at = now_;
    packets_.push_back(std::move(p));
    on_packet(flow_src_[flow], std::nullopt, packets_.size() - 1);
}

// ---------------------------------------------------------------------------
// Ants

void Engine::trace_update(const ReinforcementUpdate& u) {
    if (cfg_.trace_updates) update_trace_.push_back(UpdateTraceRow{now_, u});
}

void Engine::on_ant_generation() {
    std::vector<std::size_t> active;
    for (std::size_t r = 0; r < topology_.size(); ++r) {
        if (topology_.active(r) && topology_.degree(r) > 0) active.push_back(r);
    }
    const bool more = !cfg_.ant_count || ants_generated_ + 1 < *cfg_.ant_count;
    if (more && cfg_.ant_rate > 0.0) {
        const Ticks next = now_ + ms_to_ticks(rng_.exponential(cfg_.ant_rate));
        if (next < end_) schedule(next, EventKind::ant_generation);
    }
    if (active.size() < 2) return;

    const std::size_t source = active[rng_.below(active.size())];
    std::optional<std::size_t> destination;
    if (cfg_.ant_destinations.empty()) {
        std::size_t pick = rng_.below(active.size() - 1);
        if (active[pick] == source) pick = active.size() - 1;
        destination = active[pick];
    } else {
        double total = 0.0;
        std::vector<std::pair<std::size_t, double>> weights;
        for (const auto& [id, w] : cfg_.ant_destinations) {
            const std::size_t d = topology_.index(id);
            if (d == source || !topology_.active(d) || w <= 0.0) continue;
            weights.emplace_back(d, w);
            total += w;
        }
        if (total > 0.0) {
            const double target = rng_.uniform() * total;
            double acc = 0.0;
            for (const auto& [d, w] : weights) {
                acc += w;
                destination = d;
                if (target < acc) break;
            }
        }
    }
    if (!destination) return;

    Ant a;
    a.source = source;
    a.destination = *destination;
    a.mode = rng_.bernoulli(cfg_.ant_mix) ? AntMode::uniform : AntMode::regular;
    a.forward_credit = cfg_.ant_backward;
    a.record_path = cfg_.protocol == Protocol::neg_reinforcement;
    a.hop_budget = ant_budget_;
    ants_.push_back(std::move(a));
    ++ants_generated_;
    on_ant(source, std::nullopt, ants_.size() - 1);
}

void Engine::on_ant(std::size_t node, std::optional<std::size_t> arrival_port, std::size_t id) {
    Ant& a = ants_[id];
    auto finish = [&](std::uint64_t* counter) {
        if (counter) ++*counter;
        ++ants_finished_;
        a.stack.clear();
        a.stack.shrink_to_fit();
    };
    if (!topology_.active(node)) {
        finish(&discards_.ants_dead_link);
        return;
    }
    if (cfg_.protocol == Protocol::neg_reinforcement && arrival_port) {
        if (const auto signal = detect_negative_signal(topology_, a, node)) {
            ++messages_.negative_signals;
            if (!negative_reinforce(qualified_, prob_, *signal).applied) ++messages_.negative_rejected;
            finish(&discards_.ants_negative);
            return;
        }
    }
    const AntStep s = process_forward_ant(topology_, prob_, node, a, arrival_port, rng_, ant_params_);
    if (s.update) trace_update(*s.update);
    switch (s.action) {
        case AntAction::forward: {
            ++messages_.ant_hops;
            const Port& out = topology_.port(node, s.port);
            schedule(transmit(node, s.port, false), EventKind::ant_arrival, out.peer, out.peer_port, id);
            break;
        }
        case AntAction::delivered: {
            ++ants_delivered_;
            if (!a.forward_credit) {
                finish(nullptr);
                break;
            }
            BackwardPlan plan = plan_backward_ant(topology_, a, cfg_.cost_fn);
            if (plan.discarded || plan.updates.empty()) {
                finish(plan.discarded ? &discards_.ants_cycle : nullptr);
                break;
            }
            walks_.push_back(BackwardWalk{id, std::move(plan), 0});
            send_backward(walks_.size() - 1);
            break;
        }
        case AntAction::discarded_budget: finish(&discards_.ants_budget); break;
        case AntAction::discarded_cycle: finish(&discards_.ants_cycle); break;
    }
}

void Engine::send_backward(std::size_t w) {
    BackwardWalk& walk = walks_[w];
    Ant& a = ants_[walk.ant];
    const std::size_t j = a.stack.size() - 1 - walk.next;  // stack entry the walk heads to
    const StackEntry& target = a.stack[j];
    const Port& forward = topology_.port(target.node, target.port);
    const std::size_t here = forward.peer;
    const std::size_t back_port = forward.peer_port;
    if (!topology_.port_up(here, back_port) || !topology_.active(target.node)) {
        ++discards_.ants_dead_link;
        ++ants_finished_;
        return;
    }
    ++messages_.backward_ant_hops;
    schedule(transmit(here, back_port, false), EventKind::backward_ant_arrival, target.node, forward.link, w);
}

void Engine::on_backward_ant(std::size_t node, std::size_t w) {
    BackwardWalk& walk = walks_[w];
    ReinforcementUpdate& u = walk.plan.updates[walk.next];
    if (u.router != node) throw std::logic_error("backward ant off its path");
    apply_update(prob_, u);
    trace_update(u);
    ++walk.next;
    if (walk.next == walk.plan.updates.size()) {
        ++ants_finished_;
        ants_[walk.ant].stack.clear();
        walk.plan.updates.clear();
        return;
    }
    send_backward(w);
}

// ---------------------------------------------------------------------------
// Control plane

void Engine::recompute_link_state() {
    for (std::size_t r = 0; r < topology_.size(); ++r) {
        if (topology_.active(r) && eccentricity_[r] <= ls_rounds_) det_[r] = shortest_path_table(topology_, r);
    }
}

void Engine::on_round() {
    switch (cfg_.protocol) {
        case Protocol::distance_vector: {
            DvRound r = dv_round(det_, topology_, cfg_.dv_infinity);
            det_ = std::move(r.tables);
            messages_.dv_entries += r.messages;
            break;
        }
        case Protocol::path_vector: {
            PathVectorRound r = path_vector_round(pv_, topology_);
            pv_ = std::move(r.table);
            det_ = path_vector_next_hops(topology_, pv_);
            messages_.pv_entries += r.messages;
            break;
        }
        case Protocol::link_state:
            ++ls_rounds_;
            recompute_link_state();
            break;
        default: return;
    }
    ++messages_.rounds;
    const Ticks next = now_ + ms_to_ticks(cfg_.round_interval_ms);
    if (next < end_) schedule(next, EventKind::round_tick);
}

void Engine::on_snapshot() {
    const Coverage c = anytime_snapshot();
    coverage_curve_.emplace_back(ticks_to_ms(now_), c.fraction());
    history_.push_back(TableSnapshot{now_, effective_table()});
    const Ticks next = now_ + ms_to_ticks(cfg_.snapshot_interval_ms);
    if (!finished_ && next < end_) schedule(next, EventKind::snapshot);
}

void Engine::on_action(std::size_t i) {
    const TopologyAction& a = cfg_.actions[i];
    const std::size_t r = topology_.index(a.router);
    if (a.kind == TopologyAction::Kind::remove_router) {
        topology_.remove_router(r);
    } else {
        const std::size_t p = *topology_.find_port(r, a.iface);
        const std::size_t link = topology_.port(r, p).link;
        const Link& l = topology_.links()[link];
        const bool forward = topology_.index(l.a) == r && l.a_iface == a.iface;
        if (forward) {
            topology_.set_link_cost(link, a.cost_out, a.cost_in);
        } else {
            topology_.set_link_cost(link, a.cost_in, a.cost_out);
        }
    }
    if (cfg_.protocol == Protocol::link_state) {
        // Fresh advertisements flood out; tables catch up round by round.
        eccentricity_ = eccentricities(topology_);
        ls_rounds_ = 0;
        for (std::size_t n = 0; n < topology_.size(); ++n) {
            if (!topology_.active(n)) continue;
            ++messages_.lsa_originated;
            messages_.lsa_flood_traversals += flood_traversals(topology_, n);
        }
    }
}

// ---------------------------------------------------------------------------
// Observation

ProbTable Engine::effective_table() const {
    const std::size_t n = topology_.size();
    if (is_deterministic(cfg_.protocol)) {
        DetTables usable = det_;
        if (cfg_.protocol == Protocol::distance_vector) {
            for (DetTable& table : usable) {
                for (auto& e : table.entries) {
                    if (e && e->cost >= cfg_.dv_infinity) e.reset();
                }
            }
        }
        return to_prob_table(topology_, usable);
    }
    if (cfg_.protocol == Protocol::ants) return prob_;

    ProbTable out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t d = 0; d < n; ++d) {
            if (d == r) continue;
            if (cfg_.protocol == Protocol::neg_reinforcement) {
                out.row(r, d) = qualified_.row(prob_, r, d, r, std::nullopt);
                continue;
            }
            const Eigen::VectorXd& q = q_.row(r, d);
            ProbRow row = ProbRow::Zero(q.size());
            std::optional<Eigen::Index> best;
            for (Eigen::Index k = 0; k < q.size(); ++k) {
                if (!topology_.port_up(r, static_cast<std::size_t>(k))) continue;
                row(k) = 1.0 / q(k);
                if (!best || q(k) < q(*best)) best = k;
            }
            if (!best) {
                out.row(r, d) = row;
            } else if (cfg_.q_variant == QVariant::ratio) {
                out.row(r, d) = prob_from_q(row);
            } else {
                row.setZero();
                row(*best) = 1.0;
                out.row(r, d) = row;
            }
        }
    }
    return out;
}

Coverage Engine::anytime_snapshot() const {
    return reachability_coverage(effective_table(), topology_, cfg_.coverage_eps);
}

MetricsReport Engine::report() const {
    MetricsReport r;
    r.protocol = std::string(to_string(cfg_.protocol));
    r.seed = cfg_.seed;
    r.duration_ms = cfg_.duration_ms;
    r.events = events_;
    r.event_log_hash = event_log_hash();
    r.coverage = anytime_snapshot();
    r.coverage_curve = coverage_curve_;
    if (history_.size() >= 2) {
        if (const auto t = convergence_time(history_, cfg_.convergence_delta, cfg_.convergence_window)) {
            r.convergence_time_ms = ticks_to_ms(*t);
        }
    }

    r.packets_generated = packets_.size();
    r.packets_delivered = packets_delivered_;
    r.packets_dropped = packets_dropped_;
    r.packets_in_flight = r.packets_generated - packets_delivered_ - packets_dropped_;
    r.ants_generated = ants_generated_;
    r.ants_delivered = ants_delivered_;
    r.ants_in_flight = ants_generated_ - ants_finished_;
    r.messages = messages_;
    r.discards = discards_;

    std::vector<Trace> traces;
    traces.reserve(packets_.size());
    std::map<std::size_t, std::vector<double>> delays;
    for (const Packet& p : packets_) {
        traces.push_back(p.trace);
        if (p.delivered_at) delays[p.destination].push_back(ticks_to_ms(*p.delivered_at - p.created_at));
    }
    r.loops = loop_statistics(traces);
    for (auto& [d, samples] : delays) r.delay_ms[topology_.id(d)] = percentiles(samples);

    for (std::size_t i = 0; i < split_src_.size(); ++i) {
        const std::size_t s = split_src_[i], d = split_dst_[i];
        std::vector<Trace> delivered;
        for (const Packet& p : packets_) {
            if (p.delivered_at && p.source == s && p.destination == d) delivered.push_back(p.trace);
        }
        r.splits[std::to_string(topology_.id(s)) + "->" + std::to_string(topology_.id(d))] =
            split_ratio(delivered, [s, d](const Trace& tr) { return is_direct(tr, s, d); });
    }

    if (history_.size() >= 2) {
        const ProbTable& first = history_.front().table;
        const ProbTable& last = history_.back().table;
        for (std::size_t a = 0; a < first.routers(); ++a) {
            for (std::size_t d = 0; d < first.routers(); ++d) {
                const ProbRow& x = first.row(a, d);
                const ProbRow& y = last.row(a, d);
                for (Eigen::Index k = 0; k < std::min(x.size(), y.size()); ++k) {
                    const bool before = x(k) >= cfg_.coverage_eps, after = y(k) >= cfg_.coverage_eps;
                    r.work_added += !before && after ? 1 : 0;
                    r.work_culled += before && !after ? 1 : 0;
                }
            }
        }
    }
    return r;
}

std::string Engine::update_trace_csv() const {
    std::ostringstream out;
    out << "time,router,row_dest,interface,delta,p_after\n";
    char buf[64];
    for (const UpdateTraceRow& row : update_trace_) {
        const ReinforcementUpdate& u = row.update;
        out << ticks_to_ms(row.time) << ',' << topology_.id(u.router) << ',' << topology_.id(u.row_dest) << ','
            << topology_.port(u.router, u.port).name << ',';
        std::snprintf(buf, sizeof buf, "%.9g,%.9g", u.delta, u.p_after);
        out << buf << '\n';
    }
    return out.str();
}

Engine run_scenario(const ScenarioConfig& cfg) {
    Engine engine(cfg, load_scenario_topology(cfg));
    engine.run();
    return engine;
}

}  // namespace reachsim
