#include "reachsim/rl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

namespace reachsim {

double q_update(double q, double neighbor_best, double zeta, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("q_update: step size must lie in (0, 1]");
    return q + eta * ((neighbor_best + zeta) - q);
}

ProbRow ant_prob_update(const ProbRow& row, std::size_t k, double delta) {
    ProbRow out = row;
    reinforce(out, static_cast<Eigen::Index>(k), delta);
    return out;
}

std::optional<ProbRow> zero_and_renormalize(const ProbRow& row, std::size_t k) {
    if (k >= static_cast<std::size_t>(row.size())) throw ConfigError("interface out of range");
    ProbRow out = row;
    out(static_cast<Eigen::Index>(k)) = 0.0;
    const double total = out.sum();
    if (!(total > 0.0)) return std::nullopt;
    return ProbRow(out / total);
}

double CostFunction::f(double c) const {
    switch (kind) {
        case Kind::identity: return c;
        case Kind::affine: return a * c + b;
        case Kind::power: return std::pow(c, gamma);
    }
    return c;
}

double CostFunction::delta(Cost c) const {
    const double fc = f(c.value());
    if (!(fc > 0.0)) throw ConfigError("cost function is not positive at c=" + c.str());
    return gain / fc;
}

CostFunction CostFunction::parse(std::string_view text, double gain) {
    CostFunction out;
    out.gain = gain;
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    auto number = [&](std::string_view tok) {
        double v = 0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
            throw ConfigError("bad cost function argument '" + std::string(tok) + "'");
        }
        return v;
    };
    if (kind == "identity" && args.empty()) {
        out.kind = Kind::identity;
    } else if (kind == "affine") {
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) throw ConfigError("affine cost function needs a,b");
        out.kind = Kind::affine;
        out.a = number(args.substr(0, comma));
        out.b = number(args.substr(comma + 1));
        if (out.a < 0.0) throw ConfigError("affine cost function must be non-decreasing");
    } else if (kind == "power") {
        out.kind = Kind::power;
        out.gamma = number(args);
        if (out.gamma < 0.0) throw ConfigError("power cost function must be non-decreasing");
    } else {
        throw ConfigError("unknown cost function '" + std::string(text) + "'");
    }
    if (!(gain > 0.0)) throw ConfigError("reinforcement gain must be positive");
    return out;
}

namespace {

std::vector<std::size_t> down_ports(const Topology& t, std::size_t node) {
    std::vector<std::size_t> down;
    const auto ports = t.ports(node);
    for (std::size_t p = 0; p < ports.size(); ++p) {
        if (!t.link_up(ports[p].link)) down.push_back(p);
    }
    return down;
}

}  // namespace

AntStep process_forward_ant(const Topology& t, ProbTable& table, std::size_t node, Ant& ant,
                            std::optional<std::size_t> arrival_port, Rng& rng, const AntParams& params) {
    AntStep step;
    const bool keep_stack = ant.forward_credit || ant.record_path;

    if (ant.forward_credit && arrival_port) {
        const bool revisit = std::any_of(ant.stack.begin(), ant.stack.end(),
                                         [node](const StackEntry& e) { return e.node == node; });
        if (revisit) {
            step.action = AntAction::discarded_cycle;
            return step;
        }
    }

    std::optional<ProbRow> row_before;
    if (!ant.forward_credit && arrival_port) {
        const Port& in = t.port(node, *arrival_port);
        ant.cost += in.cost_out;
        if (node != ant.source) {
            if (!params.regular_row_after_update && ant.mode == AntMode::regular && node != ant.destination) {
                row_before = table.row(node, ant.destination);
            }
            ReinforcementUpdate u{node, ant.source, *arrival_port, params.cost_fn.delta(ant.cost), 0.0};
            apply_update(table, u);
            step.update = u;
        }
    }

    if (node == ant.destination) {
        step.action = AntAction::delivered;
        return step;
    }
    if (ant.hop_budget == 0) {
        step.action = AntAction::discarded_budget;
        return step;
    }
    const auto down = down_ports(t, node);
    if (down.size() == t.ports(node).size()) {
        step.action = AntAction::discarded_budget;
        return step;
    }
    if (ant.mode == AntMode::regular) {
        const ProbRow& row = row_before ? *row_before : table.row(node, ant.destination);
        step.port = choose_interface(row, ForwardPolicy::proportional, rng, down);
    } else {
        step.port = choose_interface(ProbRow::Ones(static_cast<Eigen::Index>(t.ports(node).size())),
                                     ForwardPolicy::uniform, rng, down);
    }
    if (keep_stack) ant.stack.push_back(StackEntry{node, ant.cost, step.port});
    if (ant.forward_credit) ant.cost += t.port(node, step.port).cost_out;
    --ant.hop_budget;
    step.action = AntAction::forward;
    return step;
}

BackwardPlan plan_backward_ant(const Topology& t, const Ant& ant, const CostFunction& cost_fn) {
    BackwardPlan plan;
    std::vector<std::size_t> seen;
    for (std::size_t i = 0; i < ant.stack.size(); ++i) {
        const StackEntry& e = ant.stack[i];
        if (e.node >= t.size() || e.port >= t.ports(e.node).size()) throw ConfigError("malformed ant stack");
        const std::size_t next = i + 1 < ant.stack.size() ? ant.stack[i + 1].node : ant.destination;
        if (t.port(e.node, e.port).peer != next) throw ConfigError("malformed ant stack: hop does not follow a link");
        seen.push_back(e.node);
    }
    if (ant.stack.empty() || ant.stack.front().node != ant.source) throw ConfigError("malformed ant stack");
    seen.push_back(ant.destination);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        plan.discarded = true;
        return plan;
    }
    for (auto it = ant.stack.rbegin(); it != ant.stack.rend(); ++it) {
        plan.updates.push_back(
            ReinforcementUpdate{it->node, ant.destination, it->port, cost_fn.delta(ant.cost - it->cost), 0.0});
    }
    return plan;
}

void apply_update(ProbTable& table, ReinforcementUpdate& update) {
    ProbRow& row = table.row(update.router, update.row_dest);
    reinforce(row, static_cast<Eigen::Index>(update.port), update.delta);
    update.p_after = row(static_cast<Eigen::Index>(update.port));
}

BackwardPlan process_backward_ant(const Topology& t, ProbTable& table, const Ant& ant, const CostFunction& cost_fn) {
    BackwardPlan plan = plan_backward_ant(t, ant, cost_fn);
    for (ReinforcementUpdate& u : plan.updates) apply_update(table, u);
    return plan;
}

// ---------------------------------------------------------------------------
// Negative reinforcement

NegQualifier parse_neg_qualifier(std::string_view text) {
    if (text == "destination_only") return NegQualifier::destination_only;
    if (text == "source_destination") return NegQualifier::source_destination;
    if (text == "source_destination_incoming_link") return NegQualifier::source_destination_incoming_link;
    throw ConfigError("unknown negative-reinforcement level '" + std::string(text) + "'");
}

std::string_view to_string(NegQualifier q) {
    switch (q) {
        case NegQualifier::destination_only: return "destination_only";
        case NegQualifier::source_destination: return "source_destination";
        case NegQualifier::source_destination_incoming_link: return "source_destination_incoming_link";
    }
    return "?";
}

std::optional<NegativeSignal> detect_negative_signal(const Topology& t, const Ant& ant, std::size_t node) {
    if (ant.stack.empty()) return std::nullopt;
    const StackEntry& last = ant.stack.back();
    const bool revisit = std::any_of(ant.stack.begin(), ant.stack.end(),
                                     [node](const StackEntry& e) { return e.node == node; });
    const bool dead_end = node != ant.destination && t.degree(node) == 1;
    if (!revisit && !dead_end) return std::nullopt;

    NegativeSignal s{last.node, last.port, ant.destination, ant.source, std::nullopt};
    if (ant.stack.size() >= 2) {
        const StackEntry& before = ant.stack[ant.stack.size() - 2];
        s.incoming_port = t.port(before.node, before.port).peer_port;
    }
    return s;
}

QualifiedTable::Key QualifiedTable::key(std::size_t destination, std::size_t source,
                                        std::optional<std::size_t> incoming) const {
    switch (level_) {
        case NegQualifier::destination_only: return {destination, kAny, kAny};
        case NegQualifier::source_destination: return {destination, source, kAny};
        case NegQualifier::source_destination_incoming_link:
            return {destination, source, incoming ? *incoming : kOrigin};
    }
    return {destination, kAny, kAny};
}

ProbRow QualifiedTable::row(const ProbTable& base, std::size_t router, std::size_t destination, std::size_t source,
                            std::optional<std::size_t> incoming) const {
    const ProbRow& plain = base.row(router, destination);
    const auto& m = masks_.at(router);
    const auto it = m.find(key(destination, source, incoming));
    if (it == m.end()) return plain;
    ProbRow out = plain;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
        if (it->second[i]) out(static_cast<Eigen::Index>(i)) = 0.0;
    }
    const double total = out.sum();
    return total > 0.0 ? ProbRow(out / total) : out;
}

NegativeOutcome negative_reinforce(QualifiedTable& table, const ProbTable& base, const NegativeSignal& signal) {
    const ProbRow current = table.row(base, signal.router, signal.destination, signal.source, signal.incoming_port);
    NegativeOutcome out;
    const auto zeroed = zero_and_renormalize(current, signal.port);
    if (!zeroed) {
        out.row = current;
        return out;
    }
    auto& mask = table.masks(signal.router)[table.key(signal.destination, signal.source, signal.incoming_port)];
    if (mask.empty()) mask.assign(static_cast<std::size_t>(current.size()), false);
    mask[signal.port] = true;
    out.applied = true;
    out.row = *zeroed;
    return out;
}

bool is_false_negative(const Topology& t, const NegativeSignal& s, NegQualifier level) {
    if (level == NegQualifier::destination_only) {
        for (const Path& p : enumerate_loop_free_paths(t, s.router, s.destination).paths) {
            if (!p.hops.empty() && p.hops.front().port == s.port) return true;
        }
        return false;
    }
    for (const Path& p : enumerate_loop_free_paths(t, s.source, s.destination).paths) {
        for (std::size_t i = 0; i < p.hops.size(); ++i) {
            if (p.hops[i].node != s.router || p.hops[i].port != s.port) continue;
            if (level == NegQualifier::source_destination) return true;
            const std::optional<std::size_t> arrived =
                i == 0 ? std::nullopt
                       : std::optional<std::size_t>(t.port(p.hops[i - 1].node, p.hops[i - 1].port).peer_port);
            if (arrived == s.incoming_port) return true;
        }
    }
    return false;
}

}  // namespace reachsim
