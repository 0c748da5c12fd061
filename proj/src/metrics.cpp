#include "reachsim/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>

namespace reachsim {

std::vector<bool> valid_first_hops(const Topology& t, std::size_t r, std::size_t d) {
    // Routers that can reach d without passing through r: reverse BFS from d.
    std::vector<bool> reaches(t.size(), false);
    std::queue<std::size_t> frontier;
    reaches[d] = true;
    frontier.push(d);
    while (!frontier.empty()) {
        const std::size_t v = frontier.front();
        frontier.pop();
        for (const Port& p : t.ports(v)) {
            if (!t.link_up(p.link) || p.peer == r || reaches[p.peer]) continue;
            reaches[p.peer] = true;
            frontier.push(p.peer);
        }
    }
    const auto ports = t.ports(r);
    std::vector<bool> valid(ports.size(), false);
    for (std::size_t i = 0; i < ports.size(); ++i) {
        valid[i] = t.link_up(ports[i].link) && reaches[ports[i].peer];
    }
    return valid;
}

Coverage reachability_coverage(const ProbTable& tables, const Topology& t, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("coverage floor must lie in (0, 1]");
    Coverage c;
    for (std::size_t r = 0; r < t.size(); ++r) {
        if (!t.active(r)) continue;
        for (std::size_t d = 0; d < t.size(); ++d) {
            if (d == r || !t.active(d)) continue;
            const auto valid = valid_first_hops(t, r, d);
            const ProbRow& row = tables.row(r, d);
            for (std::size_t i = 0; i < valid.size(); ++i) {
                if (!valid[i]) continue;
                ++c.total;
                if (static_cast<Eigen::Index>(i) < row.size() && row(static_cast<Eigen::Index>(i)) >= eps) ++c.covered;
            }
        }
    }
    return c;
}

std::optional<double> SplitRatio::ratio() const {
    if (!defined()) return std::nullopt;
    return static_cast<double>(group_a) / static_cast<double>(group_b);
}

std::optional<double> SplitRatio::fraction_a() const {
    if (group_a + group_b == 0) return std::nullopt;
    return static_cast<double>(group_a) / static_cast<double>(group_a + group_b);
}

SplitRatio split_ratio(std::span<const Trace> traces, const std::function<bool(const Trace&)>& in_group_a) {
    SplitRatio s;
    for (const Trace& tr : traces) {
        if (in_group_a(tr)) {
            ++s.group_a;
        } else {
            ++s.group_b;
        }
    }
    return s;
}

bool is_direct(const Trace& trace, std::size_t src, std::size_t dst) {
    return trace.size() == 2 && trace[0] == src && trace[1] == dst;
}

LoopStats loop_statistics(std::span<const Trace> traces) {
    LoopStats s;
    std::size_t extra_total = 0;
    for (const Trace& tr : traces) {
        std::vector<std::size_t> path;
        std::size_t loops = 0;
        for (std::size_t node : tr) {
            const auto it = std::find(path.begin(), path.end(), node);
            if (it == path.end()) {
                path.push_back(node);
                continue;
            }
            const auto length = static_cast<std::size_t>(path.end() - it);
            s.max_loop_length = std::max(s.max_loop_length, length);
            ++loops;
            path.erase(it + 1, path.end());
        }
        if (loops == 0) continue;
        ++s.packets_with_loop;
        s.loop_events += loops;
        extra_total += tr.size() - path.size();
    }
    if (s.packets_with_loop > 0) {
        s.mean_extra_hops = static_cast<double>(extra_total) / static_cast<double>(s.packets_with_loop);
    }
    return s;
}

double survival_fraction(std::span<const Trace> traces, std::size_t hops) {
    if (traces.empty()) return 0.0;
    std::size_t alive = 0;
    for (const Trace& tr : traces) alive += tr.size() > hops + 1 ? 1 : 0;
    return static_cast<double>(alive) / static_cast<double>(traces.size());
}

double max_row_l1(const ProbTable& a, const ProbTable& b) {
    if (a.routers() != b.routers()) throw ConfigError("snapshots of different networks");
    double worst = 0.0;
    for (std::size_t r = 0; r < a.routers(); ++r) {
        for (std::size_t d = 0; d < a.routers(); ++d) {
            const ProbRow& x = a.row(r, d);
            const ProbRow& y = b.row(r, d);
            if (x.size() != y.size()) throw ConfigError("snapshots of different networks");
            if (x.size() > 0) worst = std::max(worst, (x - y).lpNorm<1>());
        }
    }
    return worst;
}

std::optional<Ticks> convergence_time(std::span<const TableSnapshot> history, double delta, std::size_t window) {
    if (history.size() < 2) throw ConfigError("convergence needs at least two snapshots");
    const std::size_t n = history.size();
    const std::size_t w = std::clamp<std::size_t>(window, 1, n - 1);
    // settled[i]: drift across every window starting at or after i stays below delta.
    std::optional<std::size_t> first;
    for (std::size_t i = n; i-- > 0;) {
        const std::size_t j = std::min(i + w, n - 1);
        if (i < n - 1 && !(max_row_l1(history[i].table, history[j].table) < delta)) break;
        first = i;
    }
    if (!first || *first + w > n - 1) return std::nullopt;
    return history[*first].time;
}

Percentiles percentiles(std::vector<double>& samples) {
    Percentiles p;
    if (samples.empty()) return p;
    std::sort(samples.begin(), samples.end());
    auto rank = [&](double q) {
        const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(samples.size())));
        return samples[std::max<std::size_t>(k, 1) - 1];
    };
    p.p50 = rank(0.50);
    p.p90 = rank(0.90);
    p.p99 = rank(0.99);
    return p;
}

namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string to_json(const MetricsReport& r) {
    ordered_json j;
    j["protocol"] = r.protocol;
    j["seed"] = r.seed;
    j["duration_ms"] = r.duration_ms;
    j["events"] = r.events;
    j["event_log_hash"] = r.event_log_hash;
    j["coverage"] = {{"fraction", r.coverage.fraction()}, {"covered", r.coverage.covered}, {"total", r.coverage.total}};
    ordered_json curve = ordered_json::array();
    for (const auto& [ms, f] : r.coverage_curve) curve.push_back({ms, f});
    j["coverage_curve"] = curve;
    j["convergence_time_ms"] = r.convergence_time_ms ? ordered_json(*r.convergence_time_ms) : ordered_json("not converged");
    j["packets"] = {{"generated", r.packets_generated},
                    {"delivered", r.packets_delivered},
                    {"dropped", r.packets_dropped},
                    {"in_flight", r.packets_in_flight}};
    j["ants"] = {{"generated", r.ants_generated}, {"delivered", r.ants_delivered}, {"in_flight", r.ants_in_flight}};
    const MessageCounts& m = r.messages;
    j["messages"] = {{"data_hops", m.data_hops},
                     {"ant_hops", m.ant_hops},
                     {"backward_ant_hops", m.backward_ant_hops},
                     {"q_estimates", m.q_estimates},
                     {"dv_entries", m.dv_entries},
                     {"pv_entries", m.pv_entries},
                     {"lsa_originated", m.lsa_originated},
                     {"lsa_flood_traversals", m.lsa_flood_traversals},
                     {"negative_signals", m.negative_signals},
                     {"negative_rejected", m.negative_rejected},
                     {"rounds", m.rounds}};
    const Discards& d = r.discards;
    j["discards"] = {{"ants_budget", d.ants_budget},
                     {"ants_cycle", d.ants_cycle},
                     {"ants_negative", d.ants_negative},
                     {"ants_dead_link", d.ants_dead_link},
                     {"packets_ttl", d.packets_ttl},
                     {"packets_no_route", d.packets_no_route},
                     {"packets_dead_link", d.packets_dead_link}};
    j["loops"] = {{"packets_with_loop", r.loops.packets_with_loop},
                  {"loop_events", r.loops.loop_events},
                  {"mean_extra_hops", r.loops.mean_extra_hops},
                  {"max_loop_length", r.loops.max_loop_length}};
    ordered_json splits = ordered_json::object();
    for (const auto& [key, s] : r.splits) {
        splits[key] = {{"group_a", s.group_a},
                       {"group_b", s.group_b},
                       {"ratio", s.defined() ? ordered_json(*s.ratio()) : ordered_json("undefined")},
                       {"fraction_a", optional_number(s.fraction_a())}};
    }
    j["splits"] = splits;
    ordered_json delays = ordered_json::object();
    for (const auto& [dest, p] : r.delay_ms) {
        delays[std::to_string(dest)] = {{"p50", p.p50}, {"p90", p.p90}, {"p99", p.p99}};
    }
    j["delay_ms"] = delays;
    j["work"] = {{"added", r.work_added}, {"culled", r.work_culled}};
    return j.dump(2) + "\n";
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> columns = {
        "protocol",          "seed",           "duration_ms",        "events",
        "event_log_hash",    "coverage",       "coverage_covered",   "coverage_total",
        "convergence_ms",    "packets_generated", "packets_delivered", "packets_dropped",
        "packets_in_flight", "ants_generated", "ants_delivered",     "ants_in_flight",
        "msg_data_hops",     "msg_ant_hops",   "msg_backward_ant_hops", "msg_q_estimates",
        "msg_dv_entries",    "msg_pv_entries", "msg_lsa_originated", "msg_lsa_flood_traversals",
        "msg_negative_signals", "msg_negative_rejected", "rounds",   "drop_ants_budget",
        "drop_ants_cycle",   "drop_ants_negative", "drop_ants_dead_link", "drop_packets_ttl",
        "drop_packets_no_route", "drop_packets_dead_link", "loop_packets", "loop_events",
        "loop_mean_extra_hops", "loop_max_length", "work_added",     "work_culled",
    };
    return columns;
}

std::string to_csv(const MetricsReport& r) {
    const MessageCounts& m = r.messages;
    const Discards& d = r.discards;
    const std::vector<std::string> values = {
        r.protocol,
        std::to_string(r.seed),
        fixed(r.duration_ms),
        std::to_string(r.events),
        r.event_log_hash,
        fixed(r.coverage.fraction()),
        std::to_string(r.coverage.covered),
        std::to_string(r.coverage.total),
        r.convergence_time_ms ? fixed(*r.convergence_time_ms) : std::string("not_converged"),
        std::to_string(r.packets_generated),
        std::to_string(r.packets_delivered),
        std::to_string(r.packets_dropped),
        std::to_string(r.packets_in_flight),
        std::to_string(r.ants_generated),
        std::to_string(r.ants_delivered),
        std::to_string(r.ants_in_flight),
        std::to_string(m.data_hops),
        std::to_string(m.ant_hops),
        std::to_string(m.backward_ant_hops),
        std::to_string(m.q_estimates),
        std::to_string(m.dv_entries),
        std::to_string(m.pv_entries),
        std::to_string(m.lsa_originated),
        std::to_string(m.lsa_flood_traversals),
        std::to_string(m.negative_signals),
        std::to_string(m.negative_rejected),
        std::to_string(m.rounds),
        std::to_string(d.ants_budget),
        std::to_string(d.ants_cycle),
        std::to_string(d.ants_negative),
        std::to_string(d.ants_dead_link),
        std::to_string(d.packets_ttl),
        std::to_string(d.packets_no_route),
        std::to_string(d.packets_dead_link),
        std::to_string(r.loops.packets_with_loop),
        std::to_string(r.loops.loop_events),
        fixed(r.loops.mean_extra_hops),
        std::to_string(r.loops.max_loop_length),
        std::to_string(r.work_added),
        std::to_string(r.work_culled),
    };
    std::ostringstream out;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    out << '\n';
    return out.str();
}

}  // namespace reachsim
