// Acceptance checks, one PASS/FAIL line per criterion.
//
//   reachsim_acceptance        run all of them
//   reachsim_acceptance 7      run criterion 7 only

#include "reachsim/deterministic.hpp"
#include "reachsim/generators.hpp"
#include "reachsim/metrics.hpp"
#include "reachsim/rl.hpp"
#include "reachsim/sim.hpp"

#include "corpus.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace reachsim;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

// Fingerprints of everything a criterion computed, for the replay check.
std::vector<std::string>* g_log = nullptr;

void note(std::string s) {
    if (g_log) g_log->push_back(std::move(s));
}

void note_engine(const Engine& e) {
    note(e.event_log_hash() + "\n" + to_json(e.report()) + "\n" + dump_table(e.topology(), e.effective_table()));
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Probability mass router r puts on interfaces leading to neighbor v.
double mass_toward(const Topology& t, const ProbRow& row, std::size_t r, std::size_t v) {
    double m = 0.0;
    const auto ports = t.ports(r);
    for (std::size_t k = 0; k < ports.size(); ++k) {
        if (ports[k].peer == v) m += row(ix(k));
    }
    return m;
}

std::size_t port_to(const Topology& t, std::size_t r, std::size_t v) {
    const auto ports = t.ports(r);
    for (std::size_t k = 0; k < ports.size(); ++k) {
        if (ports[k].peer == v) return k;
    }
    throw std::logic_error("no such neighbor");
}

const Cost kNoBound = Cost::whole(1'000'000);

// ---------------------------------------------------------------------------

Result oracle_equivalence() {
    std::size_t mismatches = 0, checked = 0;
    for (const auto& spec : corpus::random_specs()) {
        const Topology t = generate(spec);
        const Eigen::MatrixXd dist = oracle::all_pairs(t);
        const DvResult dv = run_distance_vector(t, kNoBound);
        const LinkStateResult ls = run_link_state(t);
        const PathVectorResult pv = run_path_vector(t);
        const DetTables pv_hops = path_vector_next_hops(t, pv.table);
        if (!dv.converged || !pv.converged) ++mismatches;

        std::ostringstream fp;
        for (const DetTables* tables : {&dv.tables, &ls.tables, &pv_hops}) {
            for (std::size_t r = 0; r < t.size(); ++r) {
                for (std::size_t d = 0; d < t.size(); ++d) {
                    if (r == d) continue;
                    ++checked;
                    const auto& e = (*tables)[r].entries[d];
                    if (!e) {
                        ++mismatches;
                        continue;
                    }
                    fp << e->port << ':' << e->cost.units() << ' ';
                    const Port& out = t.port(r, e->port);
                    const double want = dist(ix(r), ix(d));
                    const double via = static_cast<double>(out.cost_out.units()) + dist(ix(out.peer), ix(d));
                    if (static_cast<double>(e->cost.units()) != want || via != want) ++mismatches;
                }
            }
        }
        note(fp.str());
    }
    return {mismatches == 0, std::to_string(checked) + " entries over 200 topologies, " + std::to_string(mismatches) +
                                 " differ from the all-pairs oracle"};
}

Result dv_round_bound() {
    std::size_t over = 0, worst_excess = 0, over_hops = 0;
    for (const auto& spec : corpus::random_specs()) {
        const Topology t = generate(spec);
        const DvResult dv = run_distance_vector(t, kNoBound);
        const std::size_t diam = oracle::hop_diameter(t);
        note(std::to_string(dv.rounds_used));
        if (dv.converged && dv.rounds_used <= diam) continue;
        ++over;
        worst_excess = std::max(worst_excess, dv.rounds_used - std::min(dv.rounds_used, diam));
        // Rounds still fit the hop count of the chosen least-cost paths.
        std::size_t longest = 0;
        for (std::size_t r = 0; r < t.size(); ++r) {
            for (std::size_t d = 0; d < t.size(); ++d) {
                std::size_t hops = 0;
                for (std::size_t at = r; at != d; ++hops) at = t.port(at, dv.tables[at].entries[d]->port).peer;
                longest = std::max(longest, hops);
            }
        }
        if (dv.rounds_used > longest) ++over_hops;
    }
    return {over == 0, std::to_string(over) + " of 200 topologies need more rounds than the hop diameter (worst by " +
                           std::to_string(worst_excess) + "); " + std::to_string(over_hops) +
                           " need more than the hop length of their least-cost paths"};
}

Result count_to_infinity() {
    const Topology chain = generate(gen::LinearChain{4});
    const FailureTrace dv = simulate_count_to_infinity(chain, 3, Cost::whole(16));
    note(trace_csv(chain, dv, 3));
    bool ok = dv.settled;
    std::string detail;
    for (std::size_t router : {std::size_t{1}, std::size_t{2}}) {
        std::vector<std::int64_t> changes;
        for (const TraceRow& row : dv.rows) {
            if (row.router != router || !row.cost) continue;
            const std::int64_t c = row.cost->units() / Cost::kScale;
            if (changes.empty() || changes.back() != c) changes.push_back(c);
        }
        for (std::size_t i = 1; i < changes.size(); ++i) ok = ok && changes[i] > changes[i - 1];
        ok = ok && !changes.empty() && changes.back() == 16;
        detail += std::string(router == 1 ? "B" : "C") + ":";
        for (auto c : changes) detail += " " + std::to_string(c);
        detail += "; ";
    }

    const FailureTrace pv = simulate_path_vector_withdrawal(chain, 3);
    note(trace_csv(chain, pv, 3));
    const Eigen::MatrixXd before = oracle::all_pairs(chain);
    bool counted = false;
    for (const TraceRow& row : pv.rows) {
        if (row.cost && static_cast<double>(row.cost->units()) != before(ix(row.router), 3)) counted = true;
    }
    const std::size_t diam = diameter(chain);
    ok = ok && pv.settled && pv.rounds <= diam && !counted;
    detail += "DV " + std::to_string(dv.rounds) + " rounds; path vector withdraws in " + std::to_string(pv.rounds) +
              " rounds (diameter " + std::to_string(diam) + ")" + (counted ? " but counted" : " without counting");
    return {ok, detail};
}

Result update_algebra() {
    Rng rng(424242);
    std::size_t bad = 0;
    double worst_sum = 0.0, worst_identity = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const auto n = static_cast<Eigen::Index>(1 + rng.below(8));
        ProbRow row(n);
        for (Eigen::Index k = 0; k < n; ++k) row(k) = rng.bernoulli(0.2) ? 0.0 : rng.uniform();
        if (row.sum() == 0.0) row(0) = 1.0;
        row /= row.sum();
        const std::size_t k = rng.below(static_cast<std::size_t>(n));
        const double delta = 1e-6 + 2.0 * rng.uniform();
        const ProbRow out = ant_prob_update(row, k, delta);
        worst_sum = std::max(worst_sum, std::abs(out.sum() - 1.0));
        if (std::abs(out.sum() - 1.0) > 1e-9 || (out.array() < 0.0).any() || out(ix(k)) < row(ix(k))) ++bad;

        const double old = 100.0 * rng.uniform();
        const double best = 50.0 * rng.uniform();
        const double zeta = 50.0 * rng.uniform();
        const double eta = 1e-3 + (1.0 - 1e-3) * rng.uniform();
        const double target = zeta + best;
        const double q = q_update(old, best, zeta, eta);
        const double gap = std::abs(std::abs(q - target) - (1.0 - eta) * std::abs(old - target));
        worst_identity = std::max(worst_identity, gap);
        if (gap > 1e-9) ++bad;
    }
    note(fmt("%.17g", worst_sum) + fmt(" %.17g", worst_identity));
    return {bad == 0, "100000 cases, " + std::to_string(bad) + " violations; max |sum-1| " +
                          fmt("%.2e", worst_sum) + ", max identity gap " + fmt("%.2e", worst_identity)};
}

Result soft_reachability() {
    std::size_t runs = 0, full = 0;
    double worst = 1.0;
    for (const auto& spec : corpus::random_specs()) {
        if (spec.n > 6) continue;
        ScenarioConfig c;  // default config: uniform ants
        c.ant_count = 10000;
        c.duration_ms = 12000.0;
        Engine e(c, generate(spec));
        e.run();
        note_engine(e);
        const Coverage cov = reachability_coverage(e.prob_table(), e.topology(), 1e-3);
        ++runs;
        if (cov.covered == cov.total && e.report().ants_generated == 10000) ++full;
        worst = std::min(worst, cov.fraction());
    }
    return {runs > 0 && full == runs, std::to_string(full) + " of " + std::to_string(runs) +
                                          " topologies with n <= 6 at coverage 1.0 (worst " + fmt("%.4f", worst) +
                                          ")"};
}

// Smallest shortest-path first-hop mass over all router/destination pairs.
double regular_ant_run(const Topology& t, std::uint64_t seed, double duration_ms) {
    ScenarioConfig c;
    c.ant_mix = 0.0;
    c.ant_rate = 10.0;
    c.duration_ms = duration_ms;
    c.snapshot_interval_ms = duration_ms / 20.0;
    c.seed = seed;
    Engine e(c, t);
    e.run();
    note_engine(e);
    double worst = 1.0;
    for (std::size_t r = 0; r < t.size(); ++r) {
        for (std::size_t d = 0; d < t.size(); ++d) {
            if (r == d) continue;
            const std::size_t v = oracle::unique_first_hop(t, r, d);
            worst = std::min(worst, mass_toward(t, e.prob_table().row(r, d), r, v));
        }
    }
    return worst;
}

Result regular_convergence() {
    std::string detail;
    bool ok = true;
    const double chain = regular_ant_run(generate(gen::LinearChain{5}), 11, 20000.0);
    ok = ok && chain >= 0.95;
    detail += "linear_chain(5) min mass " + fmt("%.4f", chain);

    std::size_t instances = 0, passed = 0;
    double worst = 1.0;
    for (const auto& spec : corpus::random_specs()) {
        const Topology t = generate(spec);
        if (t.size() < 3) continue;
        bool unique = true;
        for (std::size_t r = 0; r < t.size() && unique; ++r) {
            for (std::size_t d = 0; d < t.size() && unique; ++d) {
                if (r != d && oracle::unique_first_hop(t, r, d) == static_cast<std::size_t>(-1)) unique = false;
            }
        }
        if (!unique) continue;
        ++instances;
        const double m = regular_ant_run(t, 100 + instances, 80000.0);
        worst = std::min(worst, m);
        if (m >= 0.95) ++passed;
    }
    ok = ok && instances > 0 && passed == instances;
    detail += "; " + std::to_string(passed) + " of " + std::to_string(instances) +
              " unique-shortest-path corpus instances, worst " + fmt("%.4f", worst);
    return {ok, detail};
}

// A-X-B costs 5+5, A-Y-B costs 7+7; Y's links later drop to 3+3.
struct TwoPaths {
    static constexpr std::size_t A = 0, B = 1, X = 2, Y = 3;
    Topology t;
    TwoPaths() {
        for (RouterId i = 0; i < 4; ++i) t.add_router(i);
        t.add_link(A, "x", X, "a", Cost::whole(5), Cost::whole(5));
        t.add_link(X, "b", B, "x", Cost::whole(5), Cost::whole(5));
        t.add_link(A, "y", Y, "a", Cost::whole(7), Cost::whole(7));
        t.add_link(Y, "b", B, "y", Cost::whole(7), Cost::whole(7));
    }
    static std::vector<TopologyAction> improve(double at_ms) {
        std::vector<TopologyAction> out;
        for (const char* iface : {"a", "b"}) {
            TopologyAction a;
            a.at_ms = at_ms;
            a.kind = TopologyAction::Kind::set_cost;
            a.router = Y;
            a.iface = iface;
            a.cost_out = Cost::whole(3);
            a.cost_in = Cost::whole(3);
            out.push_back(a);
        }
        return out;
    }
};

Result q_routing_pathology() {
    const TwoPaths g;
    const double warmup = 1000.0, episodes = 10000.0;
    std::string detail;

    // Q-routing: one A->B packet per ms, costs improve after the warm-up.
    ScenarioConfig q;
    q.protocol = Protocol::q_routing;
    q.duration_ms = warmup + episodes + 100.0;
    q.actions = TwoPaths::improve(warmup - 0.5);
    q.seed = 3;
    Engine qe(q, g.t);
    for (int i = 0; i < static_cast<int>(warmup + episodes); ++i) qe.inject_packet(TwoPaths::A, TwoPaths::B, ms_to_ticks(i));
    qe.run_until(ms_to_ticks(warmup - 1.0));
    auto argmax_port = [&] {
        const Eigen::VectorXd& row = qe.q_table().row(TwoPaths::A, TwoPaths::B);
        Eigen::Index best = 0;
        row.minCoeff(&best);
        return static_cast<std::size_t>(best);
    };
    const std::size_t via_x = port_to(g.t, TwoPaths::A, TwoPaths::X);
    const std::size_t before = argmax_port();
    qe.run();
    note_engine(qe);
    const std::size_t after = argmax_port();
    std::size_t later = 0, later_via_y = 0;
    for (const Packet& p : qe.packets()) {
        if (p.created_at < ms_to_ticks(warmup) || !p.delivered_at) continue;
        ++later;
        later_via_y += p.trace.size() > 1 && p.trace[1] == TwoPaths::Y ? 1 : 0;
    }
    const bool stuck = before == via_x && after == via_x && later_via_y == 0 && later >= 9900;
    detail += "Q-routing stays on the cost-10 path (" + std::to_string(later_via_y) + " of " + std::to_string(later) +
              " later packets use the improved path)";

    // Uniform ants: mass at A toward B on the improved first hop.
    ScenarioConfig a;
    a.protocol = Protocol::ants;
    a.ant_mix = 1.0;
    a.ant_rate = 1.0;
    a.cost_fn = CostFunction::parse("power:4", 10.0);
    a.ant_destinations = {{static_cast<RouterId>(TwoPaths::A), 1.0}, {static_cast<RouterId>(TwoPaths::B), 1.0}};
    a.duration_ms = 2.0 * episodes;
    a.actions = TwoPaths::improve(episodes);
    a.seed = 5;
    Engine ae(a, g.t);
    const std::size_t via_y = port_to(g.t, TwoPaths::A, TwoPaths::Y);
    ae.run_until(ms_to_ticks(episodes));
    const double mass_before = ae.prob_table().row(TwoPaths::A, TwoPaths::B)(ix(via_y));
    ae.run();
    note_engine(ae);
    const double mass_after = ae.prob_table().row(TwoPaths::A, TwoPaths::B)(ix(via_y));
    const bool shifted = mass_after - mass_before >= 0.5;
    detail += "; uniform ants move the improved first hop from " + fmt("%.3f", mass_before) + " to " +
              fmt("%.3f", mass_after);
    return {stuck && shifted, detail};
}

Result loop_decay() {
    // ring(5) plus an exit router X wired to every ring router.
    const std::size_t m = 5, exit = 5;
    Topology t = generate(gen::Ring{m});
    t.add_router(static_cast<RouterId>(exit));
    for (std::size_t r = 0; r < m; ++r) {
        t.add_link(t.id(r), "x", static_cast<RouterId>(exit), "r" + std::to_string(r), Cost::whole(1), Cost::whole(1));
    }
    const double q = 0.2;
    const std::size_t packets = 20000, n = 25;

    ScenarioConfig c;
    c.ant_rate = 0.0;
    c.forward_policy = ForwardPolicy::proportional;
    c.data_hop_budget = 10000;
    c.duration_ms = static_cast<double>(packets) + 1000.0;
    c.seed = 8;
    Engine e(c, t);
    for (std::size_t r = 0; r < m; ++r) {
        ProbRow row = ProbRow::Constant(ix(t.ports(r).size()), (1.0 - q) / 2.0);
        row(ix(port_to(t, r, exit))) = q;
        e.prob_table().row(r, exit) = row;
    }
    Rng pick(9);
    for (std::size_t i = 0; i < packets; ++i) e.inject_packet(pick.below(m), exit, ms_to_ticks(static_cast<double>(i)));
    e.run();
    note_engine(e);

    std::vector<Trace> traces;
    for (const Packet& p : e.packets()) traces.push_back(p.trace);
    const double survival = survival_fraction(traces, n);
    const double envelope = std::pow(1.0 - q, static_cast<double>(n / m));
    const double sigma = std::sqrt(envelope * (1.0 - envelope) / static_cast<double>(packets));
    const double geometric = std::pow(1.0 - q, static_cast<double>(n));
    const bool ok = survival <= envelope + 3.0 * sigma && e.report().packets_delivered == packets;
    return {ok, "survival after 25 hops " + fmt("%.5f", survival) + " vs envelope " + fmt("%.5f", envelope) +
                    " + 3 sigma " + fmt("%.5f", 3.0 * sigma) + " (per-hop geometric " + fmt("%.5f", geometric) + ")"};
}

Result negative_ladder() {
    using namespace neg_nodes;
    using L = NegQualifier;
    const Topology left = generate(gen::NegReinf{gen::NegReinfVariant::left});
    const Topology middle = generate(gen::NegReinf{gen::NegReinfVariant::middle});
    const Topology right = generate(gen::NegReinf{gen::NegReinfVariant::right});
    auto port = [](const Topology& t, std::size_t r, const char* name) { return *t.find_port(r, name); };

    // Left: an ant for B wanders A -> C, a leaf.
    const Ant to_leaf{A, B, Cost{}, AntMode::uniform, false, true, {{A, Cost{}, port(left, A, "i2")}}, 8};
    // Middle and right: an ant for E walks <A,i1>, <B,i4>, <D,i5>, <C,i3> back into B.
    auto cycle = [&](const Topology& t) {
        return Ant{A, E, Cost{}, AntMode::uniform, false, true,
                   {{A, Cost{}, port(t, A, "i1")},
                    {B, Cost::whole(1), port(t, B, "i4")},
                    {D, Cost::whole(2), port(t, D, "i5")},
                    {C, Cost::whole(3), port(t, C, "i3")}},
                   8};
    };
    const auto sl = detect_negative_signal(left, to_leaf, C);
    const auto sm = detect_negative_signal(middle, cycle(middle), B);
    const auto sr = detect_negative_signal(right, cycle(right), B);
    if (!sl || !sm || !sr) return {false, "a narrative walk produced no negative signal"};

    struct Expect {
        const Topology* t;
        const NegativeSignal* s;
        L level;
        bool false_negative;
        const char* what;
    };
    const std::vector<Expect> ladder = {
        {&left, &*sl, L::destination_only, false, "destination_only/left"},
        {&middle, &*sm, L::destination_only, true, "destination_only/middle"},
        {&middle, &*sm, L::source_destination, false, "source_destination/middle"},
        {&right, &*sr, L::source_destination, true, "source_destination/right"},
        {&left, &*sl, L::source_destination_incoming_link, false, "incoming/left"},
        {&middle, &*sm, L::source_destination_incoming_link, false, "incoming/middle"},
        {&right, &*sr, L::source_destination_incoming_link, false, "incoming/right"},
    };
    bool ok = true;
    std::string wrong;
    for (const Expect& x : ladder) {
        if (is_false_negative(*x.t, *x.s, x.level) != x.false_negative) {
            ok = false;
            wrong += std::string(" ") + x.what;
        }
    }

    // Census of the signals uniform walks raise. The incoming link does not
    // pin down the whole predecessor path, so walks outside the narrative can
    // still hit false negatives; the count is reported, not judged.
    Rng rng(77);
    std::size_t signals = 0, false_negatives = 0;
    for (const Topology* t : {&left, &middle, &right}) {
        for (int w = 0; w < 20000; ++w) {
            Ant ant;
            ant.source = rng.below(t->size());
            ant.destination = rng.below(t->size() - 1);
            if (ant.destination >= ant.source) ++ant.destination;
            ant.record_path = true;
            std::size_t at = ant.source;
            for (int hop = 0; hop < 16 && at != ant.destination; ++hop) {
                const std::size_t k = rng.below(t->ports(at).size());
                ant.stack.push_back({at, ant.cost, k});
                const Port& out = t->port(at, k);
                ant.cost = ant.cost + out.cost_out;
                at = out.peer;
                if (const auto s = detect_negative_signal(*t, ant, at)) {
                    ++signals;
                    if (is_false_negative(*t, *s, L::source_destination_incoming_link)) ++false_negatives;
                    break;
                }
            }
        }
    }
    note(std::to_string(signals) + " " + std::to_string(false_negatives));
    return {ok, (wrong.empty() ? std::string("all 7 narrative outcomes match") : "ladder differs at" + wrong) +
                    "; census: " + std::to_string(false_negatives) + " of " + std::to_string(signals) +
                    " random-walk signals are incoming-link false negatives"};
}

// Fraction of delivered A->B packets that took the direct link.
double velcro_direct_fraction(double mix, std::uint64_t seed) {
    ScenarioConfig c;
    c.protocol = Protocol::ants;
    c.ant_mix = mix;
    c.ant_rate = 5.0;
    c.ant_destinations = {{static_cast<RouterId>(velcro_nodes::A), 1.0}, {static_cast<RouterId>(velcro_nodes::B), 1.0}};
    c.traffic = {{static_cast<RouterId>(velcro_nodes::A), static_cast<RouterId>(velcro_nodes::B), 1.0}};
    c.split_pairs = {{static_cast<RouterId>(velcro_nodes::A), static_cast<RouterId>(velcro_nodes::B)}};
    c.duration_ms = 4000.0;
    c.snapshot_interval_ms = 100.0;
    c.seed = seed;
    Engine e(c, generate(gen::Velcro{Cost::whole(10), 5, Cost::whole(2)}));
    e.run();
    note_engine(e);
    // Traffic from the second half of the run, once the tables have settled.
    std::vector<Trace> late;
    for (const Packet& p : e.packets()) {
        if (p.delivered_at && p.created_at >= ms_to_ticks(c.duration_ms / 2.0)) late.push_back(p.trace);
    }
    const SplitRatio s =
        split_ratio(late, [](const Trace& tr) { return is_direct(tr, velcro_nodes::A, velcro_nodes::B); });
    return s.fraction_a().value_or(-1.0);
}

Result velcro_split() {
    // Regression lock for the mixed run at its seed.
    constexpr double kLockedMixed = 0.95470211718365339;
    const double regular = velcro_direct_fraction(0.0, 21);
    const double uniform = velcro_direct_fraction(1.0, 21);
    const double mixed = velcro_direct_fraction(0.5, 21);
    // Both classes cost 10, so a cost-proportional split is even.
    const double proportional = 0.5;
    const bool concentrated = regular >= 0.9 || regular <= 0.1;
    const bool uniform_off = uniform - proportional > 0.1;
    const double lo = std::min(regular, uniform), hi = std::max(regular, uniform);
    const bool between = mixed > lo && mixed < hi;
    const bool locked = std::abs(mixed - kLockedMixed) < 1e-12;
    return {concentrated && uniform_off && between && locked,
            "direct fraction: regular " + fmt("%.4f", regular) + ", uniform " + fmt("%.4f", uniform) + ", mix 0.5 " +
                fmt("%.4f", mixed) + fmt(" (locked %.4f)", kLockedMixed)};
}

Result complexity_accounting() {
    std::size_t bad = 0;
    for (const auto& spec : corpus::random_specs()) {
        const Topology t = generate(spec);
        const std::size_t routers = t.size();
        std::size_t expected = 0;
        for (std::size_t r = 0; r < routers; ++r) expected += t.degree(r) * (routers - 1);
        const DvResult dv = run_distance_vector(t, kNoBound);
        for (std::size_t m : dv.per_round_messages) bad += m != expected ? 1 : 0;
        const LinkStateResult ls = run_link_state(t);
        if (ls.flood_link_traversals > routers * t.link_count() || ls.message_count != routers) ++bad;
        note(std::to_string(expected) + " " + std::to_string(ls.flood_link_traversals));
    }
    return {bad == 0, std::to_string(bad) + " accounting mismatches over 200 topologies"};
}

using Criterion = std::function<Result()>;

const std::vector<std::pair<const char*, Criterion>>& criteria() {
    static const std::vector<std::pair<const char*, Criterion>> list = {
        {"oracle equivalence", oracle_equivalence},
        {"distance-vector round bound", dv_round_bound},
        {"count to infinity", count_to_infinity},
        {"ant and Q update algebra", update_algebra},
        {"soft reachability", soft_reachability},
        {"regular-ant convergence", regular_convergence},
        {"Q-routing pathology", q_routing_pathology},
        {"loop decay", loop_decay},
        {"negative reinforcement ladder", negative_ladder},
        {"velcro split", velcro_split},
        {"complexity accounting", complexity_accounting},
    };
    return list;
}

Result determinism() {
    std::vector<std::string> first, second;
    for (auto* log : {&first, &second}) {
        g_log = log;
        for (const auto& [name, run] : criteria()) run();
        g_log = nullptr;
    }
    std::size_t differ = 0;
    for (std::size_t i = 0; i < std::min(first.size(), second.size()); ++i) differ += first[i] != second[i] ? 1 : 0;
    const bool ok = first.size() == second.size() && differ == 0 && !first.empty();
    return {ok, std::to_string(first.size()) + " recorded results replayed, " + std::to_string(differ) + " differ"};
}

bool report(int n, const char* name, const Criterion& run) {
    const auto t0 = std::chrono::steady_clock::now();
    const Result r = run();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s: %s [%.1fs]\n", n, r.pass ? "PASS" : "FAIL", name, r.detail.c_str(), s);
    std::fflush(stdout);
    return r.pass;
}

}  // namespace

int main(int argc, char** argv) {
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    if (argc > 1 && (only < 1 || only > 12)) {
        std::fprintf(stderr, "usage: %s [1-12]\n", argv[0]);
        return 2;
    }
    bool all = true;
    for (std::size_t i = 0; i < criteria().size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        if (only == 0 || only == n) all = report(n, criteria()[i].first, criteria()[i].second) && all;
    }
    if (only == 0 || only == 12) all = report(12, "determinism", determinism) && all;
    return all ? 0 : 1;
}
