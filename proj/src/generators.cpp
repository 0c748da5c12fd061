#include "reachsim/generators.hpp"

#include "reachsim/rng.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <string>
#include <vector>

namespace reachsim {

namespace {

// Generated routers name interfaces p0, p1, ... in local declaration order.
struct Builder {
    Topology t;
    std::vector<std::size_t> next_port;

    explicit Builder(std::size_t n) : next_port(n, 0) {
        for (std::size_t i = 0; i < n; ++i) t.add_router(static_cast<RouterId>(i));
    }

    void link(std::size_t a, std::size_t b, Cost ab, Cost ba) {
        t.add_link(static_cast<RouterId>(a), "p" + std::to_string(next_port[a]++), static_cast<RouterId>(b),
                   "p" + std::to_string(next_port[b]++), ab, ba);
    }
    void link(std::size_t a, std::size_t b, Cost c) { link(a, b, c, c); }
};

Topology linear_chain(const gen::LinearChain& s) {
    if (s.n < 1) throw ConfigError("linear_chain needs n >= 1");
    Builder b(s.n);
    for (std::size_t i = 0; i + 1 < s.n; ++i) b.link(i, i + 1, Cost::whole(1));
    return std::move(b.t);
}

Topology ring(const gen::Ring& s) {
    if (s.n < 3) throw ConfigError("ring needs n >= 3");
    Builder b(s.n);
    for (std::size_t i = 0; i < s.n; ++i) b.link(i, (i + 1) % s.n, Cost::whole(1));
    return std::move(b.t);
}

Topology complete(const gen::Complete& s) {
    if (s.n < 1) throw ConfigError("complete needs n >= 1");
    Builder b(s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
        for (std::size_t j = i + 1; j < s.n; ++j) b.link(i, j, Cost::whole(1));
    }
    return std::move(b.t);
}

// Layout: A=0, B=1, waypoints W1..W(k-1) = 2..k. Section j joins W(j) and
// W(j+1) through a mid router M carrying two halves of the section cost;
// M also anchors a dead-end triangle M-H-K-M whose links each cost a full
// section. The triangle lies on no loop-free A->B path but traps walkers.
Topology velcro(const gen::Velcro& s) {
    if (s.sections < 1 || s.direct_cost <= Cost{} || s.section_cost <= Cost{}) {
        throw ConfigError("velcro parameters must be strictly positive");
    }
    if (s.section_cost.units() % 2 != 0) {
        throw ConfigError("velcro section cost must split evenly into two link halves");
    }
    const std::size_t k = s.sections;
    const std::size_t waypoints = k - 1;
    const std::size_t n = 2 + waypoints + 3 * k;
    Builder b(n);
    b.link(velcro_nodes::A, velcro_nodes::B, s.direct_cost);
    auto waypoint = [&](std::size_t j) -> std::size_t {
        if (j == 0) return velcro_nodes::A;
        if (j == k) return velcro_nodes::B;
        return 1 + j;
    };
    const Cost half = Cost::from_units(s.section_cost.units() / 2);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t mid = 2 + waypoints + 3 * j;
        const std::size_t hook = mid + 1;
        const std::size_t knot = mid + 2;
        b.link(waypoint(j), mid, half);
        b.link(mid, waypoint(j + 1), half);
        b.link(mid, hook, s.section_cost);
        b.link(hook, knot, s.section_cost);
        b.link(knot, mid, s.section_cost);
    }
    return std::move(b.t);
}

// Interface names follow the link labels used in the negative-reinforcement
// narrative; both ends of a link share the label.
Topology neg_reinf(const gen::NegReinf& s) {
    using namespace neg_nodes;
    Topology t;
    auto add = [&t](std::size_t a, std::size_t b, const char* label) {
        t.add_link(static_cast<RouterId>(a), label, static_cast<RouterId>(b), label, Cost::whole(1), Cost::whole(1));
    };
    if (s.variant == gen::NegReinfVariant::left) {
        for (std::size_t i = 0; i < 3; ++i) t.add_router(static_cast<RouterId>(i));
        add(A, B, "i1");
        add(A, C, "i2");
        return t;
    }
    for (std::size_t i = 0; i < 5; ++i) t.add_router(static_cast<RouterId>(i));
    add(A, B, "i1");
    add(B, D, "i4");
    add(D, C, "i5");
    add(C, B, "i3");
    add(B, E, "i6");
    if (s.variant == gen::NegReinfVariant::right) add(A, C, "i7");
    return t;
}

Topology random_connected(const gen::RandomConnected& s) {
    if (s.n < 1) throw ConfigError("random_connected needs n >= 1");
    if (!(s.edge_prob > 0.0 && s.edge_prob <= 1.0)) throw ConfigError("edge_prob must lie in (0, 1]");
    if (s.cost_lo < 0 || s.cost_hi < s.cost_lo) throw ConfigError("bad cost range");
    Rng rng(s.seed);
    Builder b(s.n);
    std::set<std::pair<std::size_t, std::size_t>> linked;
    for (std::size_t v = 1; v < s.n; ++v) {
        const std::size_t u = rng.below(v);
        linked.emplace(u, v);
        b.link(u, v, Cost::whole(rng.between(s.cost_lo, s.cost_hi)));
    }
    for (std::size_t u = 0; u < s.n; ++u) {
        for (std::size_t v = u + 1; v < s.n; ++v) {
            const bool add = rng.bernoulli(s.edge_prob);
            const std::int64_t cost = rng.between(s.cost_lo, s.cost_hi);
            if (add && !linked.contains({u, v})) {
                linked.emplace(u, v);
                b.link(u, v, Cost::whole(cost));
            }
        }
    }
    return std::move(b.t);
}

template <class... F>
struct Overloaded : F... {
    using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

std::vector<std::string_view> split_args(std::string_view s) {
    std::vector<std::string_view> out;
    if (s.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = s.find(',', pos);
        out.push_back(s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view tok, std::string_view what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError("bad " + std::string(what) + " '" + std::string(tok) + "'");
    }
    return value;
}

}  // namespace

Topology generate(const GeneratorSpec& spec) {
    return std::visit(Overloaded{
                          [](const gen::LinearChain& s) { return linear_chain(s); },
                          [](const gen::Ring& s) { return ring(s); },
                          [](const gen::Complete& s) { return complete(s); },
                          [](const gen::Velcro& s) { return velcro(s); },
                          [](const gen::NegReinf& s) { return neg_reinf(s); },
                          [](const gen::RandomConnected& s) { return random_connected(s); },
                      },
                      spec);
}

GeneratorSpec parse_generator_spec(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    const auto args = split_args(colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1));
    auto expect = [&](std::size_t n) {
        if (args.size() != n) {
            throw ParseError("generator '" + std::string(kind) + "' takes " + std::to_string(n) + " argument(s)");
        }
    };
    auto count = [&](std::size_t i) { return parse_number<std::size_t>(args[i], "count"); };

    auto positive = [&](std::size_t i) {
        const auto n = count(i);
        if (n < 1) throw ConfigError(std::string(kind) + " needs n >= 1");
        return n;
    };

    if (kind == "linear_chain") {
        expect(1);
        return gen::LinearChain{positive(0)};
    }
    if (kind == "ring") {
        expect(1);
        const auto n = count(0);
        if (n < 3) throw ConfigError("ring needs n >= 3");
        return gen::Ring{n};
    }
    if (kind == "complete") {
        expect(1);
        return gen::Complete{positive(0)};
    }
    if (kind == "velcro") {
        expect(3);
        gen::Velcro v{Cost::parse(args[0]), count(1), Cost::parse(args[2])};
        generate(v);  // validates parameters
        return v;
    }
    if (kind == "neg_reinf_left") {
        expect(0);
        return gen::NegReinf{gen::NegReinfVariant::left};
    }
    if (kind == "neg_reinf_middle") {
        expect(0);
        return gen::NegReinf{gen::NegReinfVariant::middle};
    }
    if (kind == "neg_reinf_right") {
        expect(0);
        return gen::NegReinf{gen::NegReinfVariant::right};
    }
    if (kind == "random_connected") {
        expect(5);
        gen::RandomConnected r{count(0), parse_number<double>(args[1], "edge probability"),
                               parse_number<std::int64_t>(args[2], "cost"), parse_number<std::int64_t>(args[3], "cost"),
                               parse_number<std::uint64_t>(args[4], "seed")};
        if (!(r.edge_prob > 0.0 && r.edge_prob <= 1.0)) throw ConfigError("edge_prob must lie in (0, 1]");
        return r;
    }
    throw ParseError("unknown generator '" + std::string(kind) + "'");
}

}  // namespace reachsim
