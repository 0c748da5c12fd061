#include "oracles.hpp"

#include "reachsim/generators.hpp"

#include <doctest.h>

using namespace reachsim;

TEST_CASE("linear_chain(4) is a unit-cost chain") {
    const Topology t = generate(gen::LinearChain{4});
    CHECK(t.size() == 4);
    CHECK(t.link_count() == 3);
    for (const Link& l : t.links()) {
        CHECK(l.cost_ab == Cost::whole(1));
        CHECK(l.cost_ba == Cost::whole(1));
        CHECK(l.b == l.a + 1);
    }
}

TEST_CASE("complete(1) has one router and no links") {
    const Topology t = generate(gen::Complete{1});
    CHECK(t.size() == 1);
    CHECK(t.link_count() == 0);
}

TEST_CASE("ring and complete shapes") {
    const Topology r = generate(gen::Ring{5});
    CHECK(r.link_count() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(r.degree(i) == 2);
    const Topology c = generate(gen::Complete{5});
    CHECK(c.link_count() == 10);
    CHECK_THROWS(parse_generator_spec("ring:1"));
    CHECK_THROWS(parse_generator_spec("ring:2"));
}

TEST_CASE("velcro: one direct link, loopy region with matching shortest cost") {
    for (auto [direct, k, c] : {std::tuple{10, 1, 10}, std::tuple{10, 5, 2}, std::tuple{20, 2, 10}}) {
        CAPTURE(k);
        const Topology t = generate(gen::Velcro{Cost::whole(direct), static_cast<std::size_t>(k), Cost::whole(c)});
        const std::size_t a = velcro_nodes::A, b = velcro_nodes::B;
        std::size_t direct_links = 0;
        for (const Port& p : t.ports(a)) {
            if (p.peer == b) {
                ++direct_links;
                CHECK(p.cost_out == Cost::whole(direct));
            }
        }
        CHECK(direct_links == 1);

        // Shortest A->B once the direct link is gone.
        Topology without;
        for (std::size_t i = 0; i < t.size(); ++i) without.add_router(t.id(i));
        for (const Link& l : t.links()) {
            const bool is_direct = (t.index(l.a) == a && t.index(l.b) == b) || (t.index(l.a) == b && t.index(l.b) == a);
            if (!is_direct) without.add_link(l.a, l.a_iface, l.b, l.b_iface, l.cost_ab, l.cost_ba);
        }
        const auto dist = oracle::all_pairs(without);
        CHECK(dist(0, 1) == static_cast<double>(Cost::whole(k * c).units()));
        // One cycle per section hangs off the detour.
        CHECK(without.link_count() - without.size() + 1 == static_cast<std::size_t>(k));
        CHECK(oracle::simple_paths(t, a, b).size() == 2);
    }
    CHECK_THROWS(parse_generator_spec("velcro:10,0,2"));
    CHECK_THROWS(parse_generator_spec("velcro:0,1,2"));
}

TEST_CASE("velcro spec string from the CLI example") {
    const Topology t = generate(parse_generator_spec("velcro:10,5,2"));
    CHECK(oracle::all_pairs(t)(0, 1) == 10000.0);
}

TEST_CASE("neg_reinf topologies") {
    using namespace neg_nodes;
    const Topology left = generate(gen::NegReinf{gen::NegReinfVariant::left});
    CHECK(left.degree(C) == 1);  // leaf reachable from the path node A
    CHECK(left.port(C, 0).peer == A);

    const Topology middle = generate(gen::NegReinf{gen::NegReinfVariant::middle});
    // Traversal <A,i1>, <B,i4>, <D,i5>, <C,i3> exists.
    auto hop = [](const Topology& t, std::size_t from, const char* iface) {
        const auto p = t.find_port(from, iface);
        REQUIRE(p);
        return t.port(from, *p).peer;
    };
    CHECK(hop(middle, A, "i1") == B);
    CHECK(hop(middle, B, "i4") == D);
    CHECK(hop(middle, D, "i5") == C);
    CHECK(hop(middle, C, "i3") == B);

    const Topology right = generate(gen::NegReinf{gen::NegReinfVariant::right});
    CHECK(right.link_count() == middle.link_count() + 1);
    CHECK(right.degree(C) == middle.degree(C) + 1);
}

TEST_CASE("random_connected is connected and a pure function of its spec") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const gen::RandomConnected s{1 + seed % 12, 0.3, 1, 9, seed};
        const Topology a = generate(s);
        CHECK(a == generate(s));
        CHECK(is_connected(a));
        for (const Link& l : a.links()) {
            CHECK(l.cost_ab >= Cost::whole(1));
            CHECK(l.cost_ab <= Cost::whole(9));
        }
    }
    CHECK_THROWS(parse_generator_spec("random_connected:5,0,1,2,3"));
    CHECK_THROWS(parse_generator_spec("bogus:3"));
    CHECK_THROWS(parse_generator_spec("linear_chain:0"));
}
