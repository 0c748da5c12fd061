#include "reachsim/generators.hpp"
#include "reachsim/tables.hpp"

#include <doctest.h>

#include <array>

using namespace reachsim;

TEST_CASE("init_uniform") {
    const Topology chain = generate(gen::LinearChain{3});
    const auto end_rows = init_uniform(chain, 0);
    CHECK(end_rows[1] == ProbRow::Constant(1, 1.0));
    CHECK(end_rows[0].size() == 0);

    const Topology c5 = generate(gen::Complete{5});
    for (const ProbRow& row : init_uniform(c5, 2)) {
        if (row.size() == 0) continue;
        CHECK(row == ProbRow::Constant(4, 0.25));
        CHECK(row.sum() == 1.0);
    }
    const Topology lonely = load_topology("node 0\nnode 1\n");
    CHECK_THROWS_AS(init_uniform(lonely, 0), TopologyError);
}

TEST_CASE("choose_interface") {
    Rng rng(5);
    SUBCASE("argmax picks the lowest-index maximum") {
        CHECK(choose_interface(ProbRow{{0.2, 0.8}}, ForwardPolicy::argmax, rng) == 1);
        CHECK(choose_interface(ProbRow{{0.4, 0.2, 0.4}}, ForwardPolicy::argmax, rng) == 0);
        const std::array<std::size_t, 1> ex{0};
        CHECK(choose_interface(ProbRow{{0.4, 0.2, 0.4}}, ForwardPolicy::argmax, rng, ex) == 2);
    }
    SUBCASE("proportional frequency") {
        std::size_t zeros = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) zeros += choose_interface(ProbRow{{0.5, 0.5}}, ForwardPolicy::proportional, rng) == 0;
        CHECK(static_cast<double>(zeros) / n == doctest::Approx(0.5).epsilon(0.02));
        CHECK(std::abs(static_cast<double>(zeros) / n - 0.5) <= 0.01);
    }
    SUBCASE("uniform ignores the row") {
        std::size_t zeros = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) zeros += choose_interface(ProbRow{{1.0, 0.0}}, ForwardPolicy::uniform, rng) == 0;
        CHECK(std::abs(static_cast<double>(zeros) / n - 0.5) <= 0.01);
    }
    SUBCASE("proportional renormalizes over allowed entries") {
        const std::array<std::size_t, 1> ex{1};
        for (int i = 0; i < 1000; ++i) {
            const auto k = choose_interface(ProbRow{{0.1, 0.8, 0.1}}, ForwardPolicy::proportional, rng, ex);
            CHECK(k != 1);
        }
    }
    SUBCASE("deflection") {
        CHECK(choose_interface(ProbRow{{0.1, 0.9}}, ForwardPolicy::deflection, rng) == 1);
        const std::array<std::size_t, 1> busy{1};
        for (int i = 0; i < 100; ++i) {
            CHECK(choose_interface(ProbRow{{0.1, 0.9, 0.0}}, ForwardPolicy::deflection, rng, busy) != 1);
        }
    }
    SUBCASE("everything excluded") {
        const std::array<std::size_t, 2> ex{0, 1};
        CHECK_THROWS_AS(choose_interface(ProbRow{{0.5, 0.5}}, ForwardPolicy::uniform, rng, ex), ConfigError);
    }
    SUBCASE("argmax is a pure function") {
        Rng other(99);
        const ProbRow row{{0.3, 0.3, 0.4}};
        CHECK(choose_interface(row, ForwardPolicy::argmax, rng) == choose_interface(row, ForwardPolicy::argmax, other));
    }
}

TEST_CASE("prob_from_q") {
    CHECK(prob_from_q(Eigen::Vector2d(2, 2)).isApprox(ProbRow{{0.5, 0.5}}));
    CHECK(prob_from_q(Eigen::Vector2d(1, 3)).isApprox(ProbRow{{0.25, 0.75}}));
    CHECK(prob_from_q(ProbRow::Constant(1, 5.0)) == ProbRow::Constant(1, 1.0));
    CHECK_THROWS_AS(prob_from_q(Eigen::Vector2d(0, 0)), ConfigError);
    CHECK_THROWS_AS(prob_from_q(Eigen::Vector2d(-1, 2)), ConfigError);

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        ProbRow q(4);
        for (Eigen::Index k = 0; k < 4; ++k) q(k) = rng.uniform() + 1e-3;
        const double c = 0.01 + 100.0 * rng.uniform();
        Eigen::Index a = 0, b = 0;
        prob_from_q(c * q).maxCoeff(&a);
        q.maxCoeff(&b);
        CHECK(a == b);
        CHECK(row_is_normalized(prob_from_q(q)));
    }
}

TEST_CASE("one-hot rows from deterministic tables") {
    const Topology t = generate(gen::LinearChain{3});
    DetTables tables(3, DetTable(3));
    tables[1].entries[0] = DetEntry{0, Cost::whole(1)};
    const ProbTable p = to_prob_table(t, tables);
    CHECK(p.row(1, 0) == ProbRow{{1.0, 0.0}});
    CHECK(p.row(1, 2) == ProbRow{{0.0, 0.0}});
    CHECK(p.row(1, 1).size() == 0);
}

TEST_CASE("table dump format") {
    const Topology t = generate(gen::LinearChain{2});
    const std::string dump = dump_table(t, ProbTable::uniform(t));
    CHECK(dump == "r=0 d=1 p=[1.000000]\nr=1 d=0 p=[1.000000]\n");
    const Topology c3 = generate(gen::Complete{3});
    CHECK(dump_table(c3, ProbTable::uniform(c3)).substr(0, 31) == "r=0 d=1 p=[0.500000,0.500000]\nr");
}

TEST_CASE("q table initialization") {
    const Topology t = generate(gen::Complete{3});
    const QTable q(t, 0.5);
    CHECK(q.row(0, 1) == ProbRow::Constant(2, 0.5));
    CHECK(q.row(0, 0).size() == 0);
}

TEST_CASE("path vector ordering") {
    const Topology t = generate(gen::Complete{4});
    const PathVector a{{0, 1}, Cost::whole(2)};
    const PathVector b{{0, 2, 1}, Cost::whole(2)};
    const PathVector c{{0, 3, 1}, Cost::whole(1)};
    CHECK(path_vector_less(t, c, a));
    CHECK(path_vector_less(t, a, b));
    CHECK_FALSE(path_vector_less(t, b, a));
}
