#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "sperner/errors.hpp"
#include "sperner/maps.hpp"
#include "sperner/sperner_search.hpp"

using namespace sperner;

namespace {

bool contains(const std::vector<int>& v, int x)
{
    return std::binary_search(v.begin(), v.end(), x);
}

ChartLabeler labeler_for(const LabeledGrid& lg)
{
    return [&lg](std::span<const int> chart) -> VertexLabel {
        return lg.label(from_chart(chart, lg.mesh()));
    };
}

}  // namespace

TEST_CASE("is_fully_labeled")
{
    CHECK(is_fully_labeled(std::vector<int>{0, 1, 2}));
    CHECK(is_fully_labeled(std::vector<int>{2, 0, 1}));
    CHECK_FALSE(is_fully_labeled(std::vector<int>{0, 1, 1}));
    CHECK(is_fully_labeled(std::vector<int>{0, 1, 2, 3}));
    CHECK_FALSE(is_fully_labeled(std::vector<int>{0, 1, 3}));
}

TEST_CASE("zero-dimensional base case")
{
    // A single point carrying label 0 is the whole triangulation and is fully labeled.
    const std::vector<int> point{0};
    CHECK(is_fully_labeled(point));
    CHECK_THROWS_AS(build_grid(0, 1), DegenerateDimension);
}

TEST_CASE("enumeration examples")
{
    const auto a = explicit_labeling(make_grid(1, 2), {0, 1, 1});
    const auto ra = enumerate_fully_labeled(a);
    CHECK(ra.fully_labeled == std::vector<int>{0});
    CHECK(ra.count_parity == Parity::Odd);

    const auto b = explicit_labeling(make_grid(1, 4), {0, 0, 1, 0, 1});
    const auto rb = enumerate_fully_labeled(b);
    CHECK(rb.fully_labeled.size() == 3);
    CHECK(rb.count_parity == Parity::Odd);
    CHECK(std::string(to_string(rb.count_parity)) == "odd");

    CHECK_THROWS_AS(enumerate_fully_labeled(explicit_labeling(make_grid(1, 2), {0, 0, 0})), NonconformingLabeling);
}

TEST_CASE("parity over random labelings")
{
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 5; ++m)
        {
            auto g = make_grid(n, m);
            for (std::uint64_t seed = 0; seed < 20; ++seed)
                CHECK(enumerate_fully_labeled(random_labeling(g, seed)).count_parity == Parity::Odd);
        }
    auto g = make_grid(2, 4);
    for (std::uint64_t seed = 100; seed < 300; ++seed)
        CHECK(enumerate_fully_labeled(random_labeling(g, seed)).fully_labeled.size() % 2 == 1);
}

TEST_CASE("handshake examples")
{
    const UndirectedGraph triangle{3, {{0, 1}, {1, 2}, {2, 0}}};
    const auto t = handshake_report(triangle);
    CHECK(t.odd_degree_nodes == 0);
    CHECK(t.holds());
    const UndirectedGraph path{3, {{0, 1}, {1, 2}}};
    const auto p = handshake_report(path);
    CHECK(p.odd_degree_nodes == 2);
    CHECK(check_handshake(path));
    const UndirectedGraph loop{2, {{0, 0}, {0, 1}}};
    const auto l = handshake_report(loop);
    CHECK(l.degrees == std::vector<int>{3, 1});
    CHECK(l.holds());
}

TEST_CASE("handshake on random multigraphs")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 500; ++trial)
    {
        const int nodes = std::uniform_int_distribution<int>(1, 50)(rng);
        const int edges = std::uniform_int_distribution<int>(0, 120)(rng);
        std::uniform_int_distribution<int> pick(0, nodes - 1);
        UndirectedGraph g{nodes, {}};
        for (int e = 0; e < edges; ++e)
            g.edges.emplace_back(pick(rng), pick(rng));
        const auto r = handshake_report(g);
        CHECK(r.holds());
        CHECK(r.degree_sum == 2LL * edges);
    }
}

TEST_CASE("dual graph examples")
{
    const auto lg = explicit_labeling(make_grid(1, 2), {0, 1, 1});
    const DualGraph d = build_dual_graph(lg);
    CHECK(d.outside() == 2);
    CHECK(d.degree(d.outside()) == 1);
    CHECK(d.degree(0) == 1);
    CHECK(d.degree(1) == 0);
    CHECK(check_handshake(d.as_graph()));
}

TEST_CASE("door trichotomy and induction on dimension")
{
    for (int n = 1; n <= 3; ++n)
        for (int m = 1; m <= 5; ++m)
        {
            auto g = make_grid(n, m);
            for (std::uint64_t seed = 0; seed < 10; ++seed)
            {
                const auto lg = random_labeling(g, seed);
                const DualGraph d = build_dual_graph(lg);
                const auto full = enumerate_fully_labeled(lg).fully_labeled;
                for (int c = 0; c < d.outside(); ++c)
                {
                    CHECK(d.degree(c) <= 2);
                    CHECK((d.degree(c) == 1) == contains(full, c));
                }
                CHECK(d.degree(d.outside()) % 2 == 1);
                CHECK(check_handshake(d.as_graph()));
                const auto hist = d.degree_histogram();
                int total = 0;
                for (int h : hist)
                    total += h;
                CHECK(total == d.node_count());
                if (n >= 2)
                {
                    const auto face = enumerate_fully_labeled(restrict_to_last_face(lg)).fully_labeled.size();
                    CHECK(static_cast<std::size_t>(d.degree(d.outside())) == face);
                }
            }
        }
}

TEST_CASE("path_follow")
{
    SUBCASE("unique path on the segment")
    {
        const auto r = path_follow(explicit_labeling(make_grid(1, 2), {0, 1, 1}));
        CHECK(r.cell == 0);
        REQUIRE(r.paths.size() == 1);
        CHECK(r.paths[0] == std::vector<int>{2, 0});
    }
    SUBCASE("three switches on the segment")
    {
        const auto lg = explicit_labeling(make_grid(1, 3), {0, 1, 0, 1});
        CHECK(enumerate_fully_labeled(lg).fully_labeled.size() == 3);
        CHECK(path_follow(lg).cell == 0);
    }
    SUBCASE("random labelings land in the enumeration")
    {
        auto g = make_grid(2, 4);
        for (std::uint64_t seed = 0; seed < 200; ++seed)
        {
            const auto lg = random_labeling(g, seed);
            const auto r = path_follow(lg);
            CHECK(contains(enumerate_fully_labeled(lg).fully_labeled, r.cell));
            CHECK(r.paths.front().front() == static_cast<int>(g->cell_count()));
        }
    }
    SUBCASE("rotation map terminates within m^n steps")
    {
        // At m = 6 the fixed point (2,2,2)/6 is a vertex; m = 7 keeps it interior.
        CHECK(std::holds_alternative<FixedPointHit>(label_grid(rotation_map(2), make_grid(2, 6))));
        auto res = label_grid(rotation_map(2), make_grid(2, 7));
        REQUIRE(std::holds_alternative<LabeledGrid>(res));
        const auto& lg = std::get<LabeledGrid>(res);
        const auto r = path_follow(lg);
        CHECK(r.steps <= 49);
        CHECK(contains(enumerate_fully_labeled(lg).fully_labeled, r.cell));
    }
    SUBCASE("nonconforming input")
    {
        CHECK_THROWS_AS(path_follow(explicit_labeling(make_grid(1, 2), {1, 1, 1})), NonconformingLabeling);
    }
}

TEST_CASE("face-chain walk agrees with enumeration")
{
    for (int n = 1; n <= 4; ++n)
        for (int m = 1; m <= (n == 4 ? 3 : 6); ++m)
        {
            auto g = make_grid(n, m);
            for (std::uint64_t seed = 0; seed < 25; ++seed)
            {
                const auto lg = random_labeling(g, seed);
                const auto walk = walk_face_chain(n, m, labeler_for(lg));
                REQUIRE(std::holds_alternative<ChainWalkResult>(walk));
                const auto& w = std::get<ChainWalkResult>(walk);
                const auto id = g->find_cell(w.cell);
                REQUIRE(id.has_value());
                CHECK(contains(enumerate_fully_labeled(lg).fully_labeled, *id));
                CHECK(w.labels == lg.cell_labels(*id));
            }
        }
}

TEST_CASE("face-chain walk stops on a fixed-point hit")
{
    const auto f = identity_map(2);
    const auto walk = walk_face_chain(2, 8, [&](std::span<const int> chart) {
        return label_vertex(f, vertex_to_bary(from_chart(chart, 8), 8));
    });
    CHECK(std::holds_alternative<FixedPointHit>(walk));
}
