#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sperner/errors.hpp"
#include "sperner/reverse_construction.hpp"
#include "sperner/sperner_search.hpp"

using namespace sperner;

namespace {

BaryPoint random_point(std::mt19937_64& rng, int n)
{
    std::exponential_distribution<double> e(1.0);
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    double s = 0;
    for (auto& v : x)
        s += v = e(rng);
    for (auto& v : x)
        v /= s;
    return BaryPoint(x);
}

// Random point strictly inside a cell, with weights bounded away from zero.
BaryPoint random_in_cell(std::mt19937_64& rng, const Grid& g, int cell)
{
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const auto ids = g.cell_vertex_ids(cell);
    std::vector<double> w(ids.size());
    double s = 0;
    for (auto& x : w)
        s += x = u(rng);
    std::vector<double> z(static_cast<std::size_t>(g.dim()) + 1, 0.0);
    for (std::size_t j = 0; j < ids.size(); ++j)
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] += w[j] / s * g.vertex(ids[j]).k[i] / g.mesh();
    return BaryPoint(z);
}

BaryPoint barycenter_of(const Grid& g, int cell)
{
    std::vector<double> z(static_cast<std::size_t>(g.dim()) + 1, 0.0);
    for (int v : g.cell_vertex_ids(cell))
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] += static_cast<double>(g.vertex(v).k[i]) / (g.mesh() * (g.dim() + 1.0));
    return BaryPoint(z);
}

LabeledGrid corners_only(int n)
{
    std::vector<int> labels;
    auto g = make_grid(n, 1);
    for (std::size_t v = 0; v < g->vertex_count(); ++v)
    {
        const auto& k = g->vertex(static_cast<int>(v)).k;
        labels.push_back(static_cast<int>(std::find(k.begin(), k.end(), 1) - k.begin()));
    }
    return explicit_labeling(g, labels);
}

}  // namespace

TEST_CASE("vertex images")
{
    SUBCASE("n=2 corner")
    {
        const auto map = build_pl_map(corners_only(2), 0.1);
        const auto& lg = map.labeled_grid();
        const auto& img = map.image(lg.grid().vertex_id(LatticeVertex{{1, 0, 0}}));
        CHECK(img[0] == doctest::Approx(0.9));
        CHECK(img[1] == doctest::Approx(0.05));
        CHECK(img[2] == doctest::Approx(0.05));
    }
    SUBCASE("n=1 midpoint")
    {
        const auto map = build_pl_map(explicit_labeling(make_grid(1, 2), {0, 1, 1}), 0.25);
        const auto& img = map.image(1);
        CHECK(img[0] == doctest::Approx(0.75));
        CHECK(img[1] == doctest::Approx(0.25));
    }
    SUBCASE("images sum to one")
    {
        auto g = make_grid(3, 4);
        const auto map = build_pl_map(random_labeling(g, 3));
        for (std::size_t v = 0; v < g->vertex_count(); ++v)
        {
            double s = 0;
            for (double x : map.image(static_cast<int>(v)).vec())
            {
                CHECK(x >= 0.0);
                s += x;
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("tau bounds")
{
    const auto lg = explicit_labeling(make_grid(1, 2), {0, 1, 1});
    CHECK(tau_upper_bound(lg) == doctest::Approx(0.5));
    CHECK(build_pl_map(lg).tau() == doctest::Approx(0.25));
    CHECK_THROWS_AS(build_pl_map(lg, 0.5), TauTooLarge);
    CHECK_THROWS_AS(build_pl_map(lg, 0.7), TauTooLarge);
    CHECK_THROWS_AS(build_pl_map(lg, 0.0), InvalidArgument);
    CHECK_THROWS_AS(build_pl_map(explicit_labeling(make_grid(1, 2), {1, 1, 1})), NonconformingLabeling);
}

TEST_CASE("eval_pl at vertices and fixed barycenters")
{
    for (int n = 1; n <= 3; ++n)
    {
        auto g = make_grid(n, 4);
        const auto lg = random_labeling(g, 17 + static_cast<std::uint64_t>(n));
        const auto map = build_pl_map(lg);
        for (std::size_t v = 0; v < g->vertex_count(); ++v)
        {
            const auto y = eval_pl(map, vertex_to_bary(g->vertex(static_cast<int>(v)), 4));
            CHECK(distance_inf(y.coords(), map.image(static_cast<int>(v)).coords()) <= 1e-15);
        }
        for (int c : enumerate_fully_labeled(lg).fully_labeled)
        {
            const auto z = barycenter_of(*g, c);
            CHECK(distance_inf(eval_pl(map, z).coords(), z.coords()) <= 1e-12);
        }
    }
}

TEST_CASE("cells missing a label push that coordinate up by tau / n")
{
    std::mt19937_64 rng(8);
    for (int n = 1; n <= 3; ++n)
    {
        auto g = make_grid(n, 5);
        const auto lg = random_labeling(g, 40 + static_cast<std::uint64_t>(n));
        const auto map = build_pl_map(lg);
        for (std::size_t c = 0; c < g->cell_count(); ++c)
        {
            const auto labels = lg.cell_labels(static_cast<int>(c));
            for (int i = 0; i <= n; ++i)
            {
                if (std::find(labels.begin(), labels.end(), i) != labels.end())
                    continue;
                for (int s = 0; s < 5; ++s)
                {
                    const auto z = random_in_cell(rng, *g, static_cast<int>(c));
                    const auto fz = eval_pl(map, z);
                    const double gap = fz[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(i)];
                    CHECK(gap == doctest::Approx(map.tau() / n).epsilon(1e-9));
                    CHECK(gap > 0.0);
                }
            }
        }
    }
}

TEST_CASE("range and Lipschitz bound")
{
    std::mt19937_64 rng(12);
    for (int n = 1; n <= 3; ++n)
    {
        const int m = 4;
        const auto lg = random_labeling(make_grid(n, m), 5);
        const auto map = build_pl_map(lg);
        const double lip = 1.0 + 4.0 * n * n * m * map.tau();
        for (int trial = 0; trial < 1000; ++trial)
        {
            const auto z = random_point(rng, n);
            const auto fz = eval_pl(map, z);
            double s = 0;
            for (double x : fz.vec())
            {
                CHECK(x >= -1e-12);
                s += x;
            }
            CHECK(std::abs(s - 1.0) <= 1e-12);
            const auto w = random_point(rng, n);
            CHECK(distance_inf(fz.coords(), eval_pl(map, w).coords()) <=
                  lip * distance_inf(z.coords(), w.coords()) + 1e-12);
        }
    }
}

TEST_CASE("pl_fixpoint_exact")
{
    SUBCASE("segment midpoint")
    {
        const auto map = build_pl_map(explicit_labeling(make_grid(1, 2), {0, 1, 1}));
        const auto z = pl_fixpoint_exact(map, 0);
        REQUIRE(z.has_value());
        CHECK((*z)[1] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK_FALSE(pl_fixpoint_exact(map, 1).has_value());
    }
    SUBCASE("fully labeled cells give their barycenter, others nothing")
    {
        for (int n = 1; n <= 3; ++n)
        {
            auto g = make_grid(n, 4);
            for (std::uint64_t seed = 0; seed < 10; ++seed)
            {
                const auto lg = random_labeling(g, seed);
                const auto map = build_pl_map(lg);
                for (std::size_t c = 0; c < g->cell_count(); ++c)
                {
                    const auto z = pl_fixpoint_exact(map, static_cast<int>(c));
                    const bool full = is_fully_labeled(lg.cell_labels(static_cast<int>(c)));
                    CHECK(z.has_value() == full);
                    if (!z)
                        continue;
                    CHECK(distance_inf(z->coords(), barycenter_of(*g, static_cast<int>(c)).coords()) <= 1e-12);
                    CHECK(distance_inf(eval_pl(map, *z).coords(), z->coords()) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("fully_labeled_from_fixpoint")
{
    SUBCASE("segment example")
    {
        const auto lg = explicit_labeling(make_grid(1, 2), {0, 1, 1});
        const auto r = fully_labeled_from_fixpoint(lg);
        CHECK(r.cell == 0);
        CHECK(r.point[1] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(r.fully_labeled);
        CHECK(r.in_enumeration);
    }
    SUBCASE("unique fully labeled cell is recovered")
    {
        // Corners carry their own labels, everything else carries 0.
        auto g = make_grid(2, 4);
        std::vector<int> labels(g->vertex_count(), 0);
        labels[static_cast<std::size_t>(g->vertex_id(LatticeVertex{{0, 4, 0}}))] = 1;
        labels[static_cast<std::size_t>(g->vertex_id(LatticeVertex{{0, 0, 4}}))] = 2;
        for (std::size_t v = 0; v < g->vertex_count(); ++v)
            if (g->vertex(static_cast<int>(v)).k[0] == 0 && labels[v] == 0)
                labels[v] = 1;
        const auto lg = explicit_labeling(g, labels);
        const auto full = enumerate_fully_labeled(lg).fully_labeled;
        REQUIRE(full.size() == 1);
        CHECK(fully_labeled_from_fixpoint(lg).cell == full.front());
    }
    SUBCASE("random labelings")
    {
        auto g = make_grid(2, 4);
        for (std::uint64_t seed = 0; seed < 100; ++seed)
        {
            const auto lg = random_labeling(g, seed);
            const auto r = fully_labeled_from_fixpoint(lg);
            CHECK(r.fully_labeled);
            CHECK(r.in_enumeration);
            CHECK(r.solution.m_final == 4);
        }
    }
    SUBCASE("explicit tau")
    {
        const auto lg = random_labeling(make_grid(2, 4), 7);
        const double bound = tau_upper_bound(lg);
        const auto r = fully_labeled_from_fixpoint(lg, {}, 0.9 * bound);
        CHECK(r.tau == doctest::Approx(0.9 * bound));
        CHECK(r.fully_labeled);
        CHECK_THROWS_AS(fully_labeled_from_fixpoint(lg, {}, bound), TauTooLarge);
    }
}

TEST_CASE("PL map through the SimplexMap interface")
{
    const auto lg = random_labeling(make_grid(2, 3), 2);
    const auto map = build_pl_map(lg);
    const auto f = map.as_simplex_map();
    CHECK(f.name() == "pl_from_labels");
    const BaryPoint z({0.3, 0.3, 0.4});
    CHECK(f(z) == eval_pl(map, z));
}
