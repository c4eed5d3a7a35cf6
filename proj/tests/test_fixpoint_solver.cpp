#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sperner/errors.hpp"
#include "sperner/fixpoint_solver.hpp"
#include "sperner/maps.hpp"
#include "sperner/sperner_search.hpp"

using namespace sperner;

namespace {

// Root of p(t) - t on [0, 1] by bisection; p(0) > 0 and p(1) < 1 assumed.
double bisect_fixed_point(const std::vector<double>& p)
{
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (poly_eval(p, mid) - mid > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<LatticeVertex> cell_vertices(const Grid& g, int c)
{
    return g.cell(c).vertices;
}

}  // namespace

TEST_CASE("residual examples")
{
    const BaryPoint x({0.1, 0.6, 0.3});
    const auto id = residual(identity_map(2), x);
    CHECK(id.linf == 0.0);
    CHECK(id.l1 == 0.0);
    const BaryPoint c({0.2, 0.3, 0.5});
    const auto cr = residual(constant_map(c), c);
    CHECK(cr.linf == 0.0);
    CHECK(cr.l1 == 0.0);
    const auto rr = residual(rotation_map(2), BaryPoint::corner(2, 0));
    CHECK(rr.linf == 1.0);
    CHECK(rr.l1 == 2.0);
}

TEST_CASE("cell_epsilon")
{
    const Grid g = build_grid(2, 5);
    for (std::size_t c = 0; c < g.cell_count(); ++c)
    {
        const auto cell = g.cell(static_cast<int>(c));
        CHECK(cell_epsilon(identity_map(2), cell, 5) == doctest::Approx(0.2).epsilon(1e-11));
        CHECK(cell_epsilon(identity_map(2), cell, 5) > 0.2);
        CHECK(cell_epsilon(constant_map(BaryPoint({0.2, 0.3, 0.5})), cell, 5) == doctest::Approx(0.2).epsilon(1e-11));
    }
    // Rotation permutes coordinates, so the image spread equals the vertex spread.
    const Grid g6 = build_grid(2, 6);
    const auto loc = locate_point(g6, BaryPoint::barycenter(2));
    CHECK(cell_epsilon(rotation_map(2), g6.cell(loc.cell), 6) == doctest::Approx(1.0 / 6).epsilon(1e-11));
}

TEST_CASE("residual bound chain on every fully labeled cell")
{
    const std::vector<SimplexMap> maps2 = {rotation_map(2), constant_map(BaryPoint({0.2, 0.3, 0.5})),
                                           constant_map(BaryPoint::barycenter(2)),
                                           affine_stochastic_map(2, {0.5, 0.2, 0.1, 0.3, 0.6, 0.2, 0.2, 0.2, 0.7})};
    const std::vector<SimplexMap> maps1 = {rotation_map(1), poly1d_map({1.0 / 3, 0.0, 1.0 / 3}),
                                           poly1d_map({0.9, -0.8})};
    const std::vector<SimplexMap> maps3 = {rotation_map(3), constant_map(BaryPoint({0.1, 0.2, 0.3, 0.4}))};
    int checked = 0;
    auto run = [&](const SimplexMap& f, int m) {
        auto res = label_grid(f, make_grid(f.dim(), m));
        if (!std::holds_alternative<LabeledGrid>(res))
            return;
        const auto& lg = std::get<LabeledGrid>(res);
        for (int c : enumerate_fully_labeled(lg).fully_labeled)
        {
            const auto report = verify_residual_bound(f, lg.grid().cell(c), lg.cell_labels(c), m);
            CHECK(report.holds());
            CHECK(report.checks.size() == 5);
            CHECK(report.bound == doctest::Approx(2.0 * f.dim() * (f.dim() + 1) * report.epsilon));
            ++checked;
        }
    };
    for (int m = 1; m <= 16; ++m)
    {
        for (const auto& f : maps1)
            run(f, m);
        for (const auto& f : maps2)
            run(f, m);
        for (const auto& f : maps3)
            run(f, m);
    }
    CHECK(checked > 100);
}

TEST_CASE("residual bound examples")
{
    SUBCASE("n=1 bound is 4 epsilon")
    {
        const auto f = poly1d_map({1.0 / 3, 0.0, 1.0 / 3});
        auto lg = std::get<LabeledGrid>(label_grid(f, make_grid(1, 8)));
        const int c = enumerate_fully_labeled(lg).fully_labeled.front();
        const auto report = verify_residual_bound(f, lg.grid().cell(c), lg.cell_labels(c), 8);
        CHECK(report.bound == doctest::Approx(4.0 * report.epsilon));
    }
    SUBCASE("constant map to the barycenter has slack")
    {
        const auto f = constant_map(BaryPoint::barycenter(2));
        auto lg = std::get<LabeledGrid>(label_grid(f, make_grid(2, 4)));
        for (int c : enumerate_fully_labeled(lg).fully_labeled)
        {
            const auto report = check_residual_bound(f, cell_vertices(lg.grid(), c), lg.cell_labels(c), 4);
            for (const auto& chk : report.checks)
                CHECK(chk.worst_slack > 0.0);
        }
    }
    SUBCASE("non fully labeled cells are rejected")
    {
        const auto f = rotation_map(1);
        const Grid g = build_grid(1, 2);
        const std::vector<int> labels{0, 0};
        CHECK_THROWS_AS(verify_residual_bound(f, g.cell(0), labels, 2), InvalidArgument);
    }
    SUBCASE("a violated chain throws")
    {
        // Labels that do not come from f: the chain has no reason to hold.
        const auto f = constant_map(BaryPoint({0.0, 1.0}));
        const Grid g = build_grid(1, 4);
        const std::vector<int> labels{0, 1};
        const auto report = check_residual_bound(f, cell_vertices(g, 0), labels, 4);
        CHECK_FALSE(report.holds());
        CHECK_THROWS_AS(verify_residual_bound(f, g.cell(0), labels, 4), BoundViolated);
    }
}

TEST_CASE("solver config validation")
{
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.schedule().front() == 2);
    CHECK(cfg.schedule().back() == 1 << 22);
    cfg.residual_tol = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.m_schedule = {4, 2};
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.m_schedule = {8, 16};
    cfg.m_max = 4;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("solve: closed forms")
{
    SUBCASE("rotation")
    {
        for (int n = 1; n <= 3; ++n)
        {
            const auto a = solve(rotation_map(n));
            CHECK(a.converged);
            CHECK(a.residual <= 1e-6);
            for (double x : a.point)
                CHECK(std::abs(x - 1.0 / (n + 1)) <= 1e-5);
        }
    }
    SUBCASE("constant")
    {
        const BaryPoint c({0.2, 0.3, 0.5});
        const auto a = solve(constant_map(c));
        CHECK(a.converged);
        CHECK(distance_inf(a.point, c.coords()) <= 1e-6);
        CHECK_FALSE(a.trace.back().materialized);
    }
    SUBCASE("poly1d")
    {
        const std::vector<double> p{1.0 / 3, 0.0, 1.0 / 3};
        const double t = bisect_fixed_point(p);
        CHECK(t == doctest::Approx((3.0 - std::sqrt(5.0)) / 2).epsilon(1e-12));
        const auto a = solve(poly1d_map(p));
        CHECK(a.converged);
        CHECK(std::abs(a.point[1] - t) <= 1e-5);
    }
    SUBCASE("affine stochastic")
    {
        const std::vector<double> A{0.5, 0.2, 0.1, 0.3, 0.6, 0.2, 0.2, 0.2, 0.7};
        const auto a = solve(affine_stochastic_map(2, A));
        CHECK(a.converged);
        CHECK(a.residual <= 1e-6);
    }
}

TEST_CASE("solve: identity exits at the first level")
{
    const auto a = solve(identity_map(2));
    CHECK(a.converged);
    CHECK(a.vertex_hit);
    CHECK(a.trace.size() == 1);
    CHECK(a.residual == 0.0);
    CHECK(extract_cauchy(a.trace).trivial);
}

TEST_CASE("solve: budget exhaustion returns the best candidate")
{
    SolverConfig cfg;
    cfg.m_max = 16;
    const auto a = solve(constant_map(BaryPoint({0.2, 0.3, 0.5})), cfg);
    CHECK_FALSE(a.converged);
    CHECK(a.trace.size() == 4);
    double best = 1.0;
    for (const auto& r : a.trace)
        best = std::min(best, r.residual);
    CHECK(a.residual == best);
}

TEST_CASE("solve: trace bookkeeping")
{
    SolverConfig cfg;
    cfg.m_max = 1 << 10;
    cfg.run_all_levels = true;
    cfg.materialize_limit = 1 << 8;
    const auto f = affine_stochastic_map(2, {0.5, 0.2, 0.1, 0.3, 0.6, 0.2, 0.2, 0.2, 0.7});
    const auto a = solve(f, cfg);
    REQUIRE(a.trace.size() == 10);
    for (std::size_t j = 0; j < a.trace.size(); ++j)
    {
        const auto& r = a.trace[j];
        CHECK(r.m == (2 << j));
        CHECK(r.cell_diameter == doctest::Approx(1.0 / r.m));
        CHECK(r.bound_holds);
        CHECK(r.materialized == (static_cast<long long>(r.m) * r.m <= cfg.materialize_limit));
        CHECK(r.residual_l1 < r.bound + 1e-15);
        if (j > 0 && !r.vertex_hit && !a.trace[j - 1].vertex_hit)
            CHECK(r.epsilon < a.trace[j - 1].epsilon);
    }
    const auto cauchy = extract_cauchy(a.trace);
    CHECK(cauchy.distances.size() == 9);
    CHECK(cauchy.rate_constant < 10.0);
}

TEST_CASE("lazy and materialized levels find fully labeled cells")
{
    const auto f = affine_stochastic_map(2, {0.5, 0.2, 0.1, 0.3, 0.6, 0.2, 0.2, 0.2, 0.7});
    SolverConfig lazy;
    lazy.m_schedule = {32};
    lazy.m_max = 32;
    lazy.materialize_limit = 0;
    SolverConfig full = lazy;
    full.materialize_limit = 1 << 20;
    const auto a = solve(f, lazy);
    const auto b = solve(f, full);
    REQUIRE(a.trace.size() == 1);
    CHECK_FALSE(a.trace[0].materialized);
    CHECK(b.trace[0].materialized);
    auto lg = std::get<LabeledGrid>(label_grid(f, make_grid(2, 32)));
    const auto full_cells = enumerate_fully_labeled(lg).fully_labeled;
    CHECK(a.cell.id == -1);
    CHECK(std::binary_search(full_cells.begin(), full_cells.end(), b.cell.id));
    const auto& g = lg.grid();
    auto same = [&](int c) {
        const auto ids = g.cell_vertex_ids(c);
        return std::all_of(a.cell.vertices.begin(), a.cell.vertices.end(), [&](const LatticeVertex& v) {
            return std::find(ids.begin(), ids.end(), g.vertex_id(v)) != ids.end();
        });
    };
    CHECK(std::any_of(full_cells.begin(), full_cells.end(), same));
}

TEST_CASE("extract_cauchy")
{
    SolverConfig cfg;
    cfg.run_all_levels = true;
    cfg.m_max = 1 << 16;
    const auto c = BaryPoint({0.2, 0.3, 0.5});
    const auto a = solve(constant_map(c), cfg);
    const auto r = extract_cauchy(a.trace);
    CHECK(r.distances.size() == a.trace.size() - 1);
    CHECK(r.final_within_two_mesh);
    for (std::size_t j = 0; j < r.distances.size(); ++j)
        CHECK(r.distances[j] <= 2.0 / r.meshes[j] + 1e-15);

    std::vector<LevelRecord> two(2);
    two[0].m = 2;
    two[0].candidate = {0.5, 0.5};
    two[1].m = 4;
    two[1].candidate = {0.25, 0.75};
    const auto t = extract_cauchy(two);
    CHECK(t.distances == std::vector<double>{0.25});
    CHECK(t.rate_constant == doctest::Approx(0.5));
    CHECK(t.final_within_two_mesh);
}
