#include "sperner/fixpoint_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sperner/errors.hpp"
#include "sperner/sperner_search.hpp"

namespace sperner {

namespace {

constexpr double kEpsilonInflation = 1.0 + 1e-12;

std::vector<double> cell_barycenter(std::span<const LatticeVertex> vertices, int m)
{
    const std::size_t d = vertices.front().k.size();
    std::vector<long long> sums(d, 0);
    for (const auto& v : vertices)
        for (std::size_t i = 0; i < d; ++i)
            sums[i] += v.k[i];
    const double denom = static_cast<double>(vertices.size()) * m;
    std::vector<double> out(d);
    for (std::size_t i = 0; i < d; ++i)
        out[i] = static_cast<double>(sums[i]) / denom;
    return out;
}

}  // namespace

Residual residual(const SimplexMap& f, const BaryPoint& x)
{
    const BaryPoint fx = f(x);
    return {distance_inf(fx.coords(), x.coords()), distance_l1(fx.coords(), x.coords())};
}

double cell_epsilon(const SimplexMap& f, std::span<const LatticeVertex> vertices, int m)
{
    std::vector<BaryPoint> xs;
    std::vector<BaryPoint> fs;
    for (const auto& v : vertices)
    {
        xs.push_back(vertex_to_bary(v, m));
        fs.push_back(f(xs.back()));
    }
    double spread = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            spread = std::max({spread, distance_inf(xs[i].coords(), xs[j].coords()),
                               distance_inf(fs[i].coords(), fs[j].coords())});
    return spread * kEpsilonInflation;
}

double cell_epsilon(const SimplexMap& f, const Cell& cell, int m)
{
    return cell_epsilon(f, cell.vertices, m);
}

bool BoundReport::holds() const
{
    return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.holds; });
}

BoundReport check_residual_bound(const SimplexMap& f, std::span<const LatticeVertex> vertices,
                                 std::span<const int> labels, int m)
{
    if (vertices.size() != labels.size() || vertices.empty())
        throw InvalidArgument("residual bound: need one label per cell vertex");
    if (!is_fully_labeled(labels))
        throw InvalidArgument("residual bound: cell is not fully labeled");
    const int n = static_cast<int>(vertices.size()) - 1;
    const auto zero = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), 0) - labels.begin());

    BoundReport r;
    r.epsilon = cell_epsilon(f, vertices, m);
    const BaryPoint x = vertex_to_bary(vertices[zero], m);
    const BaryPoint fx = f(x);
    r.anchor = x.vec();
    r.anchor_image = fx.vec();
    r.residual_l1 = distance_l1(x.coords(), fx.coords());
    r.bound = 2.0 * n * (n + 1) * r.epsilon;

    const double eps = r.epsilon;
    const double inf = std::numeric_limits<double>::infinity();
    double e1 = inf;
    double e3 = inf;
    const double e3_bound = std::max(2.0, 2.0 * (n - 1)) * eps;
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        e1 = std::min(e1, x[i] - (fx[i] - 2.0 * eps));
        e3 = std::min(e3, e3_bound - std::abs(x[i] - fx[i]));
    }
    const double e2 = x[0] - fx[0];
    const double e24 = 2.0 * n * eps - std::abs(fx[0] - x[0]);
    const double fp = r.bound - r.residual_l1;
    r.checks = {{"e1", e1, e1 > 0.0}, {"e2", e2, e2 > 0.0}, {"e3", e3, e3 > 0.0}, {"e24", e24, e24 > 0.0},
                {"fp", fp, fp > 0.0}};
    return r;
}

BoundReport verify_residual_bound(const SimplexMap& f, const Cell& cell, std::span<const int> labels, int m)
{
    BoundReport r = check_residual_bound(f, cell.vertices, labels, m);
    if (!r.holds())
    {
        std::ostringstream os;
        os << "bound violated on cell " << cell.id << " at m=" << m << ":";
        for (const auto& c : r.checks)
            if (!c.holds)
                os << ' ' << c.name << " (slack " << c.worst_slack << ")";
        throw BoundViolated(os.str());
    }
    return r;
}

void SolverConfig::validate() const
{
    if (!(residual_tol > 0.0))
        throw InvalidArgument("residual_tol must be positive");
    if (!(tol_fix > 0.0))
        throw InvalidArgument("tol_fix must be positive");
    if (m_max < 1)
        throw InvalidArgument("m_max must be >= 1");
    for (std::size_t i = 0; i < m_schedule.size(); ++i)
    {
        if (m_schedule[i] < 1)
            throw InvalidArgument("m_schedule entries must be >= 1");
        if (i > 0 && m_schedule[i] <= m_schedule[i - 1])
            throw InvalidArgument("m_schedule must be strictly increasing");
    }
    if (!m_schedule.empty() && m_max < m_schedule.front())
        throw InvalidArgument("m_max is below the first schedule entry");
}

std::vector<int> SolverConfig::schedule() const
{
    std::vector<int> out;
    if (m_schedule.empty())
    {
        for (long long m = 2; m <= m_max; m *= 2)
            out.push_back(static_cast<int>(m));
        if (out.empty())
            out.push_back(m_max);
        return out;
    }
    for (int m : m_schedule)
        if (m <= m_max)
            out.push_back(m);
    return out;
}

ApproxFixedPoint solve(const SimplexMap& f, const SolverConfig& cfg)
{
    cfg.validate();
    const int n = f.dim();
    ApproxFixedPoint out;
    std::optional<std::size_t> best;

    for (int m : cfg.schedule())
    {
        LevelRecord rec;
        rec.m = m;
        rec.cell_diameter = cell_diameter(m);
        rec.materialized = std::pow(static_cast<double>(m), n) <= static_cast<double>(cfg.materialize_limit);

        std::optional<FixedPointHit> hit;
        std::vector<int> labels;
        if (rec.materialized)
        {
            auto grid = make_grid(n, m);
            auto labeled = label_grid(f, grid, cfg.tol_fix);
            if (auto* h = std::get_if<FixedPointHit>(&labeled))
                hit = *h;
            else
            {
                const auto& lg = std::get<LabeledGrid>(labeled);
                const auto pf = path_follow(lg);
                rec.cell = grid->cell(pf.cell);
                labels = lg.cell_labels(pf.cell);
                rec.path_steps = static_cast<long long>(pf.steps);
            }
        }
        else
        {
            auto labeler = [&](std::span<const int> chart) {
                return label_vertex(f, vertex_to_bary(from_chart(chart, m), m), cfg.tol_fix);
            };
            auto walk = walk_face_chain(n, m, labeler);
            if (auto* h = std::get_if<FixedPointHit>(&walk))
                hit = *h;
            else
            {
                auto& w = std::get<ChainWalkResult>(walk);
                rec.cell = Cell{-1, kuhn_vertices(w.cell, m)};
                labels = std::move(w.labels);
                rec.path_steps = static_cast<long long>(w.pivots);
            }
        }

        if (hit)
        {
            rec.vertex_hit = true;
            rec.candidate = hit->vertex.vec();
            const auto res = residual(f, hit->vertex);
            rec.residual = res.linf;
            rec.residual_l1 = res.l1;
            out.trace.push_back(std::move(rec));
            best = out.trace.size() - 1;
            break;
        }

        const auto report = verify_residual_bound(f, rec.cell, labels, m);
        rec.epsilon = report.epsilon;
        rec.bound = report.bound;
        rec.bound_holds = report.holds();
        rec.candidate = cell_barycenter(rec.cell.vertices, m);
        const auto res = residual(f, BaryPoint(rec.candidate));
        rec.residual = res.linf;
        rec.residual_l1 = res.l1;
        out.trace.push_back(std::move(rec));

        const std::size_t idx = out.trace.size() - 1;
        if (!best || out.trace[idx].residual <= out.trace[*best].residual)
            best = idx;
        if (out.trace[idx].residual <= cfg.residual_tol && !cfg.run_all_levels)
            break;
    }

    if (!best)
        throw InvalidArgument("solver schedule is empty");
    const LevelRecord& chosen = out.trace[*best];
    out.point = chosen.candidate;
    out.residual = chosen.residual;
    out.residual_l1 = chosen.residual_l1;
    out.m_final = chosen.m;
    out.cell = chosen.cell;
    out.vertex_hit = chosen.vertex_hit;
    out.converged = chosen.residual <= cfg.residual_tol;
    if (out.trace.size() >= 2)
        out.non_contracting = !extract_cauchy(out.trace).contracting();
    return out;
}

CauchyReport extract_cauchy(std::span<const LevelRecord> trace)
{
    CauchyReport r;
    if (trace.size() < 2)
    {
        r.trivial = true;
        r.eventually_monotone = true;
        r.final_within_two_mesh = true;
        return r;
    }
    for (std::size_t j = 0; j + 1 < trace.size(); ++j)
    {
        const double d = distance_inf(trace[j].candidate, trace[j + 1].candidate);
        r.meshes.push_back(trace[j + 1].m);
        r.distances.push_back(d);
        r.rate_constant = std::max(r.rate_constant, d * trace[j].m);
    }
    const int count = static_cast<int>(r.distances.size());
    r.monotone_from = count - 1;
    while (r.monotone_from > 0 &&
           r.distances[static_cast<std::size_t>(r.monotone_from) - 1] >= r.distances[static_cast<std::size_t>(r.monotone_from)])
        --r.monotone_from;
    const int tail = count - r.monotone_from;
    r.eventually_monotone = tail >= std::min(count, std::max(2, (count + 1) / 2));
    r.final_within_two_mesh = r.distances.back() <= 2.0 / trace.back().m;
    return r;
}

}  // namespace sperner
