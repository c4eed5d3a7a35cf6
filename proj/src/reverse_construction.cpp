#include "sperner/reverse_construction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sperner/errors.hpp"
#include "sperner/sperner_search.hpp"

namespace sperner {

PLMap::PLMap(LabeledGrid lg, double tau, std::vector<BaryPoint> images)
    : state_(std::make_shared<const State>(State{std::move(lg), tau, std::move(images)}))
{
}

BaryPoint PLMap::operator()(const BaryPoint& z) const
{
    const Grid& g = state_->lg.grid();
    const Location loc = locate_point(g, z);
    std::vector<double> out(z.size(), 0.0);
    const auto ids = g.cell_vertex_ids(loc.cell);
    for (std::size_t j = 0; j < ids.size(); ++j)
    {
        const BaryPoint& img = image(ids[j]);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += loc.weights[j] * img[i];
    }
    return BaryPoint(std::move(out));
}

SimplexMap PLMap::as_simplex_map() const
{
    return SimplexMap("pl_from_labels", dim(), [self = *this](std::span<const double> x) {
        return self(BaryPoint(std::vector<double>(x.begin(), x.end()))).vec();
    });
}

double tau_upper_bound(const LabeledGrid& lg)
{
    const Grid& g = lg.grid();
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
    {
        const auto& lv = g.vertex(static_cast<int>(v));
        const int l = lg.label(static_cast<int>(v));
        bound = std::min(bound, static_cast<double>(lv.k[static_cast<std::size_t>(l)]) / g.mesh());
    }
    return bound;
}

PLMap build_pl_map(const LabeledGrid& lg, std::optional<double> tau)
{
    const auto report = validate_sperner(lg);
    if (!report.ok())
        throw NonconformingLabeling("nonconforming labeling: " + report.violations.front().message);
    const double bound = tau_upper_bound(lg);
    const double t = tau.value_or(0.5 * bound);
    if (!(t > 0.0))
        throw InvalidArgument("tau must be positive");
    if (t >= bound)
        throw TauTooLarge("tau too large: " + std::to_string(t) + " >= smallest labeled coordinate " +
                          std::to_string(bound));

    const Grid& g = lg.grid();
    const int n = g.dim();
    std::vector<BaryPoint> images;
    images.reserve(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
    {
        const auto l = static_cast<std::size_t>(lg.label(static_cast<int>(v)));
        std::vector<double> c = vertex_to_bary(g.vertex(static_cast<int>(v)), g.mesh()).vec();
        for (std::size_t j = 0; j < c.size(); ++j)
            c[j] += (j == l) ? -t : t / n;
        images.emplace_back(std::move(c));
    }
    return PLMap(lg, t, std::move(images));
}

BaryPoint eval_pl(const PLMap& map, const BaryPoint& z)
{
    return map(z);
}

std::optional<BaryPoint> pl_fixpoint_exact(const PLMap& map, int cell)
{
    const Grid& g = map.labeled_grid().grid();
    const int n = g.dim();
    const auto ids = g.cell_vertex_ids(cell);
    const Eigen::Index cols = n + 1;

    Eigen::MatrixXd a(n + 2, cols);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 2);
    rhs(n + 1) = 1.0;
    std::vector<BaryPoint> xs;
    for (Eigen::Index j = 0; j < cols; ++j)
    {
        xs.push_back(vertex_to_bary(g.vertex(ids[static_cast<std::size_t>(j)]), g.mesh()));
        const BaryPoint& img = map.image(ids[static_cast<std::size_t>(j)]);
        for (Eigen::Index i = 0; i <= n; ++i)
            a(i, j) = img[static_cast<std::size_t>(i)] - xs.back()[static_cast<std::size_t>(i)];
        a(n + 1, j) = 1.0;
    }
    const Eigen::VectorXd w = a.colPivHouseholderQr().solve(rhs);
    if ((a * w - rhs).lpNorm<Eigen::Infinity>() > 1e-10 || w.minCoeff() < -1e-12)
        return std::nullopt;

    std::vector<double> z(static_cast<std::size_t>(n) + 1, 0.0);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] += std::max(w(j), 0.0) * xs[static_cast<std::size_t>(j)][i];
    return BaryPoint(std::move(z));
}

ReverseResult fully_labeled_from_fixpoint(const LabeledGrid& lg, const SolverConfig& cfg, std::optional<double> tau)
{
    const PLMap map = build_pl_map(lg, tau);
    const int m0 = lg.mesh();
    const int n = lg.dim();

    SolverConfig local = cfg;
    local.m_schedule.clear();
    local.m_max = std::max(cfg.m_max, m0);
    for (long long m = m0; m <= local.m_max; m *= 2)
        local.m_schedule.push_back(static_cast<int>(m));
    // Outside fully labeled cells some coordinate moves by tau / n.
    local.residual_tol = std::min(cfg.residual_tol, map.tau() / (2.0 * n));
    local.run_all_levels = false;

    ReverseResult out;
    out.tau = map.tau();
    out.solution = solve(map.as_simplex_map(), local);
    if (!out.solution.converged)
        throw NotConverged("not converged: PL fixed point residual " + std::to_string(out.solution.residual));
    out.point = out.solution.point;
    out.cell = locate_point(lg.grid(), BaryPoint(out.point)).cell;
    out.fully_labeled = is_fully_labeled(lg.cell_labels(out.cell));
    const auto enumeration = enumerate_fully_labeled(lg);
    out.in_enumeration = std::binary_search(enumeration.fully_labeled.begin(), enumeration.fully_labeled.end(), out.cell);
    if (!out.fully_labeled || !out.in_enumeration)
        throw std::logic_error("PL fixed point landed in cell " + std::to_string(out.cell) +
                               ", which is not fully labeled");
    return out;
}

}  // namespace sperner
