#include "sperner/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "sperner/errors.hpp"

namespace sperner {

namespace {

std::string describe(const LatticeVertex& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.k.size(); ++i)
        os << (i ? "," : "") << v.k[i];
    os << ')';
    return os.str();
}

}  // namespace

SimplexMap::SimplexMap(std::string name, int dim, Fn fn) : name_(std::move(name)), dim_(dim), fn_(std::move(fn))
{
    if (dim_ < 1)
        throw InvalidArgument("map dimension must be >= 1");
}

BaryPoint SimplexMap::operator()(const BaryPoint& x) const
{
    if (x.dim() != dim_)
        throw InvalidArgument("map '" + name_ + "' expects dimension " + std::to_string(dim_));
    std::vector<double> y = fn_(x.coords());
    if (y.size() != x.size())
        throw MapRangeViolation("map range violation: '" + name_ + "' returned " + std::to_string(y.size()) +
                                " coordinates");
    double sum = 0.0;
    for (double& c : y)
    {
        if (!std::isfinite(c) || c < -kSumTol)
            throw MapRangeViolation("map range violation: '" + name_ + "' returned coordinate " +
                                    std::to_string(c));
        c = std::max(c, 0.0);
        sum += c;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw MapRangeViolation("map range violation: '" + name_ + "' output sums to " + std::to_string(sum));
    return BaryPoint(std::move(y));
}

const char* to_string(LabelRule r)
{
    switch (r)
    {
        case LabelRule::Corner: return "vertex-of-simplex";
        case LabelRule::Face: return "face";
        case LabelRule::Interior: return "interior";
        case LabelRule::Explicit: return "explicit";
    }
    return "?";
}

LabelRule position_rule(const LatticeVertex& v)
{
    const auto zeros = std::count(v.k.begin(), v.k.end(), 0);
    if (zeros == static_cast<long>(v.k.size()) - 1)
        return LabelRule::Corner;
    return zeros > 0 ? LabelRule::Face : LabelRule::Interior;
}

VertexLabel label_vertex(const SimplexMap& f, const BaryPoint& x, double tol_fix)
{
    if (!(tol_fix > 0.0))
        throw InvalidArgument("tol_fix must be positive");
    const BaryPoint fx = f(x);
    std::size_t best = 0;
    double best_gap = -std::numeric_limits<double>::infinity();
    double linf = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        const double gap = x[k] - fx[k];
        linf = std::max(linf, std::abs(gap));
        if (gap > best_gap)
        {
            best_gap = gap;
            best = k;
        }
    }
    if (linf <= tol_fix)
        return FixedPointHit{x, linf};
    if (!(best_gap > 0.0))
        throw MapRangeViolation("map range violation: '" + f.name() + "' moves a point without decreasing any coordinate");
    return static_cast<int>(best);
}

LabeledGrid::LabeledGrid(GridPtr grid, std::vector<int> labels, std::vector<LabelRule> provenance)
    : grid_(std::move(grid)), labels_(std::move(labels)), provenance_(std::move(provenance))
{
    if (!grid_)
        throw InvalidArgument("labeled grid needs a grid");
    if (labels_.size() != grid_->vertex_count() || provenance_.size() != grid_->vertex_count())
        throw InvalidArgument("labeled grid: expected " + std::to_string(grid_->vertex_count()) + " labels, got " +
                              std::to_string(labels_.size()));
}

std::vector<int> LabeledGrid::cell_labels(int cell) const
{
    std::vector<int> out;
    for (int v : grid_->cell_vertex_ids(cell))
        out.push_back(label(v));
    return out;
}

LabeledGrid explicit_labeling(GridPtr grid, std::vector<int> labels)
{
    std::vector<LabelRule> prov(labels.size(), LabelRule::Explicit);
    return LabeledGrid(std::move(grid), std::move(labels), std::move(prov));
}

GridLabeling label_grid(const SimplexMap& f, const GridPtr& grid, double tol_fix)
{
    std::vector<int> labels(grid->vertex_count());
    std::vector<LabelRule> prov(grid->vertex_count());
    for (std::size_t v = 0; v < grid->vertex_count(); ++v)
    {
        const auto& lv = grid->vertex(static_cast<int>(v));
        auto result = label_vertex(f, vertex_to_bary(lv, grid->mesh()), tol_fix);
        if (auto* hit = std::get_if<FixedPointHit>(&result))
            return std::move(*hit);
        labels[v] = std::get<int>(result);
        prov[v] = position_rule(lv);
    }
    return LabeledGrid(grid, std::move(labels), std::move(prov));
}

ConformanceReport validate_sperner(const LabeledGrid& lg)
{
    ConformanceReport report;
    const Grid& g = lg.grid();
    const int n = g.dim();
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
    {
        const auto& lv = g.vertex(static_cast<int>(v));
        const int label = lg.label(static_cast<int>(v));
        auto add = [&](int rule, std::string msg) {
            report.violations.push_back({static_cast<int>(v), lv, rule, label, std::move(msg)});
        };
        if (label < 0 || label > n)
        {
            add(4, "label " + std::to_string(label) + " at " + describe(lv) + " is outside 0.." + std::to_string(n));
            continue;
        }
        const auto rule = position_rule(lv);
        if (rule == LabelRule::Corner)
        {
            const int corner = static_cast<int>(std::find(lv.k.begin(), lv.k.end(), g.mesh()) - lv.k.begin());
            if (label != corner)
                add(1, "corner " + describe(lv) + " must carry label " + std::to_string(corner));
        }
        else if (lv.k[static_cast<std::size_t>(label)] == 0)
        {
            const auto zeros = std::count(lv.k.begin(), lv.k.end(), 0);
            add(zeros == 1 ? 2 : 3, "face vertex " + describe(lv) + " has zero coordinate " + std::to_string(label) +
                                        " but carries that label");
        }
    }
    return report;
}

LabeledGrid random_labeling(const GridPtr& grid, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<int> labels(grid->vertex_count());
    std::vector<LabelRule> prov(grid->vertex_count());
    std::vector<int> allowed;
    for (std::size_t v = 0; v < grid->vertex_count(); ++v)
    {
        const auto& lv = grid->vertex(static_cast<int>(v));
        allowed.clear();
        for (std::size_t i = 0; i < lv.k.size(); ++i)
            if (lv.k[i] > 0)
                allowed.push_back(static_cast<int>(i));
        prov[v] = position_rule(lv);
        if (allowed.size() == 1)
        {
            labels[v] = allowed.front();
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
        labels[v] = allowed[pick(rng)];
    }
    return LabeledGrid(grid, std::move(labels), std::move(prov));
}

LabeledGrid restrict_to_last_face(const LabeledGrid& lg)
{
    const int n = lg.dim();
    if (n < 2)
        throw InvalidArgument("face restriction needs n >= 2");
    auto face = make_grid(n - 1, lg.mesh());
    std::vector<int> labels(face->vertex_count());
    std::vector<LabelRule> prov(face->vertex_count());
    for (std::size_t v = 0; v < face->vertex_count(); ++v)
    {
        LatticeVertex up = face->vertex(static_cast<int>(v));
        up.k.push_back(0);
        const int id = lg.grid().vertex_id(up);
        labels[v] = lg.label(id);
        prov[v] = lg.provenance(id);
    }
    return LabeledGrid(std::move(face), std::move(labels), std::move(prov));
}

}  // namespace sperner
