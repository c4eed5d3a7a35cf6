#include "sperner/simplex_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sperner/errors.hpp"

namespace sperner {

namespace {

constexpr double kLocateTol = 1e-12;

// Non-increasing sequences of length n with entries in [0, top], lexicographic.
void non_increasing(int n, int top, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(cur.size()) == n)
    {
        out.push_back(cur);
        return;
    }
    const int hi = cur.empty() ? top : cur.back();
    for (int v = 0; v <= hi; ++v)
    {
        cur.push_back(v);
        non_increasing(n, top, cur, out);
        cur.pop_back();
    }
}

std::vector<double> weights_in(const KuhnCell& c, std::span<const double> y)
{
    const int n = c.dim();
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    auto u = [&](int axis) { return y[static_cast<std::size_t>(axis)] - c.base[static_cast<std::size_t>(axis)]; };
    w[0] = 1.0 - u(c.perm[0]);
    for (int i = 1; i < n; ++i)
        w[static_cast<std::size_t>(i)] = u(c.perm[static_cast<std::size_t>(i) - 1]) - u(c.perm[static_cast<std::size_t>(i)]);
    w[static_cast<std::size_t>(n)] = u(c.perm[static_cast<std::size_t>(n) - 1]);
    return w;
}

}  // namespace

int LatticeVertex::mesh() const
{
    return std::accumulate(k.begin(), k.end(), 0);
}

std::vector<int> to_chart(const LatticeVertex& v)
{
    const int n = v.dim();
    std::vector<int> y(static_cast<std::size_t>(n), 0);
    int acc = 0;
    for (int a = n - 1; a >= 0; --a)
    {
        acc += v.k[static_cast<std::size_t>(a) + 1];
        y[static_cast<std::size_t>(a)] = acc;
    }
    return y;
}

LatticeVertex from_chart(std::span<const int> y, int m)
{
    const std::size_t n = y.size();
    LatticeVertex v;
    v.k.resize(n + 1);
    v.k[0] = m - (n > 0 ? y[0] : 0);
    for (std::size_t a = 0; a < n; ++a)
        v.k[a + 1] = y[a] - (a + 1 < n ? y[a + 1] : 0);
    return v;
}

std::vector<std::vector<int>> kuhn_chart_vertices(const KuhnCell& c)
{
    std::vector<std::vector<int>> out;
    out.reserve(c.base.size() + 1);
    std::vector<int> y = c.base;
    out.push_back(y);
    for (int axis : c.perm)
    {
        ++y[static_cast<std::size_t>(axis)];
        out.push_back(y);
    }
    return out;
}

std::vector<LatticeVertex> kuhn_vertices(const KuhnCell& c, int m)
{
    std::vector<LatticeVertex> out;
    for (const auto& y : kuhn_chart_vertices(c))
        out.push_back(from_chart(y, m));
    return out;
}

bool kuhn_cell_valid(const KuhnCell& c, int m)
{
    const std::size_t n = c.base.size();
    if (n == 0 || c.perm.size() != n)
        return false;
    if (c.base.front() > m - 1 || c.base.back() < 0)
        return false;
    std::vector<int> pos(n);
    for (std::size_t i = 0; i < n; ++i)
        pos[static_cast<std::size_t>(c.perm[i])] = static_cast<int>(i);
    for (std::size_t a = 0; a + 1 < n; ++a)
    {
        if (c.base[a] < c.base[a + 1])
            return false;
        if (c.base[a] == c.base[a + 1] && pos[a] > pos[a + 1])
            return false;
    }
    return true;
}

KuhnPivot kuhn_pivot(const KuhnCell& c, int opposite)
{
    const int n = c.dim();
    KuhnPivot p{c, opposite};
    auto& base = p.cell.base;
    auto& perm = p.cell.perm;
    if (opposite == 0)
    {
        ++base[static_cast<std::size_t>(c.perm.front())];
        std::rotate(perm.begin(), perm.begin() + 1, perm.end());
        p.new_vertex = n;
    }
    else if (opposite == n)
    {
        --base[static_cast<std::size_t>(c.perm.back())];
        std::rotate(perm.begin(), perm.end() - 1, perm.end());
        p.new_vertex = 0;
    }
    else
    {
        std::swap(perm[static_cast<std::size_t>(opposite) - 1], perm[static_cast<std::size_t>(opposite)]);
    }
    return p;
}

BaryPoint vertex_to_bary(const LatticeVertex& v, int m)
{
    std::vector<double> c(v.k.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = static_cast<double>(v.k[i]) / m;
    return BaryPoint(std::move(c));
}

Grid::Grid(int n, int m) : n_(n), m_(m)
{
    if (n < 1)
        throw DegenerateDimension("degenerate dimension: grid needs n >= 1, got " + std::to_string(n));
    if (m < 1)
        throw InvalidArgument("mesh parameter must be >= 1, got " + std::to_string(m));

    std::vector<std::vector<int>> charts;
    std::vector<int> cur;
    non_increasing(n, m, cur, charts);
    vertices_.reserve(charts.size());
    for (const auto& y : charts)
    {
        vertex_index_.emplace(from_chart(y, m).k, static_cast<int>(vertices_.size()));
        vertices_.push_back(from_chart(y, m));
    }

    std::vector<std::vector<int>> bases;
    non_increasing(n, m - 1, cur, bases);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (const auto& b : bases)
    {
        std::iota(perm.begin(), perm.end(), 0);
        do
        {
            KuhnCell c{b, perm};
            if (kuhn_cell_valid(c, m))
            {
                cell_index_.emplace(c, static_cast<int>(cells_.size()));
                cells_.push_back(std::move(c));
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    const std::size_t stride = static_cast<std::size_t>(n) + 1;
    cell_vertices_.reserve(cells_.size() * stride);
    vertex_cells_.resize(vertices_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c)
        for (const auto& y : kuhn_chart_vertices(cells_[c]))
        {
            const int vid = vertex_index_.at(from_chart(y, m).k);
            cell_vertices_.push_back(vid);
            vertex_cells_[static_cast<std::size_t>(vid)].push_back(static_cast<int>(c));
        }

    for (std::size_t c = 0; c < cells_.size(); ++c)
        for (int j = 0; j <= n; ++j)
            facets_[facet_key(static_cast<int>(c), j)].push_back(static_cast<int>(c));

    neighbors_.assign(cells_.size() * stride, -1);
    for (std::size_t c = 0; c < cells_.size(); ++c)
        for (int j = 0; j <= n; ++j)
        {
            const auto& inc = facets_.at(facet_key(static_cast<int>(c), j));
            for (int other : inc)
                if (other != static_cast<int>(c))
                    neighbors_[c * stride + static_cast<std::size_t>(j)] = other;
        }
}

std::optional<int> Grid::find_vertex(const LatticeVertex& v) const
{
    auto it = vertex_index_.find(v.k);
    if (it == vertex_index_.end())
        return std::nullopt;
    return it->second;
}

int Grid::vertex_id(const LatticeVertex& v) const
{
    auto id = find_vertex(v);
    if (!id)
        throw InvalidArgument("not a lattice vertex of this grid");
    return *id;
}

std::span<const int> Grid::cell_vertex_ids(int cell) const
{
    const std::size_t stride = static_cast<std::size_t>(n_) + 1;
    return std::span<const int>(cell_vertices_).subspan(static_cast<std::size_t>(cell) * stride, stride);
}

Cell Grid::cell(int id) const
{
    Cell c{id, {}};
    for (int v : cell_vertex_ids(id))
        c.vertices.push_back(vertex(v));
    return c;
}

std::optional<int> Grid::find_cell(const KuhnCell& c) const
{
    auto it = cell_index_.find(c);
    if (it == cell_index_.end())
        return std::nullopt;
    return it->second;
}

int Grid::neighbor(int cell, int opposite) const
{
    return neighbors_.at(static_cast<std::size_t>(cell) * (static_cast<std::size_t>(n_) + 1) +
                         static_cast<std::size_t>(opposite));
}

FacetKey Grid::facet_key(int cell, int opposite) const
{
    FacetKey key;
    auto ids = cell_vertex_ids(cell);
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (static_cast<int>(i) != opposite)
            key.push_back(ids[i]);
    std::sort(key.begin(), key.end());
    return key;
}

std::span<const int> Grid::cells_at_vertex(int vertex) const
{
    return vertex_cells_.at(static_cast<std::size_t>(vertex));
}

Grid build_grid(int n, int m)
{
    return Grid(n, m);
}

GridPtr make_grid(int n, int m)
{
    return std::make_shared<const Grid>(n, m);
}

Location locate_point(const Grid& g, const BaryPoint& z)
{
    const int n = g.dim();
    const int m = g.mesh();
    if (z.dim() != n)
        throw InvalidArgument("point dimension " + std::to_string(z.dim()) + " does not match grid dimension " +
                              std::to_string(n));

    std::vector<double> y(static_cast<std::size_t>(n));
    double acc = 0.0;
    for (int a = n - 1; a >= 0; --a)
    {
        acc += z[static_cast<std::size_t>(a) + 1];
        double ya = m * acc;
        const double r = std::round(ya);
        if (std::abs(ya - r) <= kLocateTol * std::max(1, m))
            ya = r;
        y[static_cast<std::size_t>(a)] = ya;
    }

    KuhnCell guess;
    guess.base.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
        guess.base[static_cast<std::size_t>(a)] =
            std::clamp(static_cast<int>(std::floor(y[static_cast<std::size_t>(a)])), 0, m - 1);
    guess.perm.resize(static_cast<std::size_t>(n));
    std::iota(guess.perm.begin(), guess.perm.end(), 0);
    std::stable_sort(guess.perm.begin(), guess.perm.end(), [&](int a, int b) {
        return y[static_cast<std::size_t>(a)] - guess.base[static_cast<std::size_t>(a)] >
               y[static_cast<std::size_t>(b)] - guess.base[static_cast<std::size_t>(b)];
    });
    const auto analytic = g.find_cell(guess);
    if (!analytic)
        throw PointOutsideSimplex("point outside simplex: no containing cell");

    // Any cell containing z contains the face carrying z, hence the
    // heaviest-weight vertex of the analytic cell.
    const auto w0 = weights_in(guess, y);
    const auto heaviest = static_cast<std::size_t>(std::max_element(w0.begin(), w0.end()) - w0.begin());
    const int pivot_vertex = g.cell_vertex_ids(*analytic)[heaviest];

    Location loc;
    for (int c : g.cells_at_vertex(pivot_vertex))
    {
        auto w = weights_in(g.kuhn_cell(c), y);
        if (std::all_of(w.begin(), w.end(), [](double x) { return x >= -kLocateTol; }))
        {
            loc.cell = c;
            loc.weights = std::move(w);
            break;
        }
    }
    if (loc.cell < 0)
    {
        loc.cell = *analytic;
        loc.weights = w0;
    }
    double sum = 0.0;
    for (double& w : loc.weights)
    {
        w = std::max(w, 0.0);
        sum += w;
    }
    for (double& w : loc.weights)
        w /= sum;
    return loc;
}

const FacetMap& facet_adjacency(const Grid& g)
{
    return g.facets();
}

}  // namespace sperner
