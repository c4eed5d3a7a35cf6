#include "sperner/sperner_search.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "sperner/errors.hpp"

namespace sperner {

namespace {

void require_conforming(const LabeledGrid& lg)
{
    const auto report = validate_sperner(lg);
    if (!report.ok())
        throw NonconformingLabeling("nonconforming labeling: " + std::to_string(report.violations.size()) +
                                    " rule violation(s), first: " + report.violations.front().message);
}

bool is_door(const LabeledGrid& lg, const FacetKey& facet)
{
    std::vector<int> labels;
    labels.reserve(facet.size());
    for (int v : facet)
        labels.push_back(lg.label(v));
    return is_fully_labeled(labels);
}

}  // namespace

bool is_fully_labeled(std::span<const int> labels)
{
    std::vector<bool> seen(labels.size(), false);
    for (int l : labels)
    {
        if (l < 0 || static_cast<std::size_t>(l) >= labels.size() || seen[static_cast<std::size_t>(l)])
            return false;
        seen[static_cast<std::size_t>(l)] = true;
    }
    return true;
}

const char* to_string(Parity p)
{
    return p == Parity::Odd ? "odd" : "even";
}

SearchResult enumerate_fully_labeled(const LabeledGrid& lg)
{
    require_conforming(lg);
    SearchResult result;
    for (std::size_t c = 0; c < lg.grid().cell_count(); ++c)
        if (is_fully_labeled(lg.cell_labels(static_cast<int>(c))))
            result.fully_labeled.push_back(static_cast<int>(c));
    result.count_parity = result.fully_labeled.size() % 2 ? Parity::Odd : Parity::Even;
    return result;
}

HandshakeReport handshake_report(const UndirectedGraph& g)
{
    HandshakeReport r;
    r.degrees.assign(static_cast<std::size_t>(g.node_count), 0);
    for (const auto& [u, v] : g.edges)
    {
        ++r.degrees.at(static_cast<std::size_t>(u));
        ++r.degrees.at(static_cast<std::size_t>(v));
    }
    r.edge_count = static_cast<long long>(g.edges.size());
    for (int d : r.degrees)
    {
        r.degree_sum += d;
        r.odd_degree_nodes += d % 2;
    }
    return r;
}

bool check_handshake(const UndirectedGraph& g)
{
    return handshake_report(g).holds();
}

DualGraph::DualGraph(int cell_count, std::vector<std::pair<int, int>> edges)
    : cell_count_(cell_count), edges_(std::move(edges)), adjacency_(static_cast<std::size_t>(cell_count) + 1)
{
    for (const auto& [u, v] : edges_)
    {
        adjacency_.at(static_cast<std::size_t>(u)).push_back(v);
        adjacency_.at(static_cast<std::size_t>(v)).push_back(u);
    }
    for (auto& adj : adjacency_)
        std::sort(adj.begin(), adj.end());
}

std::vector<int> DualGraph::degree_histogram() const
{
    std::vector<int> hist;
    for (const auto& adj : adjacency_)
    {
        if (hist.size() <= adj.size())
            hist.resize(adj.size() + 1, 0);
        ++hist[adj.size()];
    }
    return hist;
}

DualGraph build_dual_graph(const LabeledGrid& lg)
{
    require_conforming(lg);
    const Grid& g = lg.grid();
    const int outside = static_cast<int>(g.cell_count());
    std::vector<std::pair<int, int>> edges;
    for (const auto& [facet, cells] : g.facets())
    {
        if (!is_door(lg, facet))
            continue;
        if (cells.size() == 2)
            edges.emplace_back(cells[0], cells[1]);
        else
            edges.emplace_back(cells[0], outside);
    }
    return DualGraph(outside, std::move(edges));
}

PathFollowResult path_follow(const LabeledGrid& lg)
{
    const DualGraph graph = build_dual_graph(lg);
    const int outside = graph.outside();
    if (graph.degree(outside) == 0)
        throw NoBoundaryDoor("no boundary door on the face x_n = 0");

    std::set<std::pair<int, int>> used;
    auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    auto next_unused = [&](int node) {
        for (int nb : graph.neighbors(node))
            if (!used.contains(key(node, nb)))
                return nb;
        return -1;
    };

    PathFollowResult result;
    while (true)
    {
        const int first = next_unused(outside);
        if (first < 0)
            throw std::logic_error("path_follow: every boundary door led back outside");
        std::vector<int> path{outside};
        int cur = outside;
        int nxt = first;
        while (true)
        {
            used.insert(key(cur, nxt));
            ++result.steps;
            cur = nxt;
            path.push_back(cur);
            if (cur == outside)
                break;
            if (graph.degree(cur) == 1)
            {
                result.cell = cur;
                result.paths.push_back(std::move(path));
                return result;
            }
            nxt = next_unused(cur);
            if (nxt < 0)
                throw std::logic_error("path_follow: dead end at a degree-2 cell");
        }
        result.paths.push_back(std::move(path));
    }
}

std::variant<ChainWalkResult, FixedPointHit> walk_face_chain(int n, int m, const ChartLabeler& labeler)
{
    if (n < 1)
        throw DegenerateDimension("degenerate dimension: walk needs n >= 1");
    if (m < 1)
        throw InvalidArgument("mesh parameter must be >= 1");

    // Upper bound on the number of nodes of the chain graph.
    double node_bound = 1.0;
    for (int d = 1; d <= n; ++d)
        node_bound += std::pow(static_cast<double>(m), d);

    std::vector<int> chart(static_cast<std::size_t>(n), 0);
    auto chart_of = [&](const KuhnCell& c, int index) -> std::span<const int> {
        std::fill(chart.begin(), chart.end(), 0);
        std::copy(c.base.begin(), c.base.end(), chart.begin());
        for (int i = 0; i < index; ++i)
            ++chart[static_cast<std::size_t>(c.perm[static_cast<std::size_t>(i)])];
        return chart;
    };

    {
        auto corner = labeler(chart);
        if (auto* hit = std::get_if<FixedPointHit>(&corner))
            return std::move(*hit);
        if (std::get<int>(corner) != 0)
            throw NonconformingLabeling("nonconforming labeling: corner (m,0,...,0) must carry label 0");
    }

    int d = 1;
    KuhnCell cell{{0}, {0}};
    std::vector<int> labels{0, -1};
    int enter = 1;
    std::size_t pivots = 0;

    while (true)
    {
        // Arrive at `cell` in F_d through the door opposite `enter`.
        auto lab = labeler(chart_of(cell, enter));
        if (auto* hit = std::get_if<FixedPointHit>(&lab))
            return std::move(*hit);
        const int label = std::get<int>(lab);
        if (label < 0 || label > d)
            throw NonconformingLabeling("nonconforming labeling: label " + std::to_string(label) +
                                        " on the face of dimension " + std::to_string(d));
        labels[static_cast<std::size_t>(enter)] = label;

        if (label == d)
        {
            if (d == n)
                return ChainWalkResult{std::move(cell), std::move(labels), pivots};
            cell.base.push_back(0);
            cell.perm.push_back(d);
            labels.push_back(-1);
            ++d;
            enter = d;
            continue;
        }

        int exit = -1;
        for (int j = 0; j <= d; ++j)
            if (j != enter && labels[static_cast<std::size_t>(j)] == label)
                exit = j;

        while (true)
        {
            if (static_cast<double>(++pivots) > node_bound)
                throw std::logic_error("walk_face_chain: exceeded the node count of the chain graph");
            KuhnPivot p = kuhn_pivot(cell, exit);
            if (kuhn_cell_valid(p.cell, m))
            {
                if (exit == 0)
                {
                    std::rotate(labels.begin(), labels.begin() + 1, labels.end());
                    labels.back() = -1;
                }
                else if (exit == d)
                {
                    std::rotate(labels.begin(), labels.end() - 1, labels.end());
                    labels.front() = -1;
                }
                else
                {
                    labels[static_cast<std::size_t>(exit)] = -1;
                }
                cell = std::move(p.cell);
                enter = p.new_vertex;
                break;
            }
            // Leaving F_d: legal only through the face x_d = 0, i.e. the
            // facet opposite the last vertex when it is the only one with y_{d-1} = 1.
            const auto last = static_cast<std::size_t>(d) - 1;
            if (exit != d || cell.base[last] != 0 || cell.perm[last] != d - 1)
                throw NonconformingLabeling("nonconforming labeling: a door lies on a face other than x_" +
                                            std::to_string(d) + " = 0");
            if (d == 1)
                throw std::logic_error("walk_face_chain: walk returned to the starting corner");
            cell.base.pop_back();
            cell.perm.pop_back();
            labels.pop_back();
            --d;
            exit = static_cast<int>(std::find(labels.begin(), labels.end(), d) - labels.begin());
        }
    }
}

}  // namespace sperner
