#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "sperner/labeling.hpp"
#include "sperner/simplex_grid.hpp"

namespace sperner {

/// True iff the labels are exactly {0, 1, ..., labels.size() - 1}.
bool is_fully_labeled(std::span<const int> labels);

enum class Parity
{
    Even,
    Odd
};

const char* to_string(Parity p);

struct SearchResult
{
    std::vector<int> fully_labeled;        ///< cell ids, ascending
    Parity count_parity = Parity::Even;
    std::vector<std::vector<int>> paths;   ///< dual-graph node sequences (outside = cell_count)
};

/// Throws NonconformingLabeling unless validate_sperner(lg) is clean.
SearchResult enumerate_fully_labeled(const LabeledGrid& lg);

/// Plain undirected multigraph; a loop (u, u) adds 2 to the degree of u.
struct UndirectedGraph
{
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;
};

struct HandshakeReport
{
    int odd_degree_nodes = 0;
    long long degree_sum = 0;
    long long edge_count = 0;
    std::vector<int> degrees;

    /// Even number of odd-degree nodes and sum of degrees equals 2e.
    bool holds() const { return odd_degree_nodes % 2 == 0 && degree_sum == 2 * edge_count; }
};

HandshakeReport handshake_report(const UndirectedGraph& g);
bool check_handshake(const UndirectedGraph& g);

/**
 * Cells plus one outside node joined across doors, the facets labeled
 * exactly {0, ..., n-1}. Node ids: cells 0..C-1, outside = C.
 */
class DualGraph
{
  public:
    DualGraph(int cell_count, std::vector<std::pair<int, int>> edges);

    int outside() const { return cell_count_; }
    int node_count() const { return cell_count_ + 1; }
    int degree(int node) const { return static_cast<int>(adjacency_.at(static_cast<std::size_t>(node)).size()); }
    /// Neighbors of a node, one entry per edge, ascending.
    std::span<const int> neighbors(int node) const { return adjacency_.at(static_cast<std::size_t>(node)); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    /// Number of nodes with each degree (index = degree).
    std::vector<int> degree_histogram() const;
    UndirectedGraph as_graph() const { return {node_count(), edges_}; }

  private:
    int cell_count_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

/// Throws NonconformingLabeling on a labeling that breaks the rules.
DualGraph build_dual_graph(const LabeledGrid& lg);

struct PathFollowResult
{
    int cell = -1;                          ///< a fully labeled cell
    std::vector<std::vector<int>> paths;    ///< every walk started from outside, in order
    std::size_t steps = 0;                  ///< dual-graph edges traversed in total
};

/**
 * Walks from the outside node through doors, always taking the lowest-id
 * unused edge, until it reaches a degree-1 cell. A walk that comes back out
 * through another boundary door is followed by a walk from the next one.
 */
PathFollowResult path_follow(const LabeledGrid& lg);

/**
 * Result of following the face chain without materializing a grid: a fully
 * labeled n-cell, with its vertex labels in cell vertex order.
 */
struct ChainWalkResult
{
    KuhnCell cell;
    std::vector<int> labels;
    std::size_t pivots = 0;
};

/// Labels a lattice vertex given in chart coordinates.
using ChartLabeler = std::function<VertexLabel(std::span<const int> chart)>;

/**
 * Lazy path following over the whole face chain F_0 c F_1 c ... c F_n,
 * F_d = {x_{d+1} = ... = x_n = 0}. Starting at the corner (m, 0, ..., 0) it
 * walks through doors inside F_d, climbs to F_{d+1} at a fully labeled
 * d-cell, and drops back to F_{d-1} when a walk reaches the face x_d = 0.
 * Every node on the chain has degree two except the corner and the fully
 * labeled n-cells, so the walk ends at one of those. Only the vertices on the
 * path are labeled; a FixedPointHit from the labeler stops the walk.
 */
std::variant<ChainWalkResult, FixedPointHit> walk_face_chain(int n, int m, const ChartLabeler& labeler);

}  // namespace sperner
