#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sperner/bary_point.hpp"

namespace sperner {

/**
 * A vertex of the mesh-m subdivision: n+1 nonnegative integers summing to m.
 * The barycentric point is k / m.
 */
struct LatticeVertex
{
    std::vector<int> k;

    int dim() const { return static_cast<int>(k.size()) - 1; }
    int mesh() const;

    auto operator<=>(const LatticeVertex&) const = default;
};

/**
 * Kuhn (Freudenthal) simplex in the cumulative chart y_a = sum_{i > a} k_i,
 * a = 0..n-1, where the simplex becomes {m >= y_0 >= ... >= y_{n-1} >= 0}.
 * Vertices are base, base + e_{perm[0]}, base + e_{perm[0]} + e_{perm[1]}, ...
 */
struct KuhnCell
{
    std::vector<int> base;
    std::vector<int> perm;

    int dim() const { return static_cast<int>(base.size()); }

    auto operator<=>(const KuhnCell&) const = default;
};

/// A small simplex: its id in the owning grid (-1 when detached) and vertices.
struct Cell
{
    int id = -1;
    std::vector<LatticeVertex> vertices;
};

std::vector<int> to_chart(const LatticeVertex& v);
LatticeVertex from_chart(std::span<const int> y, int m);

/// Chart coordinates of the n+1 vertices of a Kuhn cell, in vertex order.
std::vector<std::vector<int>> kuhn_chart_vertices(const KuhnCell& c);
std::vector<LatticeVertex> kuhn_vertices(const KuhnCell& c, int m);

/// True when the Kuhn cell lies inside the mesh-m simplex.
bool kuhn_cell_valid(const KuhnCell& c, int m);

/// Neighbor across the facet opposite vertex `opposite`.
struct KuhnPivot
{
    KuhnCell cell;
    int new_vertex = 0;  ///< index in `cell` of the vertex not shared with the source
};

/**
 * Freudenthal pivot rule. The result may lie outside the simplex; check it
 * with kuhn_cell_valid.
 */
KuhnPivot kuhn_pivot(const KuhnCell& c, int opposite);

BaryPoint vertex_to_bary(const LatticeVertex& v, int m);

/// Sorted vertex ids of a facet.
using FacetKey = std::vector<int>;
/// Facet -> the one or two incident cells, ascending.
using FacetMap = std::map<FacetKey, std::vector<int>>;

/**
 * Equal subdivision of the standard n-simplex at mesh parameter m.
 *
 * Vertices are ordered lexicographically by chart coordinates (so vertex 0 is
 * the corner (m, 0, ..., 0)); cells by (base vertex, permutation).
 * Immutable after construction.
 */
class Grid
{
  public:
    Grid(int n, int m);

    int dim() const { return n_; }
    int mesh() const { return m_; }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t cell_count() const { return cells_.size(); }

    const LatticeVertex& vertex(int id) const { return vertices_.at(static_cast<std::size_t>(id)); }
    std::optional<int> find_vertex(const LatticeVertex& v) const;
    int vertex_id(const LatticeVertex& v) const;

    std::span<const int> cell_vertex_ids(int cell) const;
    const KuhnCell& kuhn_cell(int cell) const { return cells_.at(static_cast<std::size_t>(cell)); }
    Cell cell(int id) const;
    std::optional<int> find_cell(const KuhnCell& c) const;

    /// Cell across the facet opposite vertex `opposite`, or -1 on the boundary.
    int neighbor(int cell, int opposite) const;
    FacetKey facet_key(int cell, int opposite) const;

    std::span<const int> cells_at_vertex(int vertex) const;
    const FacetMap& facets() const { return facets_; }

  private:
    int n_;
    int m_;
    std::vector<LatticeVertex> vertices_;
    std::map<std::vector<int>, int> vertex_index_;
    std::vector<KuhnCell> cells_;
    std::map<KuhnCell, int> cell_index_;
    std::vector<int> cell_vertices_;   // (n+1) per cell
    std::vector<int> neighbors_;       // (n+1) per cell
    std::vector<std::vector<int>> vertex_cells_;
    FacetMap facets_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Throws DegenerateDimension for n == 0 and InvalidArgument for m < 1.
Grid build_grid(int n, int m);
GridPtr make_grid(int n, int m);

struct Location
{
    int cell = -1;
    std::vector<double> weights;  ///< barycentric weights w.r.t. the cell's vertex order
};

/**
 * Cell containing z and the weights of z in it. Points on shared faces go to
 * the containing cell with the smallest id.
 */
Location locate_point(const Grid& g, const BaryPoint& z);

const FacetMap& facet_adjacency(const Grid& g);

/// Max-norm diameter of a cell at mesh m (every edge has length 1/m).
inline double cell_diameter(int m) { return 1.0 / m; }

}  // namespace sperner
