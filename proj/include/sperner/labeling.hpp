#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sperner/bary_point.hpp"
#include "sperner/simplex_grid.hpp"

namespace sperner {

/// Gaps below this are treated as an exact fixed point at a vertex.
inline constexpr double kDefaultTolFix = 1e-12;

/**
 * A self-map of the n-simplex. Every evaluation checks that the output is a
 * point of the simplex (entries >= -1e-12, sum within 1e-12 of one) and
 * throws MapRangeViolation otherwise. The callable must be pure.
 */
class SimplexMap
{
  public:
    using Fn = std::function<std::vector<double>(std::span<const double>)>;

    SimplexMap(std::string name, int dim, Fn fn);

    BaryPoint operator()(const BaryPoint& x) const;

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }

  private:
    std::string name_;
    int dim_;
    Fn fn_;
};

/// Which labeling rule applies to a vertex.
enum class LabelRule
{
    Corner,    ///< vertex of the simplex, rule (1)
    Face,      ///< on a proper face, rules (2)-(3)
    Interior,  ///< rule (4)
    Explicit,  ///< supplied by the caller
};

const char* to_string(LabelRule r);
LabelRule position_rule(const LatticeVertex& v);

/// A vertex where f(x) is within tol_fix of x in the max norm.
struct FixedPointHit
{
    BaryPoint vertex;
    double residual = 0.0;
};

using VertexLabel = std::variant<int, FixedPointHit>;

/**
 * Labels x with the coordinate where x exceeds f(x) the most (smallest index
 * on ties). If ||f(x) - x||_inf <= tol_fix, returns a FixedPointHit instead.
 */
VertexLabel label_vertex(const SimplexMap& f, const BaryPoint& x, double tol_fix = kDefaultTolFix);

/// A grid plus one label per lattice vertex (indexed by vertex id).
class LabeledGrid
{
  public:
    LabeledGrid(GridPtr grid, std::vector<int> labels, std::vector<LabelRule> provenance);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int dim() const { return grid_->dim(); }
    int mesh() const { return grid_->mesh(); }

    int label(int vertex) const { return labels_.at(static_cast<std::size_t>(vertex)); }
    int label(const LatticeVertex& v) const { return label(grid_->vertex_id(v)); }
    std::span<const int> labels() const { return labels_; }
    LabelRule provenance(int vertex) const { return provenance_.at(static_cast<std::size_t>(vertex)); }

    /// Labels of a cell's vertices in the cell's vertex order.
    std::vector<int> cell_labels(int cell) const;

  private:
    GridPtr grid_;
    std::vector<int> labels_;
    std::vector<LabelRule> provenance_;
};

/// Wraps caller-supplied labels; provenance is Explicit everywhere.
LabeledGrid explicit_labeling(GridPtr grid, std::vector<int> labels);

using GridLabeling = std::variant<LabeledGrid, FixedPointHit>;

/// Labels every vertex in id order; stops at the first FixedPointHit.
GridLabeling label_grid(const SimplexMap& f, const GridPtr& grid, double tol_fix = kDefaultTolFix);

struct RuleViolation
{
    int vertex = -1;
    LatticeVertex position;
    int rule = 0;  ///< 1, 2 or 3 as in the corner/face rules; 4 for labels out of range
    int label = 0;
    std::string message;
};

struct ConformanceReport
{
    std::vector<RuleViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Never throws; an empty report means the labeling conforms.
ConformanceReport validate_sperner(const LabeledGrid& lg);

/**
 * Seeded conforming labeling: corners forced, face vertices uniform over the
 * labels of their nonzero coordinates, interior uniform over {0..n}.
 */
LabeledGrid random_labeling(const GridPtr& grid, std::uint64_t seed);

/**
 * The induced (n-1)-dimensional labeled grid on the face x_n = 0 (the face
 * whose corners carry 0..n-1). Requires n >= 2.
 */
LabeledGrid restrict_to_last_face(const LabeledGrid& lg);

}  // namespace sperner
