#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sperner/bary_point.hpp"
#include "sperner/fixpoint_solver.hpp"
#include "sperner/labeling.hpp"

namespace sperner {

/**
 * Piecewise-linear self-map built from a conforming labeling. A vertex x with
 * label l is sent to x - tau e_l + (tau / n) (1 - e_l), i.e. coordinate l drops
 * by tau and every other coordinate gains tau / n. Points inside a cell map to
 * the same convex combination of the vertex images.
 *
 * The only fixed points are the barycenters of fully labeled cells. In a cell
 * missing label i, f_i(z) - z_i = tau / n everywhere.
 */
class PLMap
{
  public:
    PLMap(LabeledGrid lg, double tau, std::vector<BaryPoint> images);

    const LabeledGrid& labeled_grid() const { return state_->lg; }
    int dim() const { return state_->lg.dim(); }
    double tau() const { return state_->tau; }
    const BaryPoint& image(int vertex) const { return state_->images.at(static_cast<std::size_t>(vertex)); }

    BaryPoint operator()(const BaryPoint& z) const;

    /// A SimplexMap sharing this map's state.
    SimplexMap as_simplex_map() const;

  private:
    struct State
    {
        LabeledGrid lg;
        double tau;
        std::vector<BaryPoint> images;
    };
    std::shared_ptr<const State> state_;
};

/// Smallest labeled coordinate x_{l(x)} over all vertices; tau must stay below it.
double tau_upper_bound(const LabeledGrid& lg);

/**
 * Builds the PL map. Without tau, uses half of tau_upper_bound. Throws
 * NonconformingLabeling, TauTooLarge (tau >= bound) or InvalidArgument (tau <= 0).
 */
PLMap build_pl_map(const LabeledGrid& lg, std::optional<double> tau = std::nullopt);

BaryPoint eval_pl(const PLMap& map, const BaryPoint& z);

/**
 * Solves sum_j w_j (f(x^j) - x^j) = 0, sum_j w_j = 1 on one cell by least
 * squares. Returns the point when the system is consistent with w >= 0 (only
 * on fully labeled cells, where w_j = 1/(n+1)); nullopt otherwise.
 */
std::optional<BaryPoint> pl_fixpoint_exact(const PLMap& map, int cell);

struct ReverseResult
{
    int cell = -1;               ///< cell of the base grid holding the fixed point
    std::vector<double> point;   ///< fixed point returned by the solver
    double tau = 0.0;
    ApproxFixedPoint solution;
    bool fully_labeled = false;
    bool in_enumeration = false;
};

/**
 * Runs the generic solver on the PL map (meshes m0, 2 m0, 4 m0, ... so the
 * finer grids nest in the PL pieces), locates the returned point in the base
 * grid and checks that its cell is fully labeled and enumerated.
 * Throws NotConverged if the solver does not reach the target.
 */
ReverseResult fully_labeled_from_fixpoint(const LabeledGrid& lg, const SolverConfig& cfg = {},
                                          std::optional<double> tau = std::nullopt);

}  // namespace sperner
