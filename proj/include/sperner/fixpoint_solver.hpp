#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sperner/bary_point.hpp"
#include "sperner/labeling.hpp"
#include "sperner/simplex_grid.hpp"

namespace sperner {

struct Residual
{
    double linf = 0.0;
    double l1 = 0.0;
};

/// ||f(x) - x|| in the max and l1 norms.
Residual residual(const SimplexMap& f, const BaryPoint& x);

/**
 * Largest max-norm spread of the cell's vertices and of their images,
 * inflated by (1 + 1e-12) so it can be used in strict inequalities.
 */
double cell_epsilon(const SimplexMap& f, std::span<const LatticeVertex> vertices, int m);
double cell_epsilon(const SimplexMap& f, const Cell& cell, int m);

/// One inequality family checked at the label-0 vertex.
struct BoundCheck
{
    std::string name;     ///< e1, e2, e3, e24, fp
    double worst_slack;   ///< min over the family of (rhs - lhs); > 0 means strict inequality holds
    bool holds;
};

struct BoundReport
{
    double epsilon = 0.0;
    std::vector<double> anchor;      ///< the vertex labeled 0
    std::vector<double> anchor_image;
    double residual_l1 = 0.0;
    double bound = 0.0;               ///< 2 n (n+1) epsilon
    std::vector<BoundCheck> checks;

    bool holds() const;
};

/**
 * Evaluates the chain of estimates at the vertex labeled 0 of a fully labeled
 * cell (labels[i] is the label of cell.vertices[i]):
 *   e1   x_i > f_i - 2 eps             (i != 0)
 *   e2   x_0 > f_0
 *   e3   |x_k - f_k| < max(2, 2(n-1)) eps   (k != 0)
 *   e24  |f_0 - x_0| < 2 n eps
 *   fp   ||f(x) - x||_1 < 2 n (n+1) eps
 * Never throws on failure; see verify_residual_bound.
 */
BoundReport check_residual_bound(const SimplexMap& f, std::span<const LatticeVertex> vertices,
                                 std::span<const int> labels, int m);

/// Same as check_residual_bound but throws BoundViolated when any family fails.
BoundReport verify_residual_bound(const SimplexMap& f, const Cell& cell, std::span<const int> labels, int m);

struct SolverConfig
{
    double residual_tol = 1e-6;
    /// Mesh parameters to visit; empty means 2, 4, 8, ... up to m_max.
    std::vector<int> m_schedule;
    int m_max = 1 << 22;
    double tol_fix = kDefaultTolFix;
    /// Grids with at most this many cells are materialized; finer levels use
    /// the lazy face-chain walk.
    long long materialize_limit = 1 << 14;
    /// Keep refining through the whole schedule even after meeting residual_tol.
    bool run_all_levels = false;

    /// Throws InvalidArgument on a bad configuration.
    void validate() const;
    std::vector<int> schedule() const;
};

struct LevelRecord
{
    int m = 0;
    double cell_diameter = 0.0;
    double epsilon = 0.0;
    double residual = 0.0;
    double residual_l1 = 0.0;
    double bound = 0.0;            ///< 2 n (n+1) epsilon
    bool bound_holds = true;
    bool vertex_hit = false;       ///< the level stopped on a FixedPointHit
    bool materialized = true;
    long long path_steps = 0;
    std::vector<double> candidate;
    Cell cell;
};

struct ApproxFixedPoint
{
    std::vector<double> point;
    double residual = 0.0;
    double residual_l1 = 0.0;
    int m_final = 0;
    Cell cell;
    bool vertex_hit = false;
    bool converged = false;
    bool non_contracting = false;
    std::vector<LevelRecord> trace;
};

/**
 * Refines the subdivision along the schedule. At each level: label from f,
 * path-follow to a fully labeled cell, check the residual bound chain, and
 * take the cell's barycenter as candidate. Stops once the candidate's max-norm
 * residual is <= residual_tol. When the schedule is exhausted the best
 * candidate is returned with converged = false.
 */
ApproxFixedPoint solve(const SimplexMap& f, const SolverConfig& cfg = {});

struct CauchyReport
{
    std::vector<int> meshes;           ///< mesh of the finer level of each pair
    std::vector<double> distances;     ///< max-norm distance between successive candidates
    double rate_constant = 0.0;        ///< smallest C with distance_j <= C / m_j
    int monotone_from = 0;             ///< first index of the non-increasing tail
    bool eventually_monotone = false;  ///< the non-increasing tail covers at least half the pairs
    bool final_within_two_mesh = false;///< last distance <= 2 / m_final
    bool trivial = false;              ///< fewer than two levels

    bool contracting() const { return trivial || (eventually_monotone && final_within_two_mesh); }
};

CauchyReport extract_cauchy(std::span<const LevelRecord> trace);

}  // namespace sperner
