#pragma once

#include <vector>

#include "sperner/bary_point.hpp"
#include "sperner/labeling.hpp"

namespace sperner {

/// Cyclic shift (x_0, ..., x_n) -> (x_n, x_0, ..., x_{n-1}); fixed point is the barycenter.
SimplexMap rotation_map(int n);

SimplexMap identity_map(int n);

/// x -> c for a fixed c in the simplex.
SimplexMap constant_map(const BaryPoint& c);

/**
 * x -> A x for a column-stochastic (n+1)x(n+1) matrix given row-major.
 * Throws InvalidArgument if a column has a negative entry or does not sum to 1.
 */
SimplexMap affine_stochastic_map(int n, const std::vector<double>& row_major);

/**
 * One-dimensional map t -> p(t) on x = (1 - t, t), with p given by ascending
 * coefficients. Throws InvalidArgument unless p([0,1]) is contained in [0,1].
 */
SimplexMap poly1d_map(const std::vector<double>& coeffs);

double poly_eval(const std::vector<double>& coeffs, double t);

/**
 * Bounds p over [0,1] by centered Taylor forms on a bisection of the interval.
 * Returns true when p([0,1]) is proved to lie in [-tol, 1 + tol].
 */
bool poly_range_in_unit(const std::vector<double>& coeffs, double tol = 1e-12);

}  // namespace sperner
