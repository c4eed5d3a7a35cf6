#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sperner {

/// Tolerance used to reject points that are clearly outside the simplex.
inline constexpr double kOutsideTol = 1e-9;
/// Tolerance on the coordinate sum after construction.
inline constexpr double kSumTol = 1e-12;

/**
 * A point of the standard n-simplex in barycentric coordinates.
 *
 * Construction clamps coordinates in [-1e-9, 0) to zero and rescales when the
 * sum is off by more than 1e-12; anything further out throws
 * PointOutsideSimplex. Afterwards every entry is >= 0 and the entries sum to
 * one within 1e-12.
 */
class BaryPoint
{
  public:
    explicit BaryPoint(std::vector<double> coords);

    /// Point with all n+1 coordinates equal to 1/(n+1).
    static BaryPoint barycenter(int n);
    /// The k-th corner of the n-simplex.
    static BaryPoint corner(int n, int k);

    int dim() const { return static_cast<int>(coords_.size()) - 1; }
    std::size_t size() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const { return coords_; }
    const std::vector<double>& vec() const { return coords_; }

    bool operator==(const BaryPoint& other) const = default;

  private:
    std::vector<double> coords_;
};

/// Max-norm distance between two points of the same dimension.
double distance_inf(std::span<const double> a, std::span<const double> b);
/// l1 distance between two points of the same dimension.
double distance_l1(std::span<const double> a, std::span<const double> b);

}  // namespace sperner
