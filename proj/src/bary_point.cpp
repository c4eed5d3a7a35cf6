#include "sperner/bary_point.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sperner/errors.hpp"

namespace sperner {

BaryPoint::BaryPoint(std::vector<double> coords) : coords_(std::move(coords))
{
    if (coords_.empty())
        throw PointOutsideSimplex("barycentric point needs at least one coordinate");
    for (std::size_t i = 0; i < coords_.size(); ++i)
    {
        const double c = coords_[i];
        if (!std::isfinite(c) || c < -kOutsideTol)
            throw PointOutsideSimplex("point outside simplex: coordinate " + std::to_string(i) +
                                      " = " + std::to_string(c));
        if (c < 0.0)
            coords_[i] = 0.0;
    }
    const double sum = std::accumulate(coords_.begin(), coords_.end(), 0.0);
    if (std::abs(sum - 1.0) > kOutsideTol)
        throw PointOutsideSimplex("point outside simplex: coordinates sum to " + std::to_string(sum));
    if (std::abs(sum - 1.0) > kSumTol)
        for (double& c : coords_)
            c /= sum;
}

BaryPoint BaryPoint::barycenter(int n)
{
    return BaryPoint(std::vector<double>(static_cast<std::size_t>(n) + 1, 1.0 / (n + 1)));
}

BaryPoint BaryPoint::corner(int n, int k)
{
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c.at(static_cast<std::size_t>(k)) = 1.0;
    return BaryPoint(std::move(c));
}

double distance_inf(std::span<const double> a, std::span<const double> b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double distance_l1(std::span<const double> a, std::span<const double> b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += std::abs(a[i] - b[i]);
    return d;
}

}  // namespace sperner
