#include "sperner/maps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sperner/errors.hpp"

namespace sperner {

namespace {

// Coefficients of q(s) = p(c + s).
std::vector<double> taylor_shift(const std::vector<double>& p, double c)
{
    std::vector<double> q = p;
    const std::size_t d = q.size();
    for (std::size_t i = 0; i + 1 < d; ++i)
        for (std::size_t j = d - 1; j > i; --j)
            q[j - 1] += c * q[j];
    return q;
}

enum class Verdict
{
    Inside,
    Outside,
    Unknown
};

Verdict check_interval(const std::vector<double>& p, double lo, double hi, double tol, int depth)
{
    const double c = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    const auto q = taylor_shift(p, c);
    double spread = 0.0;
    double rp = 1.0;
    for (std::size_t j = 1; j < q.size(); ++j)
    {
        rp *= r;
        spread += std::abs(q[j]) * rp;
    }
    if (q[0] < -tol || q[0] > 1.0 + tol)
        return Verdict::Outside;
    if (q[0] - spread >= -tol && q[0] + spread <= 1.0 + tol)
        return Verdict::Inside;
    if (depth == 0)
        return Verdict::Unknown;
    const auto left = check_interval(p, lo, c, tol, depth - 1);
    if (left != Verdict::Inside)
        return left;
    return check_interval(p, c, hi, tol, depth - 1);
}

}  // namespace

SimplexMap rotation_map(int n)
{
    return SimplexMap("rotation", n, [](std::span<const double> x) {
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[(i + 1) % x.size()] = x[i];
        return y;
    });
}

SimplexMap identity_map(int n)
{
    return SimplexMap("identity", n, [](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); });
}

SimplexMap constant_map(const BaryPoint& c)
{
    return SimplexMap("constant", c.dim(), [v = c.vec()](std::span<const double>) { return v; });
}

SimplexMap affine_stochastic_map(int n, const std::vector<double>& row_major)
{
    const std::size_t d = static_cast<std::size_t>(n) + 1;
    if (row_major.size() != d * d)
        throw InvalidArgument("matrix: expected " + std::to_string(d * d) + " entries, got " +
                              std::to_string(row_major.size()));
    for (std::size_t col = 0; col < d; ++col)
    {
        double sum = 0.0;
        for (std::size_t row = 0; row < d; ++row)
        {
            const double a = row_major[row * d + col];
            if (!(a >= 0.0))
                throw InvalidArgument("matrix: entry (" + std::to_string(row) + "," + std::to_string(col) +
                                      ") is negative");
            sum += a;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw InvalidArgument("matrix: column " + std::to_string(col) + " sums to " + std::to_string(sum));
    }
    return SimplexMap("affine_stochastic", n, [a = row_major, d](std::span<const double> x) {
        std::vector<double> y(d, 0.0);
        for (std::size_t row = 0; row < d; ++row)
            for (std::size_t col = 0; col < d; ++col)
                y[row] += a[row * d + col] * x[col];
        return y;
    });
}

double poly_eval(const std::vector<double>& coeffs, double t)
{
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * t + *it;
    return acc;
}

bool poly_range_in_unit(const std::vector<double>& coeffs, double tol)
{
    if (coeffs.empty())
        return false;
    return check_interval(coeffs, 0.0, 1.0, tol, 40) == Verdict::Inside;
}

SimplexMap poly1d_map(const std::vector<double>& coeffs)
{
    if (coeffs.empty())
        throw InvalidArgument("coeffs: need at least one coefficient");
    if (!poly_range_in_unit(coeffs))
        throw InvalidArgument("coeffs: polynomial does not map [0,1] into [0,1]");
    return SimplexMap("poly1d", 1, [coeffs](std::span<const double> x) {
        const double p = std::clamp(poly_eval(coeffs, x[1]), 0.0, 1.0);
        return std::vector<double>{1.0 - p, p};
    });
}

}  // namespace sperner
