#pragma once

// Uniform-grid finite differences and local cubic interpolation shared by the
// sampled-curvature and Jacobi-metric code.

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace wg::detail {

// n-th derivative (n ≤ 3) at index k of uniformly spaced samples `at(j)`, j ∈ [0, count):
// fourth order in the interior, second order one-sided near the ends.
template <class F>
double fd_derivative(F&& at, Eigen::Index count, double h, Eigen::Index k, int order)
{
    const Eigen::Index n = count;
    switch (order) {
    case 0: return at(k);
    case 1:
        if (k >= 2 && k + 2 < n)
            return (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h);
        if (k < 2) return (-3.0 * at(k) + 4.0 * at(k + 1) - at(k + 2)) / (2.0 * h);
        return (3.0 * at(k) - 4.0 * at(k - 1) + at(k - 2)) / (2.0 * h);
    case 2:
        if (k >= 2 && k + 2 < n)
            return (-at(k - 2) + 16.0 * at(k - 1) - 30.0 * at(k) + 16.0 * at(k + 1) - at(k + 2))
                   / (12.0 * h * h);
        if (k < 2) return (2.0 * at(k) - 5.0 * at(k + 1) + 4.0 * at(k + 2) - at(k + 3)) / (h * h);
        return (2.0 * at(k) - 5.0 * at(k - 1) + 4.0 * at(k - 2) - at(k - 3)) / (h * h);
    default:
        if (k >= 3 && k + 3 < n)
            return (at(k - 3) - 8.0 * at(k - 2) + 13.0 * at(k - 1) - 13.0 * at(k + 1)
                    + 8.0 * at(k + 2) - at(k + 3))
                   / (8.0 * h * h * h);
        if (k < 3)
            return (-5.0 * at(k) + 18.0 * at(k + 1) - 24.0 * at(k + 2) + 14.0 * at(k + 3)
                    - 3.0 * at(k + 4))
                   / (2.0 * h * h * h);
        return -(-5.0 * at(k) + 18.0 * at(k - 1) - 24.0 * at(k - 2) + 14.0 * at(k - 3)
                 - 3.0 * at(k - 4))
               / (2.0 * h * h * h);
    }
}

// Stencil start and weights of the 4-point Lagrange interpolant at x (in grid units).
struct Cubic4 {
    Eigen::Index start;
    std::array<double, 4> w;
};

inline Cubic4 cubic4(double x, Eigen::Index count)
{
    Eigen::Index j = static_cast<Eigen::Index>(std::floor(x)) - 1;
    j = std::clamp<Eigen::Index>(j, 0, count - 4);
    const double t = x - static_cast<double>(j);
    return {j,
            {-(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0, t * (t - 2.0) * (t - 3.0) / 2.0,
             -t * (t - 1.0) * (t - 3.0) / 2.0, t * (t - 1.0) * (t - 2.0) / 6.0}};
}

} // namespace wg::detail
