#include "waveguide/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "waveguide/eigensolver.hpp"
#include "waveguide/errors.hpp"

namespace wg {

using std::numbers::pi;

CrossSection CrossSection::interval(double half_width)
{
    if (!(half_width > 0.0)) throw InputError("interval cross-section: half-width must be positive");
    CrossSection c;
    c.kind_ = ShapeKind::interval;
    c.dimension_ = 1;
    c.radius_ = half_width;
    c.sides_ = {2.0 * half_width};
    c.lo_ = Eigen::VectorXd::Constant(1, -half_width);
    c.hi_ = Eigen::VectorXd::Constant(1, half_width);
    return c;
}

CrossSection CrossSection::box(std::vector<double> sides)
{
    if (sides.empty()) throw InputError("box cross-section: no sides given");
    double r2 = 0.0;
    for (double s : sides) {
        if (!(s > 0.0)) throw InputError("box cross-section: side lengths must be positive");
        r2 += 0.25 * s * s;
    }
    CrossSection c;
    c.kind_ = sides.size() == 1 ? ShapeKind::interval : ShapeKind::box;
    c.dimension_ = static_cast<int>(sides.size());
    c.radius_ = std::sqrt(r2);
    c.lo_.resize(c.dimension_);
    c.hi_.resize(c.dimension_);
    for (int i = 0; i < c.dimension_; ++i) {
        c.lo_[i] = -0.5 * sides[static_cast<std::size_t>(i)];
        c.hi_[i] = 0.5 * sides[static_cast<std::size_t>(i)];
    }
    c.sides_ = std::move(sides);
    return c;
}

CrossSection CrossSection::disc(double radius)
{
    if (!(radius > 0.0)) throw InputError("disc cross-section: radius must be positive");
    CrossSection c;
    c.kind_ = ShapeKind::disc;
    c.dimension_ = 2;
    c.radius_ = radius;
    c.sides_ = {2.0 * radius, 2.0 * radius};
    c.lo_ = Eigen::VectorXd::Constant(2, -radius);
    c.hi_ = Eigen::VectorXd::Constant(2, radius);
    return c;
}

CrossSection CrossSection::grid_mask(std::function<bool(const Eigen::Vector2d&)> inside, Eigen::Vector2d lo,
                                     Eigen::Vector2d hi, std::string label)
{
    if (!inside) throw InputError("grid-mask cross-section: missing membership test");
    if (!(hi[0] > lo[0] && hi[1] > lo[1])) throw InputError("grid-mask cross-section: empty bounding box");
    CrossSection c;
    c.kind_ = ShapeKind::grid_mask;
    c.dimension_ = 2;
    c.lo_ = lo;
    c.hi_ = hi;
    c.sides_ = {hi[0] - lo[0], hi[1] - lo[1]};
    c.inside_ = std::move(inside);
    c.label_ = std::move(label);
    const int n = 256;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const Eigen::Vector2d p(lo[0] + c.sides_[0] * i / n, lo[1] + c.sides_[1] * j / n);
            if (c.inside_(p)) c.radius_ = std::max(c.radius_, p.norm());
        }
    if (c.radius_ == 0.0) throw InputError("grid-mask cross-section: mask is empty");
    return c;
}

bool CrossSection::contains(const Eigen::VectorXd& u) const
{
    if (u.size() != dimension_) throw InputError("cross-section: point has the wrong dimension");
    switch (kind_) {
    case ShapeKind::interval:
    case ShapeKind::box:
        for (int i = 0; i < dimension_; ++i)
            if (!(u[i] > lo_[i] && u[i] < hi_[i])) return false;
        return true;
    case ShapeKind::disc: return u.norm() < radius_;
    case ShapeKind::grid_mask: return inside_(Eigen::Vector2d(u[0], u[1]));
    }
    return false;
}

std::string CrossSection::describe() const
{
    std::ostringstream out;
    out.precision(12);
    switch (kind_) {
    case ShapeKind::interval: out << "interval half_width=" << radius_; break;
    case ShapeKind::box:
        out << "box sides=";
        for (std::size_t i = 0; i < sides_.size(); ++i) out << (i ? "," : "") << sides_[i];
        break;
    case ShapeKind::disc: out << "disc radius=" << radius_; break;
    case ShapeKind::grid_mask: out << "mask " << label_; break;
    }
    return out.str();
}

// ---------------------------------------------------------------------------------------------

std::vector<double> bessel_zeros(int m, int count, double tol)
{
    if (m < 0 || count < 1) throw InputError("bessel_zeros: invalid order or count");
    const double nu = m;
    auto j = [nu](double x) { return std::cyl_bessel_j(nu, x); };
    std::vector<double> zeros;
    const double step = 0.05;
    double a = std::max(nu, step);
    double fa = j(a);
    while (static_cast<int>(zeros.size()) < count) {
        const double b = a + step;
        const double fb = j(b);
        if (fa == 0.0) {
            zeros.push_back(a);
        } else if ((fa < 0.0) != (fb < 0.0)) {
            double lo = a, hi = b, flo = fa;
            while (hi - lo > tol * std::max(1.0, lo)) {
                const double mid = 0.5 * (lo + hi);
                const double fm = j(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    return zeros;
}

namespace {

struct MaskGrid {
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;
    std::vector<int> index;  // −1 outside
    int count = 0;
};

MaskGrid build_mask(const CrossSection& omega, int nx, int ny)
{
    MaskGrid g;
    g.nx = nx;
    g.ny = ny;
    const Eigen::VectorXd lo = omega.bbox_lo();
    g.hx = omega.sides()[0] / (nx + 1);
    g.hy = omega.sides()[1] / (ny + 1);
    g.index.assign(static_cast<std::size_t>(nx * ny), -1);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            Eigen::VectorXd p(2);
            p << lo[0] + (i + 1) * g.hx, lo[1] + (j + 1) * g.hy;
            if (omega.contains(p)) g.index[static_cast<std::size_t>(i * ny + j)] = g.count++;
        }
    return g;
}

bool connected(const MaskGrid& g)
{
    if (g.count == 0) return false;
    std::vector<char> seen(g.index.size(), 0);
    std::queue<int> q;
    for (std::size_t k = 0; k < g.index.size(); ++k)
        if (g.index[k] >= 0) {
            q.push(static_cast<int>(k));
            seen[k] = 1;
            break;
        }
    int reached = 0;
    while (!q.empty()) {
        const int k = q.front();
        q.pop();
        ++reached;
        const int i = k / g.ny, j = k % g.ny;
        const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
        for (const auto& n : nb) {
            if (n[0] < 0 || n[0] >= g.nx || n[1] < 0 || n[1] >= g.ny) continue;
            const auto kk = static_cast<std::size_t>(n[0] * g.ny + n[1]);
            if (g.index[kk] < 0 || seen[kk]) continue;
            seen[kk] = 1;
            q.push(static_cast<int>(kk));
        }
    }
    return reached == g.count;
}

Eigen::VectorXd mask_eigenvalues(const MaskGrid& g, int n_max)
{
    std::vector<Eigen::Triplet<double>> t;
    const double cx = 1.0 / (g.hx * g.hx), cy = 1.0 / (g.hy * g.hy);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            const int r = g.index[static_cast<std::size_t>(i * g.ny + j)];
            if (r < 0) continue;
            t.emplace_back(r, r, 2.0 * (cx + cy));
            auto link = [&](int ii, int jj, double c) {
                if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) return;
                const int col = g.index[static_cast<std::size_t>(ii * g.ny + jj)];
                if (col >= 0) t.emplace_back(r, col, -c);
            };
            link(i - 1, j, cx);
            link(i + 1, j, cx);
            link(i, j - 1, cy);
            link(i, j + 1, cy);
        }
    SparseMatrix m(g.count, g.count);
    m.setFromTriplets(t.begin(), t.end());
    return lowest_eigenvalues(m, n_max).values;
}

} // namespace

ThresholdSet interval_thresholds(double half_width, int n_max)
{
    if (!(half_width > 0.0)) throw InputError("interval thresholds: half-width must be positive");
    if (n_max < 1) throw InputError("interval thresholds: n_max must be at least 1");
    ThresholdSet t;
    const double nu1 = pi * pi / (4.0 * half_width * half_width);
    for (int n = 1; n <= n_max; ++n) {
        t.nu.push_back(n * n * nu1);
        t.exactness.push_back(Exactness::analytic);
    }
    return t;
}

ThresholdSet cross_section_spectrum(const CrossSection& omega, int n_max, int grid_resolution)
{
    if (n_max < 1) throw InputError("cross_section_spectrum: n_max must be at least 1");
    ThresholdSet out;
    switch (omega.kind()) {
    case ShapeKind::interval: return interval_thresholds(0.5 * omega.sides()[0], n_max);
    case ShapeKind::box: {
        const auto& sides = omega.sides();
        const std::size_t m = sides.size();
        if (std::pow(static_cast<double>(n_max), static_cast<double>(m)) > 4e6)
            throw TruncationError("cross_section_spectrum: n_max too large for box enumeration");
        std::vector<int> idx(m, 1);
        std::vector<double> all;
        while (true) {
            double v = 0.0;
            for (std::size_t i = 0; i < m; ++i) v += idx[i] * idx[i] / (sides[i] * sides[i]);
            all.push_back(pi * pi * v);
            std::size_t p = 0;
            while (p < m && ++idx[p] > n_max) idx[p++] = 1;
            if (p == m) break;
        }
        std::sort(all.begin(), all.end());
        out.nu.assign(all.begin(), all.begin() + n_max);
        out.exactness.assign(static_cast<std::size_t>(n_max), Exactness::analytic);
        return out;
    }
    case ShapeKind::disc: {
        std::vector<double> all;
        const double r = omega.radius();
        for (int m = 0; m <= n_max; ++m)
            for (double z : bessel_zeros(m, n_max)) {
                const double v = z * z / (r * r);
                all.push_back(v);
                if (m > 0) all.push_back(v);
            }
        std::sort(all.begin(), all.end());
        out.nu.assign(all.begin(), all.begin() + n_max);
        out.exactness.assign(static_cast<std::size_t>(n_max), Exactness::analytic);
        return out;
    }
    case ShapeKind::grid_mask: {
        if (grid_resolution < 16)
            throw ResolutionError("cross_section_spectrum: need at least 16 interior points per side");
        const auto& sides = omega.sides();
        const double h = std::min(sides[0], sides[1]) / (grid_resolution + 1);
        const int nx = std::max(grid_resolution, static_cast<int>(std::lround(sides[0] / h)) - 1);
        const int ny = std::max(grid_resolution, static_cast<int>(std::lround(sides[1] / h)) - 1);
        const MaskGrid coarse = build_mask(omega, nx, ny);
        if (!connected(coarse)) throw InputError("cross_section_spectrum: mask is empty or disconnected");
        if (n_max > coarse.count / 8)
            throw TruncationError("cross_section_spectrum: n_max = " + std::to_string(n_max)
                                  + " exceeds resolvable modes (" + std::to_string(coarse.count / 8) + ")");
        const MaskGrid fine = build_mask(omega, 2 * nx + 1, 2 * ny + 1);
        const Eigen::VectorXd a = mask_eigenvalues(coarse, n_max);
        const Eigen::VectorXd b = mask_eigenvalues(fine, n_max);
        for (int k = 0; k < n_max; ++k) out.nu.push_back((4.0 * b[k] - a[k]) / 3.0);
        std::sort(out.nu.begin(), out.nu.end());
        out.exactness.assign(static_cast<std::size_t>(n_max), Exactness::discretized);
        return out;
    }
    }
    return out;
}

double ExtendedEnergy::value() const
{
    if (infinite_) throw InputError("energy value is +infinity");
    return value_;
}

std::string ExtendedEnergy::str() const
{
    if (infinite_) return "+inf";
    std::ostringstream out;
    out.precision(12);
    out << value_;
    return out.str();
}

ExtendedEnergy rho_of_lambda(const ThresholdSet& thresholds, double lambda)
{
    if (thresholds.nu.empty()) throw CoverageError("rho_of_lambda: empty threshold set");
    if (lambda < thresholds.nu.front()) return ExtendedEnergy::infinity();
    if (lambda > thresholds.nu.back())
        throw CoverageError("rho_of_lambda: lambda above the last computed threshold; increase n_max");
    const auto it = std::upper_bound(thresholds.nu.begin(), thresholds.nu.end(), lambda);
    return ExtendedEnergy::finite(lambda - *(it - 1));
}

} // namespace wg
