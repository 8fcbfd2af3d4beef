#include "waveguide/metric.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "numerics.hpp"
#include "waveguide/errors.hpp"
#include "waveguide/frames.hpp"

namespace wg {

namespace {

void require_uniform(const std::vector<double>& g, const char* name)
{
    if (g.size() < 7) throw InputError(std::string(name) + ": need at least 7 samples");
    const double step = g[1] - g[0];
    if (!(step > 0.0)) throw InputError(std::string(name) + ": must be increasing");
    for (std::size_t k = 2; k < g.size(); ++k)
        if (std::abs((g[k] - g[k - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step)))
            throw InputError(std::string(name) + ": must be uniformly spaced");
}

double radical_inverse(unsigned index, unsigned base)
{
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * (index % base);
        index /= base;
        f /= base;
    }
    return result;
}

} // namespace

// ---------------------------------------------------------------------------------------------

FrameMetric::FrameMetric(CurvatureProfile profile, double radius, std::vector<double> s_grid,
                         std::vector<Eigen::MatrixXd> rotations)
    : TubeMetric(profile.dimension() - 1, radius, MetricSource::euclidean_tube, profile.s_range()),
      profile_(std::move(profile)), s_grid_(std::move(s_grid)), rotations_(std::move(rotations)),
      sup_kappa1_(profile_.sup_kappa1())
{
    if (!(radius > 0.0)) throw InputError("tube radius must be positive");
    if (profile_.available_order(1) < 3)
        throw InputError("metric_from_frames: κ₁ needs derivatives up to order 3");
    for (int i = 2; i < profile_.dimension(); ++i)
        if (profile_.available_order(i) < 2)
            throw InputError("metric_from_frames: κ_μ (μ ≥ 2) needs derivatives up to order 2");
    const double product = radius * sup_kappa1_;
    if (product >= 1.0) {
        std::ostringstream msg;
        msg << "ellipticity violated: a*sup|kappa_1| = " << product << " >= 1";
        throw EllipticityError(msg.str(), product);
    }
    if (profile_.dimension() > 2) {
        if (s_grid_.size() < 2 || s_grid_.size() != rotations_.size())
            throw InputError("metric_from_frames: rotation samples inconsistent with s_grid");
    }
}

Eigen::MatrixXd FrameMetric::rotation_at(double s) const
{
    const int m = profile_.dimension() - 1;
    if (m == 1) return Eigen::MatrixXd::Identity(1, 1);
    if (s < s_grid_.front() - 1e-12 || s > s_grid_.back() + 1e-12)
        throw InputError("FrameMetric: s outside the rotation sample grid");
    auto it = std::upper_bound(s_grid_.begin(), s_grid_.end(), s);
    std::size_t k = it == s_grid_.begin() ? 0 : static_cast<std::size_t>(it - s_grid_.begin()) - 1;
    k = std::min(k, s_grid_.size() - 2);
    const double s0 = s_grid_[k];
    const double s1 = s_grid_[k + 1];
    const double dt = s1 - s0;
    const double t = (s - s0) / dt;

    // Cubic Hermite with the exact slopes Ṙ = −R B.
    const Eigen::MatrixXd& r0 = rotations_[k];
    const Eigen::MatrixXd& r1 = rotations_[k + 1];
    const Eigen::MatrixXd d0 = -r0 * profile_.frenet_matrix(s0).bottomRightCorner(m, m);
    const Eigen::MatrixXd d1 = -r1 * profile_.frenet_matrix(s1).bottomRightCorner(m, m);
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * r0 + (t3 - 2 * t2 + t) * dt * d0 + (-2 * t3 + 3 * t2) * r1
           + (t3 - t2) * dt * d1;
}

MetricJet FrameMetric::jet(double s, const Eigen::VectorXd& u) const
{
    const int d = profile_.dimension();
    const int m = d - 1;
    if (u.size() != m) throw InputError("FrameMetric: u has the wrong dimension");

    // k^{(n)}_α = K^{(n)}_α^1 = −κ₁^{(n)} δ_{α2}
    std::array<Eigen::VectorXd, 4> k;
    for (int n = 0; n < 4; ++n) {
        k[static_cast<std::size_t>(n)] = Eigen::VectorXd::Zero(m);
        k[static_cast<std::size_t>(n)][0] = -profile_.kappa(1, s, n);
    }

    MetricJet jet;
    Eigen::VectorXd v0 = k[0];
    Eigen::VectorXd v1, v2, v3;
    if (m == 1) {
        v1 = k[1];
        v2 = k[2];
        v3 = k[3];
    } else {
        std::array<Eigen::MatrixXd, 3> b;
        for (int n = 0; n < 3; ++n) {
            b[static_cast<std::size_t>(n)] = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i + 1 < m; ++i) {
                const double value = profile_.kappa(i + 2, s, n);
                b[static_cast<std::size_t>(n)](i, i + 1) = value;
                b[static_cast<std::size_t>(n)](i + 1, i) = -value;
            }
        }
        const Eigen::MatrixXd& b0 = b[0];
        const Eigen::MatrixXd& b1 = b[1];
        const Eigen::MatrixXd& b2 = b[2];
        v1 = k[1] - b0 * k[0];
        v2 = k[2] - b1 * k[0] - 2.0 * b0 * k[1] + b0 * b0 * k[0];
        v3 = k[3] - b2 * k[0] - 3.0 * b1 * k[1] - 3.0 * b0 * k[2] + b1 * b0 * k[0]
             + 2.0 * b0 * b1 * k[0] + 3.0 * b0 * b0 * k[1] - b0 * b0 * b0 * k[0];
    }

    const Eigen::MatrixXd r = rotation_at(s);
    jet.grad = r * v0;
    jet.grad1 = r * v1;
    jet.h = 1.0 + u.dot(jet.grad);
    jet.h1 = u.dot(jet.grad1);
    jet.h11 = u.dot(r * v2);
    jet.h111 = u.dot(r * v3);
    jet.lap = 0.0;
    jet.lap1 = 0.0;
    jet.grad_sq = k[0].squaredNorm();
    jet.grad_sq1 = 2.0 * k[1].dot(k[0]);
    return jet;
}

double FrameMetric::h(double s, const Eigen::VectorXd& u) const
{
    const double k1 = profile_.kappa(1, s, 0);
    if (u.size() == 1) return 1.0 - k1 * u[0];
    return 1.0 - k1 * rotation_at(s).col(0).dot(u);
}

std::optional<std::pair<double, double>> FrameMetric::analytic_bounds() const
{
    return std::make_pair(1.0 - radius() * sup_kappa1_, 1.0 + radius() * sup_kappa1_);
}

std::shared_ptr<const FrameMetric> metric_from_frames(const CurvatureProfile& profile, double radius,
                                                      double rotation_step)
{
    if (profile.dimension() == 2) return std::make_shared<const FrameMetric>(profile, radius, std::vector<double>{},
                                                                             std::vector<Eigen::MatrixXd>{});
    const auto& range = profile.s_range();
    const int count = static_cast<int>(std::ceil(range.length() / rotation_step)) + 1;
    auto grid = uniform_grid(range.lo, range.hi, count);
    IntegratorOptions opt;
    opt.s0 = std::clamp(0.0, range.lo, range.hi);
    const int m = profile.dimension() - 1;
    auto rotations = integrate_tang_rotation(profile, grid, Eigen::MatrixXd::Identity(m, m), opt);
    return std::make_shared<const FrameMetric>(profile, radius, std::move(grid), std::move(rotations));
}

// ---------------------------------------------------------------------------------------------

double JacobiMetric::interpolate(const Eigen::MatrixXd& table, double s, double u) const
{
    const double ds = s_[1] - s_[0];
    const double du = u_[1] - u_[0];
    const auto cs = detail::cubic4((s - s_.front()) / ds, static_cast<Eigen::Index>(s_.size()));
    const auto cu = detail::cubic4((u - u_.front()) / du, static_cast<Eigen::Index>(u_.size()));
    double v = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += cu.w[static_cast<std::size_t>(j)] * table(cs.start + i, cu.start + j);
        v += cs.w[static_cast<std::size_t>(i)] * row;
    }
    return v;
}

double JacobiMetric::h(double s, const Eigen::VectorXd& u) const
{
    return interpolate(h_, s, u[0]);
}

MetricJet JacobiMetric::jet(double s, const Eigen::VectorXd& u) const
{
    if (u.size() != 1) throw InputError("JacobiMetric: u must be one-dimensional");
    const double x = u[0];
    MetricJet jet;
    jet.h = interpolate(h_, s, x);
    jet.h1 = interpolate(h1_, s, x);
    jet.h11 = interpolate(h11_, s, x);
    jet.h111 = interpolate(h111_, s, x);
    const double hu = interpolate(hu_, s, x);
    const double h1u = interpolate(h1u_, s, x);
    const double kk = interpolate(k_, s, x);
    const double k1 = interpolate(k1_, s, x);
    jet.grad = Eigen::VectorXd::Constant(1, hu);
    jet.grad1 = Eigen::VectorXd::Constant(1, h1u);
    jet.lap = -kk * jet.h;
    jet.lap1 = -(k1 * jet.h + kk * jet.h1);
    jet.grad_sq = hu * hu;
    jet.grad_sq1 = 2.0 * hu * h1u;
    return jet;
}

std::shared_ptr<const JacobiMetric> metric_from_jacobi(const SurfaceData& surface, const std::vector<double>& s_grid,
                                                       const std::vector<double>& u_grid, int substeps)
{
    if (!surface.gauss_curvature || !surface.geodesic_curvature.eval)
        throw InputError("metric_from_jacobi: surface data incomplete");
    if (surface.geodesic_curvature.max_order < 3)
        throw InputError("metric_from_jacobi: geodesic curvature must provide derivatives to order 3");
    require_uniform(s_grid, "metric_from_jacobi s_grid");
    require_uniform(u_grid, "metric_from_jacobi u_grid");
    const double a = surface.half_width;
    if (u_grid.front() < -a * (1 + 1e-12) || u_grid.back() > a * (1 + 1e-12))
        throw InputError("metric_from_jacobi: u_grid leaves [-a, a]");
    const auto zero = std::find_if(u_grid.begin(), u_grid.end(), [](double v) { return std::abs(v) < 1e-12; });
    if (zero == u_grid.end()) throw InputError("metric_from_jacobi: u_grid must contain 0");
    const auto j0 = static_cast<Eigen::Index>(zero - u_grid.begin());
    substeps = std::max(1, substeps);

    const auto ns = static_cast<Eigen::Index>(s_grid.size());
    const auto nu = static_cast<Eigen::Index>(u_grid.size());
    std::shared_ptr<JacobiMetric> metric(new JacobiMetric(a, {s_grid.front(), s_grid.back()}));
    metric->s_ = s_grid;
    metric->u_ = u_grid;
    metric->h_.resize(ns, nu);
    metric->hu_.resize(ns, nu);
    metric->k_.resize(ns, nu);

    const auto& gauss = surface.gauss_curvature;
    for (Eigen::Index i = 0; i < ns; ++i) {
        const double s = s_grid[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < nu; ++j) metric->k_(i, j) = gauss(s, u_grid[static_cast<std::size_t>(j)]);

        // y = (h, h_{,2}), y' = (h_{,2}, −K h)
        auto step = [&](double u, double hh, Eigen::Vector2d y) -> Eigen::Vector2d {
            auto f = [&](double uu, const Eigen::Vector2d& z) { return Eigen::Vector2d(z[1], -gauss(s, uu) * z[0]); };
            const Eigen::Vector2d k1 = f(u, y);
            const Eigen::Vector2d k2 = f(u + 0.5 * hh, y + 0.5 * hh * k1);
            const Eigen::Vector2d k3 = f(u + 0.5 * hh, y + 0.5 * hh * k2);
            const Eigen::Vector2d k4 = f(u + hh, y + hh * k3);
            return y + hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        };
        auto store = [&](Eigen::Index j, const Eigen::Vector2d& y) {
            if (!(y[0] > 0.0)) {
                std::ostringstream msg;
                msg << "Jacobi metric: h = " << y[0] << " <= 0 at (s, u) = (" << s << ", "
                    << u_grid[static_cast<std::size_t>(j)] << ")";
                throw EllipticityError(msg.str(), y[0], s, u_grid[static_cast<std::size_t>(j)]);
            }
            metric->h_(i, j) = y[0];
            metric->hu_(i, j) = y[1];
        };

        const Eigen::Vector2d y0(1.0, -surface.geodesic_curvature.eval(s, 0));
        store(j0, y0);
        for (int dir : {1, -1}) {
            Eigen::Vector2d y = y0;
            for (Eigen::Index j = j0 + dir; j >= 0 && j < nu; j += dir) {
                const double from = u_grid[static_cast<std::size_t>(j - dir)];
                const double hh = (u_grid[static_cast<std::size_t>(j)] - from) / substeps;
                for (int q = 0; q < substeps; ++q) y = step(from + q * hh, hh, y);
                store(j, y);
            }
        }
    }

    const double ds = s_grid[1] - s_grid[0];
    auto column_derivative = [&](const Eigen::MatrixXd& table, int order) {
        Eigen::MatrixXd out(ns, nu);
        for (Eigen::Index j = 0; j < nu; ++j)
            for (Eigen::Index i = 0; i < ns; ++i)
                out(i, j) = detail::fd_derivative([&](Eigen::Index q) { return table(q, j); }, ns, ds, i, order);
        return out;
    };
    metric->h1_ = column_derivative(metric->h_, 1);
    metric->h11_ = column_derivative(metric->h_, 2);
    metric->h111_ = column_derivative(metric->h_, 3);
    metric->h1u_ = column_derivative(metric->hu_, 1);
    metric->k1_ = column_derivative(metric->k_, 1);
    return metric;
}

// ---------------------------------------------------------------------------------------------

EllipticityBounds ellipticity_bounds(const TubeMetric& metric, int sample_budget)
{
    const int m = metric.transverse_dimension();
    const double a = metric.radius();
    const auto& range = metric.s_range();
    static constexpr unsigned kBases[] = {2, 3, 5, 7, 11};

    EllipticityBounds out;
    out.c_minus = std::numeric_limits<double>::infinity();
    out.c_plus = -std::numeric_limits<double>::infinity();
    auto visit = [&](double s, const Eigen::VectorXd& u) {
        const double v = metric.h(s, u);
        out.c_minus = std::min(out.c_minus, v);
        out.c_plus = std::max(out.c_plus, v);
    };

    std::vector<Eigen::VectorXd> fixed{Eigen::VectorXd::Zero(m)};
    for (int mu = 0; mu < m; ++mu)
        for (double sign : {-1.0, 1.0}) {
            Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
            u[mu] = sign * a;
            fixed.push_back(u);
        }

    for (int n = 1; n <= sample_budget; ++n) {
        const auto idx = static_cast<unsigned>(n);
        const double s = range.lo + range.length() * radical_inverse(idx, kBases[0]);
        Eigen::VectorXd u(m);
        for (int mu = 0; mu < m; ++mu) u[mu] = a * (2.0 * radical_inverse(idx, kBases[mu + 1]) - 1.0);
        if (u.norm() <= a) visit(s, u);
        for (const auto& f : fixed) visit(s, f);
    }

    out.analytic = metric.analytic_bounds();
    if (out.analytic) {
        const double slack = 1e-12;
        out.within_analytic = out.c_minus >= out.analytic->first - slack && out.c_plus <= out.analytic->second + slack;
    }
    return out;
}

void write_metric_csv(std::ostream& out, const TubeMetric& metric, const std::vector<double>& s_samples,
                      const std::vector<Eigen::VectorXd>& u_samples)
{
    const int m = metric.transverse_dimension();
    out << "s";
    for (int mu = 2; mu <= m + 1; ++mu) out << ",u" << mu;
    out << ",h,h_1,h_11\n";
    out << std::setprecision(12);
    for (double s : s_samples)
        for (const auto& u : u_samples) {
            const auto jet = metric.jet(s, u);
            out << s;
            for (int mu = 0; mu < m; ++mu) out << ',' << u[mu];
            out << ',' << jet.h << ',' << jet.h1 << ',' << jet.h11 << '\n';
        }
}

} // namespace wg
