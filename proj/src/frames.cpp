#include "waveguide/frames.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/SVD>

#include "waveguide/errors.hpp"

namespace wg {

namespace {

constexpr double kInputTol = 1e-9;
// Projection corrections larger than this mean the step was too coarse.
constexpr double kDriftLimit = 1e-6;

void check_grid(const CurvatureProfile& profile, const std::vector<double>& s_grid, double s0)
{
    if (s_grid.empty()) throw InputError("s_grid is empty");
    for (std::size_t k = 1; k < s_grid.size(); ++k)
        if (!(s_grid[k] > s_grid[k - 1])) throw InputError("s_grid must be strictly increasing");
    const auto& range = profile.s_range();
    if (!range.contains(s_grid.front()) || !range.contains(s_grid.back()))
        throw InputError("s_grid leaves the profile's s_range");
    if (!range.contains(s0)) throw InputError("initial point s0 outside the profile's s_range");
}

bool is_rotation(const Eigen::MatrixXd& m, double tol)
{
    const auto n = m.rows();
    if (m.cols() != n) return false;
    const double orth = (m.transpose() * m - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    return orth <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

// State of a linear matrix ODE plus an optional vector carried along (the curve point).
struct State {
    Eigen::MatrixXd m;
    Eigen::VectorXd v;
};

using Rhs = std::function<State(double, const State&)>;

State axpy(const State& y, double h, const State& k)
{
    return {y.m + h * k.m, y.v.size() ? Eigen::VectorXd(y.v + h * k.v) : y.v};
}

State rk4_step(const Rhs& f, double s, const State& y, double h)
{
    const State k1 = f(s, y);
    const State k2 = f(s + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = f(s + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = f(s + h, axpy(y, h, k3));
    State out = y;
    out.m += h / 6.0 * (k1.m + 2.0 * k2.m + 2.0 * k3.m + k4.m);
    if (out.v.size()) out.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    return out;
}

// Advances y from s_from to s_to with re-projection after every step; halves the step on
// rejection until the retry budget is spent.
State advance(const Rhs& f, State y, double s_from, double s_to, const IntegratorOptions& opt)
{
    int pieces = std::max(1, opt.substeps);
    for (int attempt = 0; attempt <= opt.retry_budget; ++attempt, pieces *= 2) {
        State z = y;
        const double h = (s_to - s_from) / pieces;
        bool rejected = false;
        for (int j = 0; j < pieces; ++j) {
            const double s = s_from + h * j;
            State next = rk4_step(f, s, z, h);
            if (!next.m.allFinite() || (next.v.size() && !next.v.allFinite())) {
                rejected = true;
                break;
            }
            Eigen::MatrixXd projected = nearest_orthogonal(next.m);
            if ((projected - next.m).cwiseAbs().maxCoeff() > kDriftLimit) {
                rejected = true;
                break;
            }
            next.m = std::move(projected);
            z = std::move(next);
        }
        if (!rejected) return z;
    }
    std::ostringstream msg;
    msg << "RK4 step rejected beyond the retry budget near s = " << s_from;
    throw IntegrationError(msg.str(), s_from);
}

// Integrates outward from s0 to every grid point (forward for s ≥ s0, backward otherwise).
std::vector<State> march(const Rhs& f, const State& initial, double s0,
                         const std::vector<double>& s_grid, const IntegratorOptions& opt)
{
    std::vector<State> out(s_grid.size());
    const auto split = static_cast<std::ptrdiff_t>(
        std::lower_bound(s_grid.begin(), s_grid.end(), s0) - s_grid.begin());

    State y = initial;
    double s = s0;
    for (std::ptrdiff_t k = split; k < static_cast<std::ptrdiff_t>(s_grid.size()); ++k) {
        const double target = s_grid[static_cast<std::size_t>(k)];
        if (target > s) y = advance(f, y, s, target, opt);
        s = target;
        out[static_cast<std::size_t>(k)] = y;
    }
    y = initial;
    s = s0;
    for (std::ptrdiff_t k = split - 1; k >= 0; --k) {
        const double target = s_grid[static_cast<std::size_t>(k)];
        y = advance(f, y, s, target, opt);
        s = target;
        out[static_cast<std::size_t>(k)] = y;
    }
    return out;
}

} // namespace

Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& m)
{
    if (m.rows() == 1) return Eigen::MatrixXd::Constant(1, 1, m(0, 0) >= 0.0 ? 1.0 : -1.0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

FrenetSamples integrate_frenet(const CurvatureProfile& profile, const Eigen::MatrixXd& initial_frame,
                               const Eigen::VectorXd& initial_point,
                               const std::vector<double>& s_grid, const IntegratorOptions& options)
{
    const int d = profile.dimension();
    if (initial_frame.rows() != d || initial_frame.cols() != d || initial_point.size() != d)
        throw InputError("integrate_frenet: initial data has the wrong dimension");
    if (!is_rotation(initial_frame, kInputTol))
        throw InputError("integrate_frenet: initial frame is not orthonormal with positive orientation");
    check_grid(profile, s_grid, options.s0);

    const Rhs rhs = [&profile](double s, const State& y) {
        return State{profile.frenet_matrix(s) * y.m, y.m.row(0).transpose()};
    };
    const auto states = march(rhs, State{initial_frame, initial_point}, options.s0, s_grid, options);

    FrenetSamples out;
    out.frame.reserve(states.size());
    out.point.reserve(states.size());
    for (const auto& st : states) {
        out.frame.push_back(st.m);
        out.point.push_back(st.v);
    }
    return out;
}

std::vector<Eigen::MatrixXd> integrate_tang_rotation(const CurvatureProfile& profile,
                                                     const std::vector<double>& s_grid,
                                                     const Eigen::MatrixXd& r0,
                                                     const IntegratorOptions& options)
{
    const int m = profile.dimension() - 1;
    if (r0.rows() != m || r0.cols() != m)
        throw InputError("integrate_tang_rotation: R0 has the wrong dimension");
    if (!is_rotation(r0, kInputTol)) throw InputError("integrate_tang_rotation: R0 is not a rotation");
    check_grid(profile, s_grid, options.s0);

    if (m == 1) return std::vector<Eigen::MatrixXd>(s_grid.size(), r0);

    const Rhs rhs = [&profile, m](double s, const State& y) {
        const Eigen::MatrixXd b = profile.frenet_matrix(s).bottomRightCorner(m, m);
        return State{-y.m * b, Eigen::VectorXd()};
    };
    const auto states = march(rhs, State{r0, Eigen::VectorXd()}, options.s0, s_grid, options);
    std::vector<Eigen::MatrixXd> out;
    out.reserve(states.size());
    for (const auto& st : states) out.push_back(st.m);
    return out;
}

FrameField build_frame_field(const CurvatureProfile& profile, const std::vector<double>& s_grid,
                             const IntegratorOptions& options)
{
    const int d = profile.dimension();
    return build_frame_field(profile, s_grid, Eigen::MatrixXd::Identity(d, d),
                             Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d - 1, d - 1),
                             options);
}

FrameField build_frame_field(const CurvatureProfile& profile, const std::vector<double>& s_grid,
                             const Eigen::MatrixXd& initial_frame,
                             const Eigen::VectorXd& initial_point, const Eigen::MatrixXd& r0,
                             const IntegratorOptions& options)
{
    const int d = profile.dimension();
    auto frenet = integrate_frenet(profile, initial_frame, initial_point, s_grid, options);
    auto rotation = integrate_tang_rotation(profile, s_grid, r0, options);

    FrameField field;
    field.s = s_grid;
    field.frenet = std::move(frenet.frame);
    field.point = std::move(frenet.point);
    field.rotation = std::move(rotation);
    field.tang.reserve(s_grid.size());
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        Eigen::MatrixXd full = Eigen::MatrixXd::Identity(d, d);
        full.bottomRightCorner(d - 1, d - 1) = field.rotation[k];
        field.tang.push_back(full * field.frenet[k]);
    }

    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        const double e_err = (field.frenet[k] * field.frenet[k].transpose()
                              - Eigen::MatrixXd::Identity(d, d))
                                 .cwiseAbs()
                                 .maxCoeff();
        if (e_err > options.frame_tol || !is_rotation(field.rotation[k], options.frame_tol))
            throw IntegrationError("frame lost orthonormality", s_grid[k]);
    }
    return field;
}

std::vector<double> uniform_grid(double lo, double hi, int count)
{
    if (count < 2) throw InputError("uniform_grid: need at least two samples");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (count - 1);
    return g;
}

} // namespace wg
