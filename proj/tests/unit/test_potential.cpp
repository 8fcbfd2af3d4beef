#include <doctest.h>

#include <tuple>

#include <cmath>

#include "waveguide/errors.hpp"
#include "waveguide/metric.hpp"
#include "waveguide/potential.hpp"

using namespace wg;

namespace {

// V from h by nested central differences of the defining expression
double v_numeric(const TubeMetric& m, double s, const Eigen::VectorXd& u)
{
    const double e = 1e-3;
    auto h = [&](double ss, const Eigen::VectorXd& uu) { return m.h(ss, uu); };
    const double h0 = h(s, u);
    const double h1 = (h(s + e, u) - h(s - e, u)) / (2 * e);
    const double h11 = (h(s + e, u) - 2 * h0 + h(s - e, u)) / (e * e);
    double grad_sq = 0.0, lap = 0.0;
    for (Eigen::Index mu = 0; mu < u.size(); ++mu) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(u.size());
        d[mu] = e;
        const double g = (h(s, u + d) - h(s, u - d)) / (2 * e);
        grad_sq += g * g;
        lap += (h(s, u + d) - 2 * h0 + h(s, u - d)) / (e * e);
    }
    return -1.25 * h1 * h1 / std::pow(h0, 4) + 0.5 * h11 / std::pow(h0, 3) - 0.25 * grad_sq / (h0 * h0) + 0.5 * lap / h0;
}

} // namespace

TEST_CASE("closed-form V matches finite differences of h")
{
    CurvatureProfile p2(2, {families::gaussian_bump(0.5, 1.0)}, {-20, 20});
    CurvatureProfile p3(3, {families::gaussian_bump(0.5, 1.0), families::power_tail(0.4, 1.0, 2.0)}, {-20, 20});
    const std::shared_ptr<const TubeMetric> m2 = metric_from_frames(p2, 1.0);
    const std::shared_ptr<const TubeMetric> m3 = metric_from_frames(p3, 0.8, 1.0 / 256);
    const EffectivePotential v2(m2), v3(m3);
    for (double s : {-0.8, 0.3}) {
        const Eigen::VectorXd u = Eigen::VectorXd::Constant(1, 0.6);
        CHECK(v2.value(s, u) == doctest::Approx(v_numeric(*m2, s, u)).epsilon(1e-5));
        const Eigen::Vector2d w(0.3, -0.4);
        CHECK(v3.value(s, w) == doctest::Approx(v_numeric(*m3, s, w)).epsilon(1e-3));
    }
}

TEST_CASE("V_1 is the s-derivative of V")
{
    CurvatureProfile p(3, {families::gaussian_bump(0.5, 1.0), families::constant(0.3)}, {-20, 20});
    const std::shared_ptr<const TubeMetric> m = metric_from_frames(p, 0.9, 1.0 / 256);
    const EffectivePotential v(m);
    const Eigen::Vector2d u(0.5, 0.2);
    const double e = 1e-4;
    for (double s : {-1.2, 0.1, 0.9})
        CHECK(v.derivative(s, u) == doctest::Approx((v.value(s + e, u) - v.value(s - e, u)) / (2 * e)).epsilon(1e-5).scale(1.0));
}

TEST_CASE("straight tube has zero potential and unit coefficients")
{
    CurvatureProfile p(2, {families::constant(0.0)}, {-20, 20});
    const std::shared_ptr<const TubeMetric> m = metric_from_frames(p, 1.0);
    const EffectivePotential v(m);
    const CoefficientField g(m);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(1, 0.3);
    CHECK(v.value(1.0, u) == 0.0);
    CHECK(g.g11(1.0, u) == 1.0);
    CHECK(v.shifted(0.25).value(1.0, u) == doctest::Approx(0.25));
    const auto [cm, cp] = g.bounds();
    CHECK(cm == doctest::Approx(1.0));
    CHECK(cp == doctest::Approx(1.0));
}

TEST_CASE("h below the floor raises SingularityError")
{
    CurvatureProfile p(2, {families::gaussian_bump(0.5, 1.0)}, {-20, 20});
    const std::shared_ptr<const TubeMetric> m = metric_from_frames(p, 1.0);
    const EffectivePotential v(m, 0.9);
    CHECK_THROWS_AS(std::ignore = v.value(0.0, Eigen::VectorXd::Constant(1, 0.5)), SingularityError);
}

TEST_CASE("G and its s-derivative")
{
    CurvatureProfile p(2, {families::gaussian_bump(0.5, 1.0)}, {-20, 20});
    const std::shared_ptr<const TubeMetric> m = metric_from_frames(p, 1.0);
    const CoefficientField g(m);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(1, -0.4);
    const double e = 1e-5;
    CHECK(g.g11_derivative(0.5, u) == doctest::Approx((g.g11(0.5 + e, u) - g.g11(0.5 - e, u)) / (2 * e)).epsilon(1e-6));
    const Eigen::MatrixXd G = g.matrix(0.5, u);
    CHECK(G(0, 0) == doctest::Approx(g.g11(0.5, u)));
    CHECK(G(1, 1) == 1.0);
    CHECK(G(0, 1) == 0.0);
}
