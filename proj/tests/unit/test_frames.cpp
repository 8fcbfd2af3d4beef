#include <doctest.h>

#include <cmath>
#include <random>

#include "waveguide/frames.hpp"

using namespace wg;

namespace {

double orthogonality_defect(const Eigen::MatrixXd& m)
{
    return (m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("planar circle: frame and point follow the closed form")
{
    const double k = 0.25;
    CurvatureProfile p(2, {families::constant(k)}, {-20, 20});
    const auto s = uniform_grid(-10, 10, 641);
    const auto f = build_frame_field(p, s);
    for (std::size_t i = 0; i < s.size(); i += 40) {
        const double t = s[i];
        CHECK(f.point[i][0] == doctest::Approx(std::sin(k * t) / k).epsilon(1e-9));
        CHECK(f.point[i][1] == doctest::Approx((1 - std::cos(k * t)) / k).epsilon(1e-9).scale(1.0));
        CHECK(f.frenet[i](0, 0) == doctest::Approx(std::cos(k * t)));
    }
}

TEST_CASE("helix: Tang angle grows like the torsion")
{
    const double tau = 0.2;
    CurvatureProfile p(3, {families::constant(0.3), families::constant(tau)}, {-40, 40});
    const auto s = uniform_grid(-40, 40, 80 * 64 + 1);
    const auto r = integrate_tang_rotation(p, s, Eigen::MatrixXd::Identity(2, 2));
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double alpha = std::atan2(r[i](1, 0), r[i](0, 0));
        const double expected = std::remainder(tau * s[i], 2 * M_PI);
        worst = std::max(worst, std::abs(std::remainder(alpha - expected, 2 * M_PI)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("property: frames stay orthonormal for random profiles")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amp(-0.8, 0.8), width(0.5, 3.0);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 2 + trial % 3;
        std::vector<CurvatureFunction> ks;
        for (int i = 1; i < d; ++i)
            ks.push_back(trial % 2 ? families::gaussian_bump(amp(rng), width(rng)) : families::power_tail(amp(rng), width(rng), 1.5));
        CurvatureProfile p(d, ks, {-30, 30});
        const auto s = uniform_grid(-30, 30, 60 * 32 + 1);
        const auto f = build_frame_field(p, s);
        double worst = 0.0, det = 0.0, tang = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            worst = std::max(worst, orthogonality_defect(f.frenet[i]));
            worst = std::max(worst, orthogonality_defect(f.rotation[i]));
            det = std::max(det, std::abs(f.rotation[i].determinant() - 1.0));
            tang = std::max(tang, orthogonality_defect(f.tang[i]));
        }
        CHECK(worst < 1e-10);
        CHECK(det < 1e-10);
        CHECK(tang < 1e-10);
    }
}

TEST_CASE("tang frame keeps the tangent and rotates the normals")
{
    CurvatureProfile p(3, {families::gaussian_bump(0.5, 1.0), families::constant(0.4)}, {-10, 10});
    const auto s = uniform_grid(-5, 5, 321);
    const auto f = build_frame_field(p, s);
    for (std::size_t i = 0; i < s.size(); i += 32) {
        CHECK((f.tang[i].row(0) - f.frenet[i].row(0)).norm() < 1e-12);
        const Eigen::MatrixXd expect = f.rotation[i] * f.frenet[i].bottomRows(2);
        CHECK((f.tang[i].bottomRows(2) - expect).norm() < 1e-12);
    }
}

TEST_CASE("nearest orthogonal matrix")
{
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.01, -0.02, 1.001;
    CHECK(orthogonality_defect(nearest_orthogonal(m)) < 1e-14);
}
