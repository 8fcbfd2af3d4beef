#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "waveguide/assumptions.hpp"
#include "waveguide/errors.hpp"

using namespace wg;

namespace {

std::string text(const AssumptionReport& r)
{
    std::ostringstream o;
    write_assumption_report(o, r);
    return o.str();
}

std::vector<double> lattice(double lo, double hi, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

CurvatureFunction inverse_square(double k0)
{
    // k0 / (1 + s²)
    return families::power_tail(k0, 1.0, 2.0);
}

} // namespace

TEST_CASE("power tail with p = 1/2: theta near 1/2, all items pass")
{
    const CurvatureProfile p(2, {families::power_tail(0.5, 1.0, 0.5)}, {-1e9, 1e9});
    const auto r = check_curvature_decay(p);
    CHECK(r.overall() == Verdict::pass);
    REQUIRE(r.theta());
    CHECK(*r.theta() == doctest::Approx(0.5).epsilon(0.05));
    CHECK(r.find("curvature.item1.kappa")->verdict == Verdict::pass);
    CHECK(r.find("curvature.item2.transverse")->notes == "identically zero");
}

TEST_CASE("constant curvature fails item 1")
{
    const CurvatureProfile p(2, {families::constant(0.3)}, {-1e4, 1e4});
    const auto r = check_curvature_decay(p);
    CHECK(r.find("curvature.item1.kappa")->verdict == Verdict::fail);
    CHECK(r.overall() == Verdict::fail);
}

TEST_CASE("d = 3 Gaussian plus inverse square: all pass, theta capped")
{
    const CurvatureProfile p(3, {families::gaussian_bump(1.0, 1.0), inverse_square(1.0)}, {-1e3, 1e3});
    const auto r = check_curvature_decay(p);
    CHECK(r.overall() == Verdict::pass);
    REQUIRE(r.theta());
    CHECK(*r.theta() == 1.0);
}

TEST_CASE("short range is inconclusive, never pass")
{
    const CurvatureProfile p(2, {families::gaussian_bump(0.5, 1.0)}, {-6, 6});
    const auto r = check_curvature_decay(p);
    CHECK(r.overall() == Verdict::inconclusive);
}

TEST_CASE("property: ladders are non-increasing")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pw(0.3, 3.0), amp(0.1, 0.9);
    for (int trial = 0; trial < 5; ++trial) {
        const CurvatureProfile p(3, {families::power_tail(amp(rng), 1.0, pw(rng)), families::power_tail(amp(rng), 2.0, pw(rng))},
                                 {-1e5, 1e5});
        for (const auto& item : check_curvature_decay(p).items)
            for (std::size_t k = 1; k < item.ladder.size(); ++k) CHECK(item.ladder[k].sup <= item.ladder[k - 1].sup);
    }
}

TEST_CASE("reports are byte-identical across runs")
{
    const CurvatureProfile p(2, {families::power_tail(0.5, 1.0, 1.5)}, {-1e4, 1e4});
    CHECK(text(check_curvature_decay(p)) == text(check_curvature_decay(p)));
}

TEST_CASE("property: d = 2 metric and curvature checks agree")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> pw(0.5, 3.0), amp(0.1, 0.8);
    std::vector<CurvatureFunction> cases{families::constant(0.4), families::gaussian_bump(0.6, 1.0)};
    for (int k = 0; k < 3; ++k) cases.push_back(families::power_tail(amp(rng), 1.0, pw(rng)));
    for (const auto& kappa : cases) {
        const CurvatureProfile p(2, {kappa}, {-1e4, 1e4}, 0.8);
        const auto m = metric_from_frames(p, 1.0);
        CHECK(check_metric_hypotheses(*m).overall() == check_curvature_decay(p).overall());
    }
}

TEST_CASE("metric checks: h = 1 passes trivially, cos u fails item 1")
{
    const CurvatureProfile straight(2, {families::constant(0.0)}, {-1e4, 1e4});
    const auto flat = check_metric_hypotheses(*metric_from_frames(straight, 1.0));
    CHECK(flat.overall() == Verdict::pass);
    CHECK(flat.find("metric.item3.h_1")->notes == "identically zero");

    SurfaceData sphere;
    sphere.gauss_curvature = [](double, double) { return 1.0; };
    sphere.geodesic_curvature = families::constant(0.0);
    sphere.s_range = {-64, 64};
    sphere.half_width = 1.0;
    const auto m = metric_from_jacobi(sphere, lattice(-64, 64, 257), lattice(-1, 1, 33));
    const auto r = check_metric_hypotheses(*m);
    CHECK(r.find("metric.item1.h")->verdict == Verdict::fail);
}

TEST_CASE("basic checks")
{
    BasicInputs in;
    in.radius = 1.0;
    in.sup_kappa1 = 0.5;
    auto r = check_basic(in);
    CHECK(r.find("basic.thinness")->verdict == Verdict::pass);
    CHECK(r.find("basic.thinness")->notes.find("margin 0.5") != std::string::npos);

    in.sup_kappa1 = 1.0;
    CHECK(check_basic(in).find("basic.thinness")->verdict == Verdict::fail);

    in.sup_kappa1 = 0.2;
    in.overlap_waived = true;
    const auto waived = check_basic(in);
    const auto* o = waived.find("basic.overlap");
    REQUIRE(o);
    CHECK(o->verdict == Verdict::waived);
    CHECK(o->notes == "waived (abstract manifold)");
}

TEST_CASE("coefficient checks")
{
    SUBCASE("straight tube is identically zero")
    {
        const auto m = metric_from_frames(CurvatureProfile(2, {families::constant(0.0)}, {-1e4, 1e4}), 1.0);
        const auto r = check_coefficient_assumptions(CoefficientField(m), EffectivePotential(m));
        CHECK(r.overall() == Verdict::pass);
        CHECK(r.find("coefficients.V.item3.decay")->notes == "identically zero");
    }
    SUBCASE("inverse square curvature passes with theta capped")
    {
        const auto m = metric_from_frames(CurvatureProfile(2, {inverse_square(0.5)}, {-1e4, 1e4}, 0.5), 1.0);
        const auto r = check_coefficient_assumptions(CoefficientField(m), EffectivePotential(m));
        CHECK(r.overall() == Verdict::pass);
        REQUIRE(r.theta());
        CHECK(*r.theta() == 1.0);
    }
    SUBCASE("logarithmic tail: V tends to zero, its derivative fails the fit")
    {
        const auto m = metric_from_frames(CurvatureProfile(2, {families::log_tail(0.5)}, {-1e100, 1e100}, 0.5), 1.0);
        const auto r = check_coefficient_assumptions(CoefficientField(m), EffectivePotential(m));
        CHECK(r.find("coefficients.V.item2.limit")->verdict == Verdict::pass);
        CHECK(r.find("coefficients.V.item3.decay")->verdict == Verdict::fail);
    }
    SUBCASE("short range throws")
    {
        const auto m = metric_from_frames(CurvatureProfile(2, {families::gaussian_bump(0.5, 1.0)}, {-4, 4}), 1.0);
        CHECK_THROWS_AS(check_coefficient_assumptions(CoefficientField(m), EffectivePotential(m)), CoverageError);
    }
}

TEST_CASE("decay fit recovers a pure power law")
{
    std::vector<LadderPoint> ladder;
    for (double R = 1; R <= 1024; R *= 2) ladder.push_back({R, 3.0 * std::pow(R, -1.3)});
    const auto f = fit_decay(ladder, 3.0, {});
    REQUIRE(f);
    CHECK(f->theta_raw == doctest::Approx(0.3));
    CHECK(f->C == doctest::Approx(3.0));
    CHECK(f->residual < 1e-10);
}
