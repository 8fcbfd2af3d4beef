#include <doctest.h>

#include <tuple>

#include <cmath>
#include <numbers>
#include <random>

#include "waveguide/cross_section.hpp"
#include "waveguide/errors.hpp"

using namespace wg;
using std::numbers::pi;

TEST_CASE("interval thresholds are n^2 pi^2 / (2a)^2")
{
    const auto t = cross_section_spectrum(CrossSection::interval(1.0), 4);
    REQUIRE(t.size() == 4);
    for (int n = 1; n <= 4; ++n) CHECK(t.nu[n - 1] == doctest::Approx(n * n * pi * pi / 4));
    CHECK(t.exactness[0] == Exactness::analytic);
}

TEST_CASE("rectangle thresholds keep multiplicities")
{
    const auto t = cross_section_spectrum(CrossSection::rectangle(1.0, 1.0), 3);
    CHECK(t.nu[0] == doctest::Approx(2 * pi * pi));
    CHECK(t.nu[1] == doctest::Approx(5 * pi * pi));
    CHECK(t.nu[2] == doctest::Approx(5 * pi * pi));
}

TEST_CASE("disc thresholds are squared Bessel zeros")
{
    const auto t = cross_section_spectrum(CrossSection::disc(1.0), 3);
    CHECK(t.nu[0] == doctest::Approx(2.404825557695773 * 2.404825557695773));
    CHECK(t.nu[1] == doctest::Approx(3.831705970207512 * 3.831705970207512));
    CHECK(t.nu[2] == doctest::Approx(3.831705970207512 * 3.831705970207512));
    const auto z = bessel_zeros(2, 2);
    CHECK(z[0] == doctest::Approx(5.135622301840683));
    CHECK(z[1] == doctest::Approx(8.417244140399855));
}

TEST_CASE("masked cross-section approximates the disc")
{
    const auto mask = CrossSection::grid_mask([](const Eigen::Vector2d& x) { return x.norm() < 1.0; },
                                              Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1), "disc-mask");
    const auto t = cross_section_spectrum(mask, 1, 48);
    CHECK(t.nu[0] == doctest::Approx(5.783185962946784).epsilon(0.02));
    CHECK(t.exactness[0] == Exactness::discretized);
    CHECK_THROWS_AS(cross_section_spectrum(mask, 1, 8), ResolutionError);
}

TEST_CASE("rho is infinite below nu1 and measured from the last threshold")
{
    const auto t = interval_thresholds(1.0, 3);
    CHECK(rho_of_lambda(t, 1.0).is_infinite());
    CHECK(rho_of_lambda(t, t.nu[0]).value() == doctest::Approx(0.0));
    CHECK(rho_of_lambda(t, t.nu[1] + 0.5).value() == doctest::Approx(0.5));
    CHECK_THROWS_AS(rho_of_lambda(t, t.nu[2] + 1.0), CoverageError);
    CHECK_THROWS_AS(std::ignore = rho_of_lambda(t, 1.0).value(), InputError);
}

TEST_CASE("property: rho agrees with a brute-force sup over the thresholds")
{
    std::mt19937_64 rng(11);
    const CrossSection shapes[] = {CrossSection::interval(0.7), CrossSection::rectangle(1.0, 2.0), CrossSection::disc(1.3)};
    for (const auto& omega : shapes) {
        const auto t = cross_section_spectrum(omega, 6);
        std::uniform_real_distribution<double> lam(0.5 * t.nu.front(), t.nu.back());
        for (int k = 0; k < 400; ++k) {
            const double l = lam(rng);
            double best = -1.0;
            for (double z : t.nu)
                if (z <= l) best = std::max(best, z);
            const auto r = rho_of_lambda(t, l);
            if (best < 0) CHECK(r.is_infinite());
            else CHECK(r.value() == doctest::Approx(l - best));
        }
    }
}

TEST_CASE("cross-section geometry")
{
    const auto box = CrossSection::rectangle(2.0, 1.0);
    CHECK(box.radius() == doctest::Approx(std::sqrt(1.25)));
    CHECK(box.contains(Eigen::Vector2d(0.9, 0.4)));
    CHECK_FALSE(box.contains(Eigen::Vector2d(0.9, 0.6)));
    CHECK(CrossSection::interval(1.0).dimension() == 1);
}
