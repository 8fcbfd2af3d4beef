#include <doctest.h>

#include "waveguide/commutator.hpp"
#include "waveguide/errors.hpp"
#include "waveguide/mourre.hpp"

using namespace wg;

namespace {

struct Setup {
    CrossSection omega = CrossSection::interval(1.0);
    ThresholdSet t = interval_thresholds(1.0, 4);
    std::shared_ptr<const TruncatedGrid> grid = std::make_shared<const TruncatedGrid>(omega, 64.0, 0.125, 0.125);
    DiscreteOperator h = assemble_free_hamiltonian(grid);
    DiscreteOperator c = assemble_free_commutator(grid);
};

} // namespace

TEST_CASE("free Mourre estimate reaches 2 rho")
{
    Setup s;
    const double lambda = s.t.nu[0] + 0.5 * (s.t.nu[1] - s.t.nu[0]);
    const auto r = mourre_check_window(s.h, s.c, s.t, {lambda, std::nullopt});
    CHECK(r.pass);
    CHECK(r.expected == doctest::Approx(2 * (lambda - s.t.nu[0])));
    CHECK(r.epsilon == doctest::Approx(0.02 * r.rho));
}

TEST_CASE("windows below nu1 or at a threshold are refused")
{
    Setup s;
    CHECK_THROWS_AS(mourre_check_window(s.h, s.c, s.t, {1.0, std::nullopt}), WindowError);
    CHECK_THROWS_AS(mourre_check_window(s.h, s.c, s.t, {s.t.nu[1] + 1e-3, std::nullopt}), WindowError);
}

TEST_CASE("an empty window is an error")
{
    Setup s;
    const double lambda = s.t.nu[0] + 0.5 * (s.t.nu[1] - s.t.nu[0]);
    CHECK_THROWS_AS(mourre_check_window(s.h, s.c, s.t, {lambda, 1e-9}), WindowError);
}
