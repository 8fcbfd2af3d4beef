#include <doctest.h>

#include <cmath>

#include "waveguide/commutator.hpp"
#include "waveguide/metric.hpp"

using namespace wg;

TEST_CASE("dilation is antisymmetric")
{
    const auto omega = CrossSection::interval(1.0);
    auto grid = std::make_shared<const TruncatedGrid>(omega, 4.0, 0.25, 0.2);
    const SparseMatrix s = assemble_dilation(grid).matrix;
    const SparseMatrix st = s.transpose();
    CHECK(SparseMatrix(s + st).norm() == 0.0);
}

TEST_CASE("free commutator is -2 d_s^2 and matches the matrix commutator")
{
    const auto omega = CrossSection::interval(1.0);
    std::vector<double> errors;
    for (double ds : {1.0 / 8, 1.0 / 16}) {
        auto grid = std::make_shared<const TruncatedGrid>(omega, 8.0, ds, 1.0 / 8);
        const auto vs = interior_test_vectors(*grid, omega, 5, 1, 0.25);
        errors.push_back(compare_commutator(assemble_free_hamiltonian(grid).matrix, assemble_dilation(grid).matrix,
                                            assemble_free_commutator(grid).matrix, vs, grid->ds())
                             .max_relative);
    }
    CHECK(errors[1] < 0.05);
    CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("formula and matrix commutators converge together")
{
    const auto omega = CrossSection::interval(1.0);
    const std::shared_ptr<const TubeMetric> m =
        metric_from_frames(CurvatureProfile(2, {families::gaussian_bump(0.5, 1.0)}, {-30, 30}), 1.0);
    const CoefficientField g(m);
    const EffectivePotential v(m);
    std::vector<double> errors;
    for (double ds : {1.0 / 8, 1.0 / 16}) {
        auto grid = std::make_shared<const TruncatedGrid>(omega, 8.0, ds, ds);
        const auto vs = interior_test_vectors(*grid, omega, 6, 9, 0.25);
        errors.push_back(compare_commutator(assemble_hamiltonian(g, v, grid).matrix, assemble_dilation(grid).matrix,
                                            assemble_commutator(g, v, grid).matrix, vs, ds)
                             .max_relative);
    }
    CHECK(errors[1] < errors[0] / 3);
}

TEST_CASE("test vectors vanish near every boundary")
{
    const auto omega = CrossSection::interval(1.0);
    auto grid = std::make_shared<const TruncatedGrid>(omega, 8.0, 1.0 / 8, 1.0 / 8);
    for (const auto& v : interior_test_vectors(*grid, omega, 4, 2, 0.25))
        for (Eigen::Index is = 0; is < grid->s_count(); ++is)
            if (std::abs(grid->s_at(is)) > 7.75)
                for (Eigen::Index it = 0; it < grid->transverse_count(); ++it) CHECK(v[grid->index(is, it)] == 0.0);
}
