#include <doctest.h>

#include <random>

#include "waveguide/eigensolver.hpp"

using namespace wg;

namespace {

SparseMatrix laplacian_1d(int n)
{
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 2.0 + 0.01 * i);
        if (i + 1 < n) {
            t.emplace_back(i, i + 1, -1.0);
            t.emplace_back(i + 1, i, -1.0);
        }
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace

TEST_CASE("shift-invert agrees with the dense solver")
{
    const auto m = laplacian_1d(3000);
    const Eigen::MatrixXd dense = Eigen::MatrixXd(laplacian_1d(900));
    EigenOptions opts;
    opts.dense_limit = 10;
    const auto sparse = lowest_eigenvalues(laplacian_1d(900), 4, opts);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    for (int i = 0; i < 4; ++i) CHECK(sparse.values[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-10));
    CHECK(sparse.method == "shift-invert");
    const auto big = lowest_eigenvalues(m, 2);
    CHECK(big.values[0] < big.values[1]);
    CHECK(big.residuals.maxCoeff() < 1e-6);
}

TEST_CASE("inertia count matches the spectrum")
{
    const auto m = laplacian_1d(400);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly);
    for (double x : {0.05, 0.5, 1.7, 3.9}) {
        Eigen::Index expected = 0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) expected += es.eigenvalues()[i] < x;
        CHECK(count_below(m, x) == expected);
    }
    CHECK(gershgorin_lower(m) <= es.eigenvalues()[0]);
}

TEST_CASE("generalized problem with a diagonal mass")
{
    const int n = 1500;
    const auto k = laplacian_1d(n);
    SparseMatrix mass(n, n);
    for (int i = 0; i < n; ++i) mass.insert(i, i) = 2.0;
    EigenOptions opts;
    opts.dense_limit = 10;
    const auto g = lowest_generalized(k, mass, 3, opts);
    const auto plain = lowest_eigenvalues(k, 3, opts);
    for (int i = 0; i < 3; ++i) CHECK(g.values[i] == doctest::Approx(plain.values[i] / 2).epsilon(1e-9));
    CHECK(count_below_generalized(k, mass, g.values[1] * 1.0000001) == 2);
}

TEST_CASE("eigenpairs in a window come with orthonormal vectors")
{
    const auto m = laplacian_1d(1200);
    const auto r = eigenpairs_in_window(m, 0.5, 0.6);
    REQUIRE(r.values.size() > 0);
    for (Eigen::Index j = 0; j < r.values.size(); ++j) {
        CHECK(r.values[j] > 0.5);
        CHECK(r.values[j] < 0.6);
        CHECK((m * r.vectors.col(j) - r.values[j] * r.vectors.col(j)).norm() < 1e-7);
    }
    const Eigen::MatrixXd gram = r.vectors.transpose() * r.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm() < 1e-8);
}
