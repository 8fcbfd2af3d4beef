#include "waveguide/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <vector>

#include <Eigen/SparseCholesky>
#include <arpack/arpack.h>

#include "waveguide/errors.hpp"

namespace wg {

namespace {

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

SparseMatrix identity(Eigen::Index n)
{
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

void check_square(const SparseMatrix& m)
{
    if (m.rows() != m.cols()) throw InputError("eigensolver: matrix is not square");
    if (m.rows() == 0) throw InputError("eigensolver: empty matrix");
}

Eigen::Index negative_pivots(const Ldlt& f)
{
    const Eigen::VectorXd d = f.vectorD();
    return static_cast<Eigen::Index>((d.array() < 0.0).count());
}

Eigen::Index inertia(const SparseMatrix& shifted)
{
    Ldlt f(shifted);
    if (f.info() != Eigen::Success) throw SolverError("inertia: factorization failed", 0.0);
    return negative_pivots(f);
}

// Mode-3 ARPACK driver. apply(x, y, bx, ido) fills y from x (and bx in the generalized case).
template <class Op>
EigenResult run_arpack(Eigen::Index n, int nev, bool generalized, double sigma, const EigenOptions& opts, Op&& op)
{
    const a_int nn = static_cast<a_int>(n);
    a_int ncv = std::min<a_int>(nn, std::max<a_int>(2 * nev + 1, 24));
    if (nev >= nn) throw InputError("eigensolver: requested more eigenvalues than the dimension allows");

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<double> resid(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) resid[static_cast<std::size_t>(i)] = 1.0 + 0.1 * std::sin(0.37 * i);
        std::vector<double> v(static_cast<std::size_t>(n * ncv));
        std::vector<double> workd(static_cast<std::size_t>(3 * n));
        const a_int lworkl = ncv * (ncv + 8);
        std::vector<double> workl(static_cast<std::size_t>(lworkl));
        a_int iparam[11] = {1, 0, opts.max_iterations, 1, 0, 0, 3, 0, 0, 0, 0};
        a_int ipntr[14] = {};
        a_int ido = 0;
        a_int info = 1;
        const char* bmat = generalized ? "G" : "I";
        const double tol = std::max(opts.tol * 1e-2, 1e-15);

        while (true) {
            dsaupd_c(&ido, bmat, nn, "LM", nev, tol, resid.data(), ncv, v.data(), nn, iparam, ipntr, workd.data(),
                     workl.data(), lworkl, &info);
            if (ido == 99) break;
            double* x = workd.data() + ipntr[0] - 1;
            double* y = workd.data() + ipntr[1] - 1;
            double* bx = workd.data() + ipntr[2] - 1;
            if (ido == -1 || ido == 1 || ido == 2) op(ido, x, y, bx);
            else throw SolverError("ARPACK: unexpected reverse-communication request", 0.0);
        }
        if (info == 1 && attempt == 0) {
            ncv = std::min<a_int>(nn, 2 * ncv);
            continue;
        }
        if (info < 0 || info == 1)
            throw SolverError("ARPACK dsaupd failed (info = " + std::to_string(info) + ")",
                              std::numeric_limits<double>::infinity());

        std::vector<a_int> select(static_cast<std::size_t>(ncv));
        std::vector<double> d(static_cast<std::size_t>(nev));
        std::vector<double> z(static_cast<std::size_t>(n * nev));
        a_int einfo = 0;
        dseupd_c(1, "A", select.data(), d.data(), z.data(), nn, sigma, bmat, nn, "LM", nev, tol, resid.data(), ncv,
                 v.data(), nn, iparam, ipntr, workd.data(), workl.data(), lworkl, &einfo);
        if (einfo != 0) throw SolverError("ARPACK dseupd failed (info = " + std::to_string(einfo) + ")", 0.0);

        const auto found = static_cast<Eigen::Index>(iparam[4]);
        if (found < nev) {
            if (attempt == 0) {
                ncv = std::min<a_int>(nn, 2 * ncv);
                continue;
            }
            throw SolverError("ARPACK converged only " + std::to_string(found) + " of " + std::to_string(nev)
                                  + " eigenvalues",
                              std::numeric_limits<double>::infinity());
        }
        std::vector<Eigen::Index> order(static_cast<std::size_t>(nev));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) {
            return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)];
        });
        EigenResult r;
        r.values.resize(nev);
        r.vectors.resize(n, nev);
        Eigen::Map<const Eigen::MatrixXd> zm(z.data(), n, nev);
        for (Eigen::Index j = 0; j < nev; ++j) {
            r.values[j] = d[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
            r.vectors.col(j) = zm.col(order[static_cast<std::size_t>(j)]);
        }
        r.iterations = iparam[2];
        r.shift = sigma;
        r.method = "shift-invert";
        return r;
    }
    throw SolverError("ARPACK: no convergence", std::numeric_limits<double>::infinity());
}

void finish(EigenResult& r, const SparseMatrix& m, const SparseMatrix* mass, const EigenOptions& opts)
{
    const Eigen::Index k = r.values.size();
    r.residuals.resize(k);
    double worst = 0.0;
    const double scale = std::max(1.0, r.values.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::VectorXd v = r.vectors.col(j);
        const Eigen::VectorXd mv = mass ? Eigen::VectorXd(*mass * v) : v;
        r.residuals[j] = (m * v - r.values[j] * mv).norm() / v.norm();
        worst = std::max(worst, r.residuals[j] / scale);
    }
    if (worst > std::max(opts.tol, 1e-12) * 1e3)
        throw SolverError("eigensolver residual " + std::to_string(worst) + " above tolerance", worst);
    if (!opts.want_vectors) r.vectors.resize(0, 0);
}

// Dense QR is cheap for eigenvalues alone; eigenvectors of large dense problems cost far more
// than a shift-invert run.
bool use_dense(Eigen::Index n, int k, const EigenOptions& opts)
{
    if (k >= n - 1) return true;
    if (n > opts.dense_limit) return false;
    return !opts.want_vectors || n <= 600;
}

} // namespace

double gershgorin_lower(const SparseMatrix& m)
{
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m.rows());
    Eigen::VectorXd off = Eigen::VectorXd::Zero(m.rows());
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
            if (it.row() == it.col()) diag[it.row()] += it.value();
            else off[it.row()] += std::abs(it.value());
        }
    return (diag - off).minCoeff();
}

Eigen::Index count_below(const SparseMatrix& m, double x)
{
    check_square(m);
    return inertia(m - x * identity(m.rows()));
}

Eigen::Index count_below_generalized(const SparseMatrix& k, const SparseMatrix& mass, double x)
{
    check_square(k);
    return inertia(k - x * mass);
}

EigenResult lowest_eigenvalues(const SparseMatrix& m, int k, const EigenOptions& opts)
{
    check_square(m);
    const Eigen::Index n = m.rows();
    if (k < 1 || k > n) throw InputError("lowest_eigenvalues: k out of range");

    EigenResult r;
    if (use_dense(n, k, opts)) {
        const bool vectors = opts.want_vectors;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m),
                                                          vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0.0);
        r.values = es.eigenvalues().head(k);
        r.method = "dense";
        if (!vectors) {
            r.residuals = Eigen::VectorXd::Zero(k);
            return r;
        }
        r.vectors = es.eigenvectors().leftCols(k);
        finish(r, m, nullptr, opts);
        return r;
    }

    double sigma = opts.shift.value_or(-1.0);
    SparseMatrix shifted = m - sigma * identity(n);
    auto factor = std::make_unique<Ldlt>(shifted);
    if (factor->info() != Eigen::Success || negative_pivots(*factor) > 0) {
        sigma = std::min(sigma, gershgorin_lower(m)) - 1.0;
        shifted = m - sigma * identity(n);
        factor = std::make_unique<Ldlt>(shifted);
    }
    if (factor->info() != Eigen::Success) throw SolverError("shift-invert factorization failed", 0.0);

    r = run_arpack(n, k, false, sigma, opts, [&](a_int, const double* x, double* y, const double*) {
        Eigen::Map<const Eigen::VectorXd> xv(x, n);
        Eigen::Map<Eigen::VectorXd>(y, n) = factor->solve(xv);
    });
    finish(r, m, nullptr, opts);
    return r;
}

EigenResult lowest_generalized(const SparseMatrix& k, const SparseMatrix& mass, int count, const EigenOptions& opts)
{
    check_square(k);
    if (mass.rows() != k.rows() || mass.cols() != k.cols()) throw InputError("lowest_generalized: size mismatch");
    const Eigen::Index n = k.rows();
    if (count < 1 || count > n) throw InputError("lowest_generalized: count out of range");

    EigenResult r;
    if (use_dense(n, count, opts)) {
        const bool vectors = opts.want_vectors;
        const Eigen::MatrixXd kd(k), md(mass);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
            kd, md, (vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly) | Eigen::Ax_lBx);
        if (es.info() != Eigen::Success) throw SolverError("dense generalized eigensolver failed", 0.0);
        r.values = es.eigenvalues().head(count);
        r.method = "dense";
        if (!vectors) {
            r.residuals = Eigen::VectorXd::Zero(count);
            return r;
        }
        r.vectors = es.eigenvectors().leftCols(count);
        finish(r, k, &mass, opts);
        return r;
    }

    double sigma = opts.shift.value_or(-1.0);
    std::unique_ptr<Ldlt> factor;
    for (int tries = 0;; ++tries) {
        factor = std::make_unique<Ldlt>(SparseMatrix(k - sigma * mass));
        if (factor->info() == Eigen::Success && negative_pivots(*factor) == 0) break;
        if (tries > 60) throw SolverError("generalized shift-invert: no admissible shift", 0.0);
        sigma = 2.0 * std::min(sigma, -1.0);
    }

    r = run_arpack(n, count, true, sigma, opts, [&](a_int ido, const double* x, double* y, const double* bx) {
        Eigen::Map<const Eigen::VectorXd> xv(x, n);
        Eigen::Map<Eigen::VectorXd> yv(y, n);
        if (ido == 2) yv = mass * xv;
        else if (ido == 1) yv = factor->solve(Eigen::Map<const Eigen::VectorXd>(bx, n));
        else yv = factor->solve(Eigen::VectorXd(mass * xv));
    });
    // normalise in the mass inner product
    for (Eigen::Index j = 0; j < r.vectors.cols(); ++j) {
        const double nm = std::sqrt(r.vectors.col(j).dot(mass * r.vectors.col(j)));
        r.vectors.col(j) /= nm;
    }
    finish(r, k, &mass, opts);
    return r;
}

EigenResult eigenpairs_in_window(const SparseMatrix& m, double lo, double hi, const EigenOptions& opts)
{
    check_square(m);
    if (!(hi > lo)) throw InputError("eigenpairs_in_window: empty window");
    const Eigen::Index n = m.rows();
    EigenOptions o = opts;
    o.want_vectors = true;

    EigenResult r;
    if (n <= 600) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m), Eigen::ComputeEigenvectors);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index j = 0; j < n; ++j)
            if (es.eigenvalues()[j] > lo && es.eigenvalues()[j] < hi) keep.push_back(j);
        r.values.resize(static_cast<Eigen::Index>(keep.size()));
        r.vectors.resize(n, static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) {
            r.values[static_cast<Eigen::Index>(j)] = es.eigenvalues()[keep[j]];
            r.vectors.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
        }
        r.method = "dense";
        finish(r, m, nullptr, o);
        return r;
    }

    const Eigen::Index count = count_below(m, hi) - count_below(m, lo);
    if (count <= 0) {
        r.method = "shift-invert";
        r.residuals.resize(0);
        return r;
    }
    const double sigma = 0.5 * (lo + hi);
    Ldlt factor(SparseMatrix(m - sigma * identity(n)));
    if (factor.info() != Eigen::Success) throw SolverError("window factorization failed", 0.0);
    r = run_arpack(n, static_cast<int>(count), false, sigma, o, [&](a_int, const double* x, double* y, const double*) {
        Eigen::Map<const Eigen::VectorXd> xv(x, n);
        Eigen::Map<Eigen::VectorXd>(y, n) = factor.solve(xv);
    });
    finish(r, m, nullptr, o);
    return r;
}

} // namespace wg
