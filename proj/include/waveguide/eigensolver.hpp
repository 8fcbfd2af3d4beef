#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace wg {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct EigenOptions {
    double tol = 1e-10;           // relative residual target
    int max_iterations = 3000;
    std::optional<double> shift;  // σ for shift-invert; default −1 (moved down if needed)
    bool want_vectors = false;
    Eigen::Index dense_limit = 2000;
};

struct EigenResult {
    Eigen::VectorXd values;      // ascending
    Eigen::MatrixXd vectors;     // columns, only when requested
    Eigen::VectorXd residuals;   // ‖Mv − λv‖ / ‖v‖ (generalized: ‖Kv − λMv‖ / ‖v‖)
    int iterations = 0;
    double shift = 0.0;
    std::string method;          // "dense" | "shift-invert"
};

// k smallest eigenvalues of a symmetric matrix. Shift-invert Lanczos through ARPACK with a sparse
// LDLᵀ of M − σI; dense solver when the dimension is at most opts.dense_limit.
EigenResult lowest_eigenvalues(const SparseMatrix& m, int k, const EigenOptions& opts = {});

// k smallest eigenvalues of K x = λ M x with M symmetric positive definite.
EigenResult lowest_generalized(const SparseMatrix& k, const SparseMatrix& mass, int count,
                               const EigenOptions& opts = {});

// Number of eigenvalues of M strictly below x (Sylvester inertia of M − xI).
Eigen::Index count_below(const SparseMatrix& m, double x);

// Number of eigenvalues of the pencil (K, M) strictly below x, M positive definite.
Eigen::Index count_below_generalized(const SparseMatrix& k, const SparseMatrix& mass, double x);

// All eigenpairs with eigenvalue in (lo, hi); vectors always returned.
EigenResult eigenpairs_in_window(const SparseMatrix& m, double lo, double hi, const EigenOptions& opts = {});

// Lower bound for the spectrum from Gershgorin discs.
double gershgorin_lower(const SparseMatrix& m);

} // namespace wg
