#pragma once

#include <memory>
#include <vector>

#include "waveguide/assembly.hpp"

namespace wg {

// A = ½(q¹p₁ + p₁q¹) stored as the real antisymmetric S with A = iS; S = −½(QD + DQ) with D the
// centred difference along s and Q = diag(s).
DiscreteOperator assemble_dilation(std::shared_ptr<const TruncatedGrid> grid);

// i[H, A] = −∂₁(2G¹¹ − q¹G¹¹_{,1})∂₁ − q¹V_{,1} for G = diag(h⁻², 1, …, 1).
DiscreteOperator assemble_commutator(const CoefficientField& coeffs, const EffectivePotential& potential,
                                     std::shared_ptr<const TruncatedGrid> grid);

// i[H₀, A] = −2∂₁²
DiscreteOperator assemble_free_commutator(std::shared_ptr<const TruncatedGrid> grid);

// ⟨v, i[H, A] v⟩ through the matrices: vᵀ(SH − HS)v = −2 (Sv)·(Hv).
double direct_commutator_form(const SparseMatrix& h, const SparseMatrix& s, const Eigen::VectorXd& v);

// Smooth random wave packets, compactly supported at distance ≥ margin from every boundary,
// sampled on the grid. The packets depend only on seed, L and ω, so the same functions are
// sampled on every grid of a refinement ladder.
std::vector<Eigen::VectorXd> interior_test_vectors(const TruncatedGrid& grid, const CrossSection& omega, int count,
                                                   unsigned seed, double margin);

struct CommutatorComparison {
    double ds = 0.0;
    std::vector<double> relative_differences;  // per test vector
    double max_relative = 0.0;
};

CommutatorComparison compare_commutator(const SparseMatrix& h, const SparseMatrix& s, const SparseMatrix& formula,
                                        const std::vector<Eigen::VectorXd>& vectors, double ds);

} // namespace wg
