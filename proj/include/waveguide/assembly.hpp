#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "waveguide/eigensolver.hpp"
#include "waveguide/grid.hpp"
#include "waveguide/potential.hpp"

namespace wg {

enum class OperatorKind { hamiltonian, free_hamiltonian, dilation, commutator, weighted_stiffness, weighted_mass };

std::string to_string(OperatorKind kind);

struct DiscreteOperator {
    SparseMatrix matrix;
    OperatorKind kind = OperatorKind::hamiltonian;
    std::shared_ptr<const TruncatedGrid> grid;
};

// Nodal samples on the s-lines through every transverse node, walls included:
// value(k, it) at s = −L + k·ds, k = 0 … s_count()+1.
using WallInclusiveField = Eigen::MatrixXd;

// −∂_s c ∂_s (face values by arithmetic mean) + transverse·(−Δ_u) + diag(d), symmetric by construction.
SparseMatrix assemble_s_flux(const TruncatedGrid& grid, const WallInclusiveField& c, double transverse_weight,
                             const Eigen::VectorXd& diagonal);

// H = −∂_s h⁻² ∂_s − Δ_u + V
DiscreteOperator assemble_hamiltonian(const CoefficientField& coeffs, const EffectivePotential& potential,
                                      std::shared_ptr<const TruncatedGrid> grid);

// −Δ with Dirichlet walls
DiscreteOperator assemble_free_hamiltonian(std::shared_ptr<const TruncatedGrid> grid);

// Bilinear elements for ∫ h⁻¹ ψ_s φ_s + h ψ_u φ_u and the mass ∫ h ψ φ (interval cross-sections).
struct WeightedForm {
    DiscreteOperator stiffness;
    DiscreteOperator mass;
};
WeightedForm assemble_weighted_form(const TubeMetric& metric, std::shared_ptr<const TruncatedGrid> grid);

// "row col value" per stored entry, 0-based, precision 17.
void write_triplets(std::ostream& out, const SparseMatrix& m);

// Lowest eigenvalue of the discrete transverse operator on one cross-section slice.
double discrete_transverse_threshold(const TruncatedGrid& grid, bool weighted_form);

} // namespace wg
