#pragma once

#include <optional>
#include <vector>

#include "waveguide/assembly.hpp"
#include "waveguide/cross_section.hpp"

namespace wg {

struct MourreOptions {
    double tolerance_rel = 0.05;     // PASS iff m ≥ 2ρ(λ)(1 − tolerance_rel)
    double epsilon_factor = 0.02;    // ε = epsilon_factor · ρ(λ) unless given explicitly
    double margin_factor = 2.0;      // δ = margin_factor · ε; no threshold may lie within δ of λ
    double wall_mass = 0.01;         // discard eigenvectors with more mass than this near s = ±L
    int wall_nodes = 4;
    EigenOptions solver;
};

struct MourreWindow {
    double lambda = 0.0;
    std::optional<double> epsilon;
};

struct MourreResult {
    double lambda = 0.0;
    double epsilon = 0.0;
    double rho = 0.0;
    double expected = 0.0;   // 2ρ(λ)
    double measured = 0.0;   // min eig of E i[H₀,A] E on range(E)
    Eigen::Index eigenpairs = 0;
    Eigen::Index filtered = 0;  // boundary modes discarded
    bool pass = false;
};

// Free-Hamiltonian estimate E i[H₀,A] E ≥ 2ρ(λ) E. Throws WindowError for windows touching 𝒯, below ν₁,
// or with an empty projector after filtering.
MourreResult mourre_check_window(const DiscreteOperator& h0, const DiscreteOperator& commutator,
                                 const ThresholdSet& thresholds, const MourreWindow& window,
                                 const MourreOptions& opts = {});

std::vector<MourreResult> mourre_check_free(const DiscreteOperator& h0, const DiscreteOperator& commutator,
                                            const ThresholdSet& thresholds, const std::vector<MourreWindow>& windows,
                                            const MourreOptions& opts = {});

} // namespace wg
