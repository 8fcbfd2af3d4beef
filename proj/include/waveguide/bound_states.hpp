#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "waveguide/assembly.hpp"
#include "waveguide/cross_section.hpp"
#include "waveguide/metric.hpp"

namespace wg {

enum class Recipe { transformed, weighted_form };

std::string to_string(Recipe r);

struct ConvergencePolicy {
    Recipe recipe = Recipe::transformed;
    std::vector<double> spacings{1.0 / 8, 1.0 / 16, 1.0 / 32};  // coarse to fine
    double du_over_ds = 1.0;
    double L0 = 8.0;
    double L_max = 256.0;
    std::optional<double> fixed_L;  // skips the doubling rule
    double trunc_tol_rel = 1e-6;     // relative to ν₁
    int max_states = 4;
    double order_tolerance = 0.3;
    int min_transverse_nodes = 8;
    EigenOptions solver;
};

struct LevelSolve {
    double L = 0.0, ds = 0.0, du = 0.0;
    Eigen::Index unknowns = 0;
    double threshold_h = 0.0;           // discrete transverse threshold of this level
    Eigen::Index below_threshold = 0;   // eigenvalues below threshold_h (inertia count)
    std::vector<double> values;         // lowest max(1, min(below, max_states)) eigenvalues
    double max_residual = 0.0;
    double seconds = 0.0;
    std::string method;
};

// One discretisation level. `hint` is an estimate of the lowest eigenvalue used to place the shift.
LevelSolve solve_level(const std::shared_ptr<const TubeMetric>& metric, const CrossSection& omega, Recipe recipe, double L, double ds,
                       double du, int max_states, std::optional<double> hint, const ConvergencePolicy& policy);

struct BoundState {
    int index = 0;
    std::vector<double> ladder;   // raw values, coarse to fine
    double extrapolated = 0.0;
    double error = 0.0;           // |R₂ − R₁| + truncation error
    double observed_order = 0.0;  // NaN when fewer than three levels
    bool order_flag = false;      // observed order outside 2 ± order_tolerance
    bool separated = false;       // extrapolated + error < ν₁
};

struct BoundStateReport {
    Recipe recipe = Recipe::transformed;
    double nu1 = 0.0;
    double L = 0.0;
    double truncation_error = 0.0;
    bool truncation_converged = true;
    std::vector<LevelSolve> L_ladder;
    std::vector<LevelSolve> ladder;
    std::vector<BoundState> candidates;
    Eigen::Index count_last = 0;
    Eigen::Index count_previous = 0;

    [[nodiscard]] std::vector<BoundState> bound_states() const;
    [[nodiscard]] bool none_detected() const { return bound_states().empty(); }
    [[nodiscard]] bool count_stable() const { return count_last == count_previous; }
};

// Richardson extrapolation from two levels with spacing ratio `ratio` = h_coarse / h_fine.
double richardson(double coarse, double fine, double ratio, double order = 2.0);

// Doubling rule in L at the coarsest spacing, then the spacing ladder with extrapolation.
// Throws DiagnosticsError when a candidate converges non-monotonically across the ladder.
BoundStateReport bound_states(const std::shared_ptr<const TubeMetric>& metric, const CrossSection& omega, const ThresholdSet& thresholds,
                              const ConvergencePolicy& policy);

} // namespace wg
