#include "waveguide/bound_states.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "waveguide/errors.hpp"
#include "waveguide/potential.hpp"

namespace wg {

std::string to_string(Recipe r)
{
    return r == Recipe::transformed ? "transformed" : "weighted-form";
}

double richardson(double coarse, double fine, double ratio, double order)
{
    const double f = std::pow(ratio, order);
    return fine + (fine - coarse) / (f - 1.0);
}

LevelSolve solve_level(const std::shared_ptr<const TubeMetric>& metric, const CrossSection& omega, Recipe recipe, double L, double ds,
                       double du, int max_states, std::optional<double> hint, const ConvergencePolicy& policy)
{
    const auto t0 = std::chrono::steady_clock::now();
    auto grid = std::make_shared<const TruncatedGrid>(omega, L, ds, du, policy.min_transverse_nodes);
    const bool weighted = recipe == Recipe::weighted_form;

    LevelSolve out;
    out.L = L;
    out.ds = grid->ds();
    out.du = grid->du();
    out.unknowns = grid->size();
    out.threshold_h = discrete_transverse_threshold(*grid, weighted);

    SparseMatrix k, mass;
    if (weighted) {
        auto form = assemble_weighted_form(*metric, grid);
        k = std::move(form.stiffness.matrix);
        mass = std::move(form.mass.matrix);
    } else {
        const CoefficientField coeffs(metric);
        const EffectivePotential potential(metric);
        k = assemble_hamiltonian(coeffs, potential, grid).matrix;
    }
    auto below = [&](double x) { return weighted ? count_below_generalized(k, mass, x) : count_below(k, x); };

    out.below_threshold = below(out.threshold_h);
    const int count = static_cast<int>(std::max<Eigen::Index>(1, std::min<Eigen::Index>(out.below_threshold, max_states)));

    EigenOptions opts = policy.solver;
    if (hint && out.unknowns > opts.dense_limit) {
        const double nu = out.threshold_h;
        double sigma = *hint - std::max(0.5 * std::abs(nu - *hint), 1e-3 * nu);
        for (int tries = 0; below(sigma) > 0; ++tries) {
            if (tries > 40) throw SolverError("bound states: could not place the shift below the spectrum", 0.0);
            sigma -= 2.0 * std::max(nu - sigma, 1e-3 * nu);
        }
        opts.shift = sigma;
    }
    const EigenResult r = weighted ? lowest_generalized(k, mass, count, opts) : lowest_eigenvalues(k, count, opts);
    out.values.assign(r.values.data(), r.values.data() + r.values.size());
    out.max_residual = r.residuals.size() ? r.residuals.maxCoeff() : 0.0;
    out.method = r.method;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::vector<BoundState> BoundStateReport::bound_states() const
{
    std::vector<BoundState> out;
    for (const auto& c : candidates)
        if (c.separated) out.push_back(c);
    return out;
}

namespace {

std::string format_ladder(const std::vector<LevelSolve>& ladder)
{
    std::ostringstream out;
    out.precision(12);
    for (const auto& l : ladder) {
        out << "L=" << l.L << " ds=" << l.ds << " du=" << l.du << " threshold_h=" << l.threshold_h << " values=";
        for (std::size_t j = 0; j < l.values.size(); ++j) out << (j ? "," : "") << l.values[j];
        out << '\n';
    }
    return out.str();
}

} // namespace

BoundStateReport bound_states(const std::shared_ptr<const TubeMetric>& metric, const CrossSection& omega, const ThresholdSet& thresholds,
                              const ConvergencePolicy& policy)
{
    if (policy.spacings.size() < 2) throw InputError("bound_states: need at least two spacings");
    for (std::size_t i = 1; i < policy.spacings.size(); ++i)
        if (!(policy.spacings[i] < policy.spacings[i - 1]))
            throw InputError("bound_states: spacings must decrease");

    BoundStateReport rep;
    rep.recipe = policy.recipe;
    rep.nu1 = thresholds.nu1();
    const double ds0 = policy.spacings.front();
    auto level = [&](double L, double ds, std::optional<double> hint) {
        return solve_level(metric, omega, policy.recipe, L, ds, ds * policy.du_over_ds, policy.max_states, hint, policy);
    };

    std::optional<double> hint;
    if (policy.fixed_L) {
        rep.L = *policy.fixed_L;
        rep.truncation_error = 0.0;
        rep.truncation_converged = false;
    } else {
        double L = policy.L0;
        rep.L_ladder.push_back(level(L, ds0, std::nullopt));
        while (true) {
            const double e = rep.L_ladder.back().values.front();
            if (2.0 * L > policy.L_max) {
                rep.truncation_converged = false;
                break;
            }
            rep.L_ladder.push_back(level(2.0 * L, ds0, e));
            const double move = std::abs(e - rep.L_ladder.back().values.front());
            rep.truncation_error = move;
            if (move < policy.trunc_tol_rel * rep.nu1) break;
            L *= 2.0;
        }
        rep.L = L;
        // the accepted L is the smaller of the last pair
        for (const auto& l : rep.L_ladder)
            if (l.L == L) hint = l.values.front();
    }

    for (std::size_t i = 0; i < policy.spacings.size(); ++i) {
        const double ds = policy.spacings[i];
        if (i == 0 && !rep.L_ladder.empty()) {
            for (const auto& l : rep.L_ladder)
                if (l.L == rep.L) rep.ladder.push_back(l);
            if (!rep.ladder.empty()) {
                hint = rep.ladder.back().values.front();
                continue;
            }
        }
        rep.ladder.push_back(level(rep.L, ds, hint));
        hint = rep.ladder.back().values.front();
    }

    const std::size_t n = rep.ladder.size();
    rep.count_last = rep.ladder[n - 1].below_threshold;
    rep.count_previous = rep.ladder[n - 2].below_threshold;
    const auto common = std::min({rep.count_last, rep.count_previous, static_cast<Eigen::Index>(policy.max_states)});

    for (Eigen::Index j = 0; j < common; ++j) {
        BoundState b;
        b.index = static_cast<int>(j);
        std::size_t first = n;
        for (std::size_t i = n; i-- > 0;) {
            if (rep.ladder[i].below_threshold <= j || static_cast<Eigen::Index>(rep.ladder[i].values.size()) <= j) break;
            first = i;
        }
        for (std::size_t i = first; i < n; ++i) b.ladder.push_back(rep.ladder[i].values[static_cast<std::size_t>(j)]);
        const std::size_t m = b.ladder.size();
        const double r_last = rep.ladder[n - 2].ds / rep.ladder[n - 1].ds;
        b.extrapolated = richardson(b.ladder[m - 2], b.ladder[m - 1], r_last);
        b.observed_order = std::numeric_limits<double>::quiet_NaN();
        if (m >= 3) {
            const double d1 = b.ladder[m - 2] - b.ladder[m - 3];
            const double d2 = b.ladder[m - 1] - b.ladder[m - 2];
            if (d1 * d2 < 0.0)
                throw DiagnosticsError("bound_states: non-monotone convergence of candidate " + std::to_string(j),
                                       format_ladder(rep.ladder));
            const double r_prev = rep.ladder[n - 3].ds / rep.ladder[n - 2].ds;
            const double previous = richardson(b.ladder[m - 3], b.ladder[m - 2], r_prev);
            b.error = std::abs(b.extrapolated - previous) + rep.truncation_error;
            b.observed_order = d2 != 0.0 ? std::log(std::abs(d1 / d2)) / std::log(r_last) : 0.0;
            b.order_flag = std::abs(b.observed_order - 2.0) > policy.order_tolerance;
        } else {
            b.error = std::abs(b.extrapolated - b.ladder[m - 1]) + rep.truncation_error;
            b.order_flag = true;
        }
        b.separated = b.extrapolated + b.error < rep.nu1;
        rep.candidates.push_back(std::move(b));
    }
    return rep;
}

} // namespace wg
