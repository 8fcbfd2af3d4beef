#include "waveguide/mourre.hpp"

#include <cmath>
#include <sstream>

#include "waveguide/errors.hpp"

namespace wg {

MourreResult mourre_check_window(const DiscreteOperator& h0, const DiscreteOperator& commutator,
                                 const ThresholdSet& thresholds, const MourreWindow& window, const MourreOptions& opts)
{
    if (!h0.grid) throw InputError("mourre: operator without grid");
    const auto rho = rho_of_lambda(thresholds, window.lambda);
    std::ostringstream where;
    where << "lambda = " << window.lambda;
    if (rho.is_infinite())
        throw WindowError("mourre: " + where.str() + " lies below nu_1; the spectral projector of H0 is zero");

    MourreResult r;
    r.lambda = window.lambda;
    r.rho = rho.value();
    r.expected = 2.0 * r.rho;
    r.epsilon = window.epsilon.value_or(opts.epsilon_factor * r.rho);
    const double delta = opts.margin_factor * r.epsilon;
    for (double nu : thresholds.nu)
        if (std::abs(nu - window.lambda) <= delta)
            throw WindowError("mourre: " + where.str() + " is within the margin of the threshold " + std::to_string(nu));
    if (!(r.epsilon > 0.0)) throw WindowError("mourre: zero window width at " + where.str());

    const auto pairs = eigenpairs_in_window(h0.matrix, window.lambda - r.epsilon, window.lambda + r.epsilon, opts.solver);
    r.eigenpairs = pairs.values.size();

    const auto& grid = *h0.grid;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < pairs.values.size(); ++j) {
        const Eigen::VectorXd v = pairs.vectors.col(j);
        double wall = 0.0;
        for (Eigen::Index is = 0; is < grid.s_count(); ++is) {
            if (!grid.near_s_wall(is, opts.wall_nodes)) continue;
            for (Eigen::Index it = 0; it < grid.transverse_count(); ++it) wall += v[grid.index(is, it)] * v[grid.index(is, it)];
        }
        if (wall <= opts.wall_mass * v.squaredNorm()) keep.push_back(j);
    }
    r.filtered = r.eigenpairs - static_cast<Eigen::Index>(keep.size());
    if (keep.empty())
        throw WindowError("mourre: no admissible eigenpairs in (" + std::to_string(window.lambda - r.epsilon) + ", "
                          + std::to_string(window.lambda + r.epsilon) + "); increase L");

    Eigen::MatrixXd basis(grid.size(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = pairs.vectors.col(keep[j]);
    // re-orthonormalise the retained columns
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), basis.cols());
    const Eigen::MatrixXd projected = q.transpose() * (commutator.matrix * q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (projected + projected.transpose()), Eigen::EigenvaluesOnly);
    r.measured = es.eigenvalues()[0];
    r.pass = r.measured >= r.expected * (1.0 - opts.tolerance_rel);
    return r;
}

std::vector<MourreResult> mourre_check_free(const DiscreteOperator& h0, const DiscreteOperator& commutator,
                                            const ThresholdSet& thresholds, const std::vector<MourreWindow>& windows,
                                            const MourreOptions& opts)
{
    std::vector<MourreResult> out;
    out.reserve(windows.size());
    for (const auto& w : windows) out.push_back(mourre_check_window(h0, commutator, thresholds, w, opts));
    return out;
}

} // namespace wg
