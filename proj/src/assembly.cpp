#include "waveguide/assembly.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <vector>

#include "waveguide/errors.hpp"

namespace wg {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Lower triangle (diagonal included) → full matrix, bitwise symmetric.
SparseMatrix symmetric_from_lower(Eigen::Index n, const Triplets& lower)
{
    SparseMatrix low(n, n);
    low.setFromTriplets(lower.begin(), lower.end());
    SparseMatrix strict = low.triangularView<Eigen::StrictlyLower>();
    SparseMatrix full = low + SparseMatrix(strict.transpose());
    full.makeCompressed();
    return full;
}

} // namespace

std::string to_string(OperatorKind kind)
{
    switch (kind) {
    case OperatorKind::hamiltonian: return "H";
    case OperatorKind::free_hamiltonian: return "H0";
    case OperatorKind::dilation: return "A";
    case OperatorKind::commutator: return "commutator";
    case OperatorKind::weighted_stiffness: return "weighted-stiffness";
    case OperatorKind::weighted_mass: return "weighted-mass";
    }
    return "?";
}

SparseMatrix assemble_s_flux(const TruncatedGrid& grid, const WallInclusiveField& c, double transverse_weight,
                             const Eigen::VectorXd& diagonal)
{
    const Eigen::Index ns = grid.s_count();
    const Eigen::Index nt = grid.transverse_count();
    if (c.rows() != ns + 2 || c.cols() != nt) throw InputError("assemble: coefficient field has the wrong shape");
    if (diagonal.size() != grid.size()) throw InputError("assemble: diagonal has the wrong size");
    const double is2 = 1.0 / (grid.ds() * grid.ds());
    const double iu2 = transverse_weight / (grid.du() * grid.du());
    const int m = grid.transverse_dimension();

    // lower triangle only: the s-neighbour below and the transverse neighbours with smaller index
    Triplets t;
    t.reserve(static_cast<std::size_t>(grid.size() * (2 + m)));
    for (Eigen::Index is = 0; is < ns; ++is)
        for (Eigen::Index it = 0; it < nt; ++it) {
            const Eigen::Index r = grid.index(is, it);
            // node is sits at wall-inclusive position k = is + 1
            const double left = 0.5 * (c(is, it) + c(is + 1, it)) * is2;
            const double right = 0.5 * (c(is + 1, it) + c(is + 2, it)) * is2;
            double d = left + right + diagonal[r] + 2.0 * m * iu2;
            t.emplace_back(r, r, d);
            if (is > 0) t.emplace_back(r, grid.index(is - 1, it), -left);
            if (transverse_weight != 0.0)
                for (int mu = 0; mu < m; ++mu) {
                    const int nb = grid.neighbour(it, mu, -1);
                    if (nb >= 0) t.emplace_back(r, grid.index(is, nb), -iu2);
                }
        }
    return symmetric_from_lower(grid.size(), t);
}

DiscreteOperator assemble_hamiltonian(const CoefficientField& coeffs, const EffectivePotential& potential,
                                      std::shared_ptr<const TruncatedGrid> grid)
{
    const Eigen::Index ns = grid->s_count();
    const Eigen::Index nt = grid->transverse_count();
    WallInclusiveField c(ns + 2, nt);
    Eigen::VectorXd diag(grid->size());
    for (Eigen::Index k = 0; k < ns + 2; ++k) {
        const double s = -grid->L() + static_cast<double>(k) * grid->ds();
        for (Eigen::Index it = 0; it < nt; ++it) {
            const auto& u = grid->u()[static_cast<std::size_t>(it)];
            c(k, it) = coeffs.g11(s, u);
            if (k > 0 && k <= ns) diag[grid->index(k - 1, it)] = potential.value(s, u);
        }
    }
    return {assemble_s_flux(*grid, c, 1.0, diag), OperatorKind::hamiltonian, grid};
}

DiscreteOperator assemble_free_hamiltonian(std::shared_ptr<const TruncatedGrid> grid)
{
    const WallInclusiveField c = WallInclusiveField::Ones(grid->s_count() + 2, grid->transverse_count());
    return {assemble_s_flux(*grid, c, 1.0, Eigen::VectorXd::Zero(grid->size())), OperatorKind::free_hamiltonian,
            grid};
}

WeightedForm assemble_weighted_form(const TubeMetric& metric, std::shared_ptr<const TruncatedGrid> grid)
{
    if (grid->transverse_dimension() != 1 || metric.transverse_dimension() != 1)
        throw InputError("weighted form: only interval cross-sections are supported");
    if (grid->transverse_count() != grid->axis_counts()[0])
        throw InputError("weighted form: cross-section must fill its bounding interval");

    const Eigen::Index ns = grid->s_count();
    const Eigen::Index nt = grid->transverse_count();
    const double ds = grid->ds();
    const double du = grid->du();
    const double u0 = grid->bbox_lo()[0];
    static const double gp[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
    static const double gw[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

    Triplets kt, mt;
    kt.reserve(static_cast<std::size_t>(10 * grid->size()));
    mt.reserve(static_cast<std::size_t>(10 * grid->size()));
    Eigen::VectorXd u(1);
    // element (i, j) spans wall-inclusive s positions i, i+1 and u positions j, j+1
    for (Eigen::Index i = 0; i <= ns; ++i) {
        const double sa = -grid->L() + static_cast<double>(i) * ds;
        for (Eigen::Index j = 0; j <= nt; ++j) {
            const double ua = u0 + static_cast<double>(j) * du;
            Eigen::Matrix4d ke = Eigen::Matrix4d::Zero();
            Eigen::Matrix4d me = Eigen::Matrix4d::Zero();
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q) {
                    const double xi = gp[p], eta = gp[q];
                    u[0] = ua + eta * du;
                    const double h = metric.h(sa + xi * ds, u);
                    const double w = gw[p] * gw[q] * ds * du;
                    const double n[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta};
                    const double ns_[4] = {-(1 - eta) / ds, (1 - eta) / ds, -eta / ds, eta / ds};
                    const double nu_[4] = {-(1 - xi) / du, -xi / du, (1 - xi) / du, xi / du};
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b <= a; ++b) {
                            ke(a, b) += w * (ns_[a] * ns_[b] / h + h * nu_[a] * nu_[b]);
                            me(a, b) += w * h * n[a] * n[b];
                        }
                }
            const Eigen::Index si[4] = {i - 1, i, i - 1, i};
            const Eigen::Index ui[4] = {j - 1, j - 1, j, j};
            Eigen::Index g[4];
            for (int a = 0; a < 4; ++a)
                g[a] = (si[a] >= 0 && si[a] < ns && ui[a] >= 0 && ui[a] < nt) ? grid->index(si[a], ui[a]) : -1;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b <= a; ++b) {
                    if (g[a] < 0 || g[b] < 0) continue;
                    const Eigen::Index r = std::max(g[a], g[b]);
                    const Eigen::Index c = std::min(g[a], g[b]);
                    kt.emplace_back(r, c, ke(a, b));
                    mt.emplace_back(r, c, me(a, b));
                }
        }
    }
    WeightedForm out;
    out.stiffness = {symmetric_from_lower(grid->size(), kt), OperatorKind::weighted_stiffness, grid};
    out.mass = {symmetric_from_lower(grid->size(), mt), OperatorKind::weighted_mass, grid};
    return out;
}

void write_triplets(std::ostream& out, const SparseMatrix& m)
{
    out << std::setprecision(17);
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

double discrete_transverse_threshold(const TruncatedGrid& grid, bool weighted_form)
{
    const Eigen::Index nt = grid.transverse_count();
    const double iu2 = 1.0 / (grid.du() * grid.du());
    const int m = grid.transverse_dimension();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nt, nt);
    for (Eigen::Index it = 0; it < nt; ++it) {
        k(it, it) = 2.0 * m * iu2;
        for (int mu = 0; mu < m; ++mu)
            for (int sg : {-1, 1}) {
                const int nb = grid.neighbour(it, mu, sg);
                if (nb >= 0) k(it, nb) = -iu2;
            }
    }
    if (!weighted_form) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
        return es.eigenvalues()[0];
    }
    if (m != 1) throw InputError("weighted-form threshold: only interval cross-sections are supported");
    // linear elements: stiffness (1/du)·tridiag(−1, 2, −1), mass (du/6)·tridiag(1, 4, 1)
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nt, nt);
    for (Eigen::Index it = 0; it < nt; ++it) {
        mass(it, it) = 4.0 * grid.du() / 6.0;
        if (it > 0) mass(it, it - 1) = mass(it - 1, it) = grid.du() / 6.0;
    }
    k *= grid.du();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, mass, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

} // namespace wg
