#include "waveguide/commutator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "waveguide/errors.hpp"

namespace wg {

DiscreteOperator assemble_dilation(std::shared_ptr<const TruncatedGrid> grid)
{
    const Eigen::Index ns = grid->s_count();
    const Eigen::Index nt = grid->transverse_count();
    const double q = 1.0 / (4.0 * grid->ds());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(2 * grid->size()));
    for (Eigen::Index is = 0; is + 1 < ns; ++is) {
        const double value = (grid->s_at(is) + grid->s_at(is + 1)) * q;
        for (Eigen::Index it = 0; it < nt; ++it) {
            const Eigen::Index a = grid->index(is, it);
            const Eigen::Index b = grid->index(is + 1, it);
            t.emplace_back(a, b, -value);
            t.emplace_back(b, a, value);
        }
    }
    SparseMatrix s(grid->size(), grid->size());
    s.setFromTriplets(t.begin(), t.end());
    return {s, OperatorKind::dilation, grid};
}

DiscreteOperator assemble_commutator(const CoefficientField& coeffs, const EffectivePotential& potential,
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
            const MetricJet j = coeffs.metric().jet(s, u);
            const double g = 1.0 / (j.h * j.h);
            const double g1 = -2.0 * j.h1 / (j.h * j.h * j.h);
            c(k, it) = 2.0 * g - s * g1;
            if (k > 0 && k <= ns) diag[grid->index(k - 1, it)] = -s * potential.derivative(s, u);
        }
    }
    return {assemble_s_flux(*grid, c, 0.0, diag), OperatorKind::commutator, grid};
}

DiscreteOperator assemble_free_commutator(std::shared_ptr<const TruncatedGrid> grid)
{
    const WallInclusiveField c = WallInclusiveField::Constant(grid->s_count() + 2, grid->transverse_count(), 2.0);
    return {assemble_s_flux(*grid, c, 0.0, Eigen::VectorXd::Zero(grid->size())), OperatorKind::commutator, grid};
}

double direct_commutator_form(const SparseMatrix& h, const SparseMatrix& s, const Eigen::VectorXd& v)
{
    return -2.0 * (s * v).dot(h * v);
}

namespace {

double bump(double x)
{
    return std::abs(x) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0;
}

// Transverse profile vanishing within `margin` of ∂ω.
std::function<double(const Eigen::VectorXd&)> transverse_cutoff(const CrossSection& omega, double margin)
{
    switch (omega.kind()) {
    case ShapeKind::interval:
    case ShapeKind::box: {
        Eigen::VectorXd b = 0.5 * (omega.bbox_hi() - omega.bbox_lo()).array() - margin;
        if ((b.array() <= 0.0).any()) throw InputError("test vectors: margin exceeds the cross-section");
        return [b](const Eigen::VectorXd& u) {
            double v = 1.0;
            for (Eigen::Index k = 0; k < u.size(); ++k) v *= bump(u[k] / b[k]);
            return v;
        };
    }
    default: {
        double r = omega.radius() - margin;
        // shrink until the disc of radius r + margin sits inside ω
        for (; r > 0.0; r *= 0.95) {
            bool inside = true;
            for (int k = 0; k < 128 && inside; ++k) {
                const double a = 2.0 * std::numbers::pi * k / 128.0;
                Eigen::VectorXd p(2);
                p << (r + margin) * std::cos(a), (r + margin) * std::sin(a);
                inside = omega.contains(p);
            }
            if (inside) break;
        }
        if (r <= 0.0) throw InputError("test vectors: margin exceeds the cross-section");
        return [r](const Eigen::VectorXd& u) { return bump(u.norm() / r); };
    }
    }
}

} // namespace

std::vector<Eigen::VectorXd> interior_test_vectors(const TruncatedGrid& grid, const CrossSection& omega, int count,
                                                   unsigned seed, double margin)
{
    const double L = grid.L();
    if (!(L > 4.0 * margin)) throw InputError("test vectors: L too small for the margin");
    const auto cut = transverse_cutoff(omega, margin);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int m = grid.transverse_dimension();

    std::vector<Eigen::VectorXd> out;
    for (int n = 0; n < count; ++n) {
        const double room = L - margin;
        const double width = (0.15 + 0.35 * unit(rng)) * room;
        const double centre = (room - width) * (2.0 * unit(rng) - 1.0);
        const double k = 4.0 * unit(rng);
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        Eigen::VectorXd tilt(m);
        for (int mu = 0; mu < m; ++mu) tilt[mu] = 2.0 * unit(rng) - 1.0;

        Eigen::VectorXd v(grid.size());
        for (Eigen::Index is = 0; is < grid.s_count(); ++is) {
            const double s = grid.s_at(is);
            const double longitudinal = bump((s - centre) / width) * std::cos(k * s + phase);
            for (Eigen::Index it = 0; it < grid.transverse_count(); ++it) {
                const auto& u = grid.u()[static_cast<std::size_t>(it)];
                v[grid.index(is, it)] = longitudinal * cut(u) * (1.0 + 0.5 * tilt.dot(u) / omega.radius());
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

CommutatorComparison compare_commutator(const SparseMatrix& h, const SparseMatrix& s, const SparseMatrix& formula,
                                        const std::vector<Eigen::VectorXd>& vectors, double ds)
{
    CommutatorComparison c;
    c.ds = ds;
    for (const auto& v : vectors) {
        const double direct = direct_commutator_form(h, s, v);
        const double assembled = v.dot(formula * v);
        const double rel = std::abs(assembled - direct) / std::max(std::abs(direct), 1e-300);
        c.relative_differences.push_back(rel);
        c.max_relative = std::max(c.max_relative, rel);
    }
    return c;
}

} // namespace wg
