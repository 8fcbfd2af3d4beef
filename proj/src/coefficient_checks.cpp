#include <cmath>
#include <limits>
#include <sstream>

#include "waveguide/assumptions.hpp"
#include "waveguide/errors.hpp"

namespace wg {

AssumptionReport check_coefficient_assumptions(const CoefficientField& coeffs, const EffectivePotential& potential,
                                               const CheckerOptions& opts)
{
    AssumptionReport rep;
    rep.title = "coefficient assumptions";
    rep.options = opts;
    const TubeMetric& metric = coeffs.metric();
    const TubeMetric& vmetric = potential.metric();
    const auto us = transverse_samples(metric.transverse_dimension(), metric.radius(), opts.u_points);

    const auto t = tail_sups(
        [&](double s, Eigen::Ref<Eigen::VectorXd> out) {
            for (const auto& u : us) {
                const MetricJet j = metric.jet(s, u);
                if (!(j.h > 0.0)) {
                    out.setConstant(std::numeric_limits<double>::infinity());
                    return;
                }
                const MetricJet jv = &vmetric == &metric ? j : vmetric.jet(s, u);
                const double g1 = -2.0 * j.h1 / (j.h * j.h * j.h);
                const double v[4] = {1.0 / (j.h * j.h) - 1.0, g1, potential_value(jv), potential_derivative(jv)};
                for (int q = 0; q < 4; ++q)
                    out[q] = std::isfinite(v[q]) ? std::max(out[q], std::abs(v[q])) : std::numeric_limits<double>::infinity();
            }
        },
        4, metric.s_range(), opts);
    if (t.R.size() < 4)
        throw CoverageError("coefficient checks: s_range half-width " + std::to_string(t.coverage)
                            + " gives fewer than 4 ladder points");

    AssumptionItem bounds;
    bounds.id = "coefficients.G.item1.bounds";
    bounds.quantity = "C_minus <= G <= C_plus";
    const auto [cm, cp] = coeffs.bounds();
    std::ostringstream note;
    note.precision(10);
    note << "C_minus = " << cm << ", C_plus = " << cp;
    bounds.notes = note.str();
    bounds.global_sup = cp;
    bounds.verdict = (cm > 0.0 && std::isfinite(cp)) ? Verdict::pass : Verdict::fail;
    rep.items.push_back(bounds);

    rep.items.push_back(limit_item("coefficients.G.item2.limit", "|G - 1|", t, 0, opts));
    rep.items.push_back(decay_item("coefficients.G.item3.decay", "|G_1| (spectral norm)", t, 1, opts, true));
    rep.items.push_back(bounded_item("coefficients.G.item4.divergence", "|G^{1i}_i|", t, 1));
    rep.items.push_back(bounded_item("coefficients.V.item1.bounded", "|V|", t, 2));
    rep.items.push_back(limit_item("coefficients.V.item2.limit", "|V|", t, 2, opts));
    rep.items.push_back(decay_item("coefficients.V.item3.decay", "|V_1|", t, 3, opts, true));
    return rep;
}

} // namespace wg
