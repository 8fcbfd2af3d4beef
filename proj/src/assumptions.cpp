#include "waveguide/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "waveguide/errors.hpp"

namespace wg {

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::waived: return "waived";
    }
    return "?";
}

Verdict AssumptionReport::overall() const
{
    bool open = false;
    for (const auto& it : items) {
        if (it.verdict == Verdict::fail) return Verdict::fail;
        if (it.verdict == Verdict::inconclusive) open = true;
    }
    return open ? Verdict::inconclusive : Verdict::pass;
}

std::optional<double> AssumptionReport::theta() const
{
    std::optional<double> out;
    for (const auto& it : items)
        if (it.fit) out = out ? std::min(*out, it.fit->theta) : it.fit->theta;
    return out;
}

const AssumptionItem* AssumptionReport::find(const std::string& id) const
{
    for (const auto& it : items)
        if (it.id == id) return &it;
    return nullptr;
}

void AssumptionReport::append(const AssumptionReport& other)
{
    items.insert(items.end(), other.items.begin(), other.items.end());
}

namespace {

std::string num(double v)
{
    std::ostringstream o;
    o.precision(10);
    o << v;
    return o.str();
}

std::vector<double> abscissae(double S, const CheckerOptions& opts)
{
    std::vector<double> t;
    const double lin = std::min(S, opts.linear_extent);
    const auto n = static_cast<long>(std::floor(lin / opts.linear_step));
    for (long k = 0; k <= n; ++k) t.push_back(static_cast<double>(k) * opts.linear_step);
    if (S > lin) {
        const double factor = std::exp2(1.0 / opts.per_octave);
        for (double x = lin * factor; x < S; x *= factor) t.push_back(x);
        t.push_back(S);
    } else if (t.back() < S) {
        t.push_back(S);
    }
    return t;
}

bool short_ladder(const TailTable& t)
{
    return t.R.size() < 4 || t.R.back() < 8.0 * t.R.front();
}

std::vector<LadderPoint> column_ladder(const TailTable& t, int column)
{
    std::vector<LadderPoint> out;
    for (std::size_t k = 0; k < t.R.size(); ++k) out.push_back({t.R[k], t.sup(static_cast<Eigen::Index>(k), column)});
    return out;
}

AssumptionItem base_item(std::string id, std::string quantity, const TailTable& t, int column)
{
    AssumptionItem it;
    it.id = std::move(id);
    it.quantity = std::move(quantity);
    it.ladder = column_ladder(t, column);
    it.global_sup = t.global[column];
    return it;
}

struct LineFit {
    double c = 0.0, b = 0.0, rms = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.b = sxy / sxx;
    f.c = my - f.b * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.c + f.b * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

} // namespace

TailTable tail_sups(const TailQuantities& eval, int m, Interval s_range, const CheckerOptions& opts)
{
    TailTable t;
    t.coverage = std::min(s_range.hi, -s_range.lo);
    t.global = Eigen::VectorXd::Zero(m);
    if (!(t.coverage > 0.0)) throw CoverageError("tail sampling: s_range must contain a neighbourhood of 0");
    for (double R = opts.R0; R <= 0.5 * t.coverage; R *= 2.0) t.R.push_back(R);
    t.sup = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t.R.size()), m);

    const auto ts = abscissae(t.coverage, opts);
    Eigen::VectorXd running = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd row(m);
    auto absorb = [&](double s) {
        row.setZero();
        eval(s, row);
        for (Eigen::Index j = 0; j < m; ++j) {
            const double v = std::isfinite(row[j]) ? std::abs(row[j]) : std::numeric_limits<double>::infinity();
            running[j] = std::max(running[j], v);
        }
        ++t.samples;
    };
    // walk |s| downward so that the running maximum is the tail sup
    auto k = static_cast<long>(t.R.size()) - 1;
    for (auto i = static_cast<long>(ts.size()) - 1; i >= 0; --i) {
        const double x = ts[static_cast<std::size_t>(i)];
        absorb(x);
        if (x > 0.0) absorb(-x);
        while (k >= 0 && (i == 0 || ts[static_cast<std::size_t>(i - 1)] < t.R[static_cast<std::size_t>(k)])) {
            t.sup.row(k) = running.transpose();
            --k;
        }
    }
    t.global = running;
    return t;
}

std::optional<DecayFit> fit_decay(const std::vector<LadderPoint>& ladder, double global_sup, [[maybe_unused]] const CheckerOptions& opts,
                                  std::string* note)
{
    if (ladder.size() < 4 || !(global_sup > 0.0)) return std::nullopt;
    // underflowed tails carry no slope information
    std::vector<double> x, y;
    for (const auto& p : ladder) {
        if (!(p.sup > std::numeric_limits<double>::min())) continue;
        x.push_back(std::log(p.R));
        y.push_back(std::log(p.sup));
    }
    if (x.size() < 4) {
        if (note) *note = "faster than any power (tail underflows on the ladder)";
        return DecayFit{0.0, 1.0, std::numeric_limits<double>::infinity(), 0.0};
    }
    // the asymptotic rate lives in the upper half of the ladder; the full fit is only reported
    const LineFit full = least_squares(x, y);
    const std::size_t upper = std::max<std::size_t>(3, (x.size() + 1) / 2);
    const std::vector<double> xu(x.end() - static_cast<long>(upper), x.end());
    const std::vector<double> yu(y.end() - static_cast<long>(upper), y.end());
    const LineFit half = least_squares(xu, yu);
    DecayFit f;
    f.theta_raw = -half.b - 1.0;
    f.theta = std::min(f.theta_raw, 1.0);
    f.C = std::exp(half.c);
    f.residual = half.rms;
    if (note) {
        std::ostringstream o;
        o.precision(4);
        o << "upper-half fit; full-ladder theta " << (-full.b - 1.0);
        *note = o.str();
    }
    return f;
}

AssumptionItem limit_item(std::string id, std::string quantity, const TailTable& t, int column, const CheckerOptions& opts)
{
    auto it = base_item(std::move(id), std::move(quantity), t, column);
    if (it.global_sup == 0.0) {
        it.verdict = Verdict::pass;
        it.notes = "identically zero";
        return it;
    }
    if (!std::isfinite(it.global_sup)) {
        it.verdict = Verdict::fail;
        it.notes = "unbounded or non-finite samples";
        return it;
    }
    if (short_ladder(t)) {
        it.verdict = Verdict::inconclusive;
        it.notes = "s_range too short: ladder spans less than a factor 8";
        return it;
    }
    const auto& l = it.ladder;
    if (l.back().sup >= (1.0 - 1e-3) * l.front().sup) {
        it.verdict = Verdict::fail;
        it.notes = "no decay along the ladder";
        return it;
    }
    const double tol = opts.zero_tol * it.global_sup;
    bool strict = true;
    for (std::size_t k = 0; k + 1 < l.size(); ++k)
        if (l[k].sup > tol && !(l[k + 1].sup < l[k].sup)) strict = false;
    if (strict && l.back().sup < tol) {
        it.verdict = Verdict::pass;
        it.notes = "last tail sup " + num(l.back().sup / it.global_sup) + " of the global sup";
    } else {
        it.verdict = Verdict::inconclusive;
        it.notes = strict ? "decreasing but last tail sup " + num(l.back().sup / it.global_sup) + " of the global sup exceeds zero_tol"
                          : "ladder not strictly decreasing above zero_tol";
    }
    return it;
}

AssumptionItem bounded_item(std::string id, std::string quantity, const TailTable& t, int column)
{
    auto it = base_item(std::move(id), std::move(quantity), t, column);
    if (it.global_sup == 0.0) {
        it.verdict = Verdict::pass;
        it.notes = "identically zero";
    } else if (std::isfinite(it.global_sup)) {
        it.verdict = Verdict::pass;
        it.notes = "sup " + num(it.global_sup);
    } else {
        it.verdict = Verdict::fail;
        it.notes = "unbounded or non-finite samples";
    }
    return it;
}

AssumptionItem decay_item(std::string id, std::string quantity, const TailTable& t, int column, const CheckerOptions& opts,
                          bool coverage_throws)
{
    auto it = base_item(std::move(id), std::move(quantity), t, column);
    if (it.global_sup == 0.0) {
        it.verdict = Verdict::pass;
        it.notes = "identically zero";
        return it;
    }
    if (!std::isfinite(it.global_sup)) {
        it.verdict = Verdict::fail;
        it.notes = "unbounded or non-finite samples";
        return it;
    }
    if (short_ladder(t)) {
        if (coverage_throws)
            throw CoverageError("regression for " + it.quantity + " needs at least 4 ladder points; s_range covers "
                                + num(t.coverage));
        it.verdict = Verdict::inconclusive;
        it.notes = "s_range too short: ladder spans less than a factor 8";
        return it;
    }
    std::string note;
    it.fit = fit_decay(it.ladder, it.global_sup, opts, &note);
    const auto& f = *it.fit;
    // above the cap the bound |f| <= C R^-2 holds whatever the curvature of the log-log data
    const bool capped = f.theta_raw >= 1.0;
    const bool ok = f.theta_raw >= opts.theta_min && (f.residual < opts.residual_max || capped);
    it.verdict = ok ? Verdict::pass : Verdict::fail;
    it.notes = note;
    if (f.theta_raw < opts.theta_min) it.notes += "; fitted exponent below theta_min";
    if (!(f.residual < opts.residual_max)) it.notes += capped ? "; residual " + num(f.residual) + " ignored above the cap"
                                                              : "; residual " + num(f.residual) + " too large";
    return it;
}

AssumptionReport check_curvature_decay(const CurvatureProfile& profile, const CheckerOptions& opts)
{
    AssumptionReport rep;
    rep.title = "curvature decay";
    rep.options = opts;
    const int d = profile.dimension();

    auto order_ok = [&](int i, int order) { return i <= d - 1 && profile.available_order(i) >= order; };
    auto missing = [&](std::string id, std::string quantity, int i, int order) {
        AssumptionItem it;
        it.id = std::move(id);
        it.quantity = std::move(quantity);
        it.verdict = Verdict::inconclusive;
        it.notes = "kappa" + std::to_string(i) + " has no derivative of order " + std::to_string(order);
        return it;
    };

    if (d == 2) {
        const int top = profile.available_order(1);
        auto k = [&](double s, int n) { return n <= top ? profile.kappa(1, s, n) : std::numeric_limits<double>::quiet_NaN(); };
        const auto t = tail_sups(
            [&](double s, Eigen::Ref<Eigen::VectorXd> out) {
                out[0] = k(s, 0);
                out[1] = k(s, 2);
                out[2] = k(s, 1);
                out[3] = k(s, 3);
            },
            4, profile.s_range(), opts);
        rep.items.push_back(limit_item("curvature.item1.kappa", "|kappa|", t, 0, opts));
        rep.items.push_back(top >= 2 ? limit_item("curvature.item1.kappa_dd", "|kappa''|", t, 1, opts)
                                     : missing("curvature.item1.kappa_dd", "|kappa''|", 1, 2));
        AssumptionItem zero;
        zero.id = "curvature.item2.transverse";
        zero.quantity = "transverse block (absent for d = 2)";
        zero.verdict = Verdict::pass;
        zero.notes = "identically zero";
        rep.items.push_back(zero);
        rep.items.push_back(decay_item("curvature.item3.kappa_d", "|kappa'|", t, 2, opts));
        rep.items.push_back(top >= 3 ? decay_item("curvature.item3.kappa_ddd", "|kappa'''|", t, 3, opts)
                                     : missing("curvature.item3.kappa_ddd", "|kappa'''|", 1, 3));
        return rep;
    }

    // transverse block B and its derivative, built from κ₂, …, κ_{d−1}
    const int nb = d - 1;
    auto block = [&](double s, int order) {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nb, nb);
        for (int i = 0; i + 1 < nb; ++i) {
            const double v = order_ok(i + 2, order) ? profile.kappa(i + 2, s, order) : std::numeric_limits<double>::quiet_NaN();
            b(i, i + 1) = v;
            b(i + 1, i) = -v;
        }
        return b;
    };
    auto k = [&](int i, double s, int n) {
        return order_ok(i, n) ? profile.kappa(i, s, n) : std::numeric_limits<double>::quiet_NaN();
    };
    const auto t = tail_sups(
        [&](double s, Eigen::Ref<Eigen::VectorXd> out) {
            const Eigen::MatrixXd b = block(s, 0);
            const Eigen::MatrixXd bd = block(s, 1);
            out[0] = k(1, s, 0);
            out[1] = k(1, s, 2);
            out[2] = b.norm();
            out[3] = k(2, s, 1);
            out[4] = k(1, s, 1);
            out[5] = k(1, s, 3);
            out[6] = k(2, s, 0);
            out[7] = k(2, s, 2);
            out[8] = (bd * b).col(0).norm();
            out[9] = (b * bd).col(0).norm();
        },
        10, profile.s_range(), opts);
    struct Spec {
        const char* id;
        const char* quantity;
        int column, kappa, order;
    };
    auto add = [&](const Spec& sp, int kind) {
        if (!order_ok(sp.kappa, sp.order)) {
            rep.items.push_back(missing(sp.id, sp.quantity, sp.kappa, sp.order));
            return;
        }
        if (kind == 0) rep.items.push_back(limit_item(sp.id, sp.quantity, t, sp.column, opts));
        if (kind == 1) rep.items.push_back(bounded_item(sp.id, sp.quantity, t, sp.column));
        if (kind == 2) rep.items.push_back(decay_item(sp.id, sp.quantity, t, sp.column, opts));
    };
    add({"curvature.item1.kappa1", "|kappa1|", 0, 1, 0}, 0);
    add({"curvature.item1.kappa1_dd", "|kappa1''|", 1, 1, 2}, 0);
    add({"curvature.item2.block", "|B|", 2, 2, 0}, 1);
    add({"curvature.item2.kappa2_d", "|kappa2'|", 3, 2, 1}, 1);
    add({"curvature.item3.kappa1_d", "|kappa1'|", 4, 1, 1}, 2);
    add({"curvature.item3.kappa1_ddd", "|kappa1'''|", 5, 1, 3}, 2);
    add({"curvature.item3.kappa2", "|kappa2|", 6, 2, 0}, 2);
    add({"curvature.item3.kappa2_dd", "|kappa2''|", 7, 2, 2}, 2);
    add({"curvature.item3.Bd_B", "|(B'B) e1|", 8, 2, 1}, 2);
    add({"curvature.item3.B_Bd", "|(BB') e1|", 9, 2, 1}, 2);
    return rep;
}

std::vector<Eigen::VectorXd> transverse_samples(int transverse_dim, double radius, int points)
{
    std::vector<Eigen::VectorXd> out;
    if (transverse_dim == 1) {
        const int n = std::max(3, points | 1);
        for (int i = 0; i < n; ++i) out.push_back(Eigen::VectorXd::Constant(1, -radius + 2.0 * radius * i / (n - 1)));
        return out;
    }
    out.push_back(Eigen::VectorXd::Zero(transverse_dim));
    const int rings = std::max(1, points / 4);
    for (int r = 1; r <= rings; ++r) {
        const double rad = radius * r / rings;
        for (int mu = 0; mu < transverse_dim; ++mu)
            for (double sign : {-1.0, 1.0}) {
                Eigen::VectorXd u = Eigen::VectorXd::Zero(transverse_dim);
                u[mu] = sign * rad;
                out.push_back(u);
            }
        if (transverse_dim == 2)
            for (int j = 0; j < 4; ++j) {
                const double phi = std::numbers::pi * (0.25 + 0.5 * j);
                out.push_back((Eigen::VectorXd(2) << rad * std::cos(phi), rad * std::sin(phi)).finished());
            }
    }
    return out;
}

AssumptionReport check_metric_hypotheses(const TubeMetric& metric, const CheckerOptions& opts)
{
    AssumptionReport rep;
    rep.title = "metric hypotheses";
    rep.options = opts;
    const auto us = transverse_samples(metric.transverse_dimension(), metric.radius(), opts.u_points);
    const auto t = tail_sups(
        [&](double s, Eigen::Ref<Eigen::VectorXd> out) {
            for (const auto& u : us) {
                const MetricJet j = metric.jet(s, u);
                const double v[8] = {j.h - 1.0, j.h11, j.grad_sq, j.lap, j.h1, j.h111, j.grad_sq1, j.lap1};
                for (int q = 0; q < 8; ++q)
                    out[q] = std::isfinite(v[q]) ? std::max(out[q], std::abs(v[q])) : std::numeric_limits<double>::infinity();
            }
        },
        8, metric.s_range(), opts);
    rep.items.push_back(limit_item("metric.item1.h", "|h - 1|", t, 0, opts));
    rep.items.push_back(limit_item("metric.item2.h_11", "|h_11|", t, 1, opts));
    rep.items.push_back(limit_item("metric.item2.grad_sq", "|grad_u h|^2", t, 2, opts));
    rep.items.push_back(limit_item("metric.item2.lap", "|lap_u h|", t, 3, opts));
    rep.items.push_back(decay_item("metric.item3.h_1", "|h_1|", t, 4, opts));
    rep.items.push_back(decay_item("metric.item3.h_111", "|h_111|", t, 5, opts));
    rep.items.push_back(decay_item("metric.item3.grad_sq_1", "|(|grad_u h|^2)_1|", t, 6, opts));
    rep.items.push_back(decay_item("metric.item3.lap_1", "|(lap_u h)_1|", t, 7, opts));
    return rep;
}

AssumptionReport check_basic(const BasicInputs& in, const CheckerOptions& opts)
{
    AssumptionReport rep;
    rep.title = "basic";
    rep.options = opts;

    AssumptionItem thin;
    thin.id = "basic.thinness";
    thin.quantity = "a * sup|kappa1|";
    if (in.sup_kappa1) {
        const double p = in.radius * *in.sup_kappa1;
        thin.global_sup = p;
        thin.verdict = p < 1.0 ? Verdict::pass : Verdict::fail;
        thin.notes = "a*sup|kappa1| = " + num(p) + ", margin " + num(1.0 - p);
    } else {
        thin.verdict = Verdict::inconclusive;
        thin.notes = "no curvature bound supplied";
    }
    rep.items.push_back(thin);

    AssumptionItem ell;
    ell.id = "basic.ellipticity";
    ell.quantity = "c_minus";
    if (in.metric) {
        const auto b = ellipticity_bounds(*in.metric);
        ell.global_sup = b.c_minus;
        ell.verdict = (b.c_minus > 0.0 && b.within_analytic) ? Verdict::pass : Verdict::fail;
        ell.notes = "sampled h in [" + num(b.c_minus) + ", " + num(b.c_plus) + "]";
        if (b.analytic)
            ell.notes += ", analytic [" + num(b.analytic->first) + ", " + num(b.analytic->second) + "]"
                         + (b.within_analytic ? "" : " violated");
    } else {
        ell.verdict = Verdict::inconclusive;
        ell.notes = "no metric supplied";
    }
    rep.items.push_back(ell);

    AssumptionItem ov;
    ov.id = "basic.overlap";
    ov.quantity = "self-overlap heuristic";
    if (in.overlap_waived) {
        ov.verdict = Verdict::waived;
        ov.notes = "waived (abstract manifold)";
    } else if (in.overlap) {
        ov.verdict = in.overlap->no_overlap ? Verdict::pass : Verdict::fail;
        ov.notes = "clearance " + num(in.overlap->clearance) + ", min arc separation " + num(in.overlap->min_arc_separation)
                   + ", offending pairs " + std::to_string(in.overlap->offending.size()) + "; heuristic criterion";
    } else {
        ov.verdict = Verdict::inconclusive;
        ov.notes = "no overlap check supplied";
    }
    rep.items.push_back(ov);

    if (in.max_abs_gauss) {
        AssumptionItem flat;
        flat.id = "basic.flatness";
        flat.quantity = "max|K|";
        flat.global_sup = *in.max_abs_gauss;
        flat.verdict = *in.max_abs_gauss < opts.flat_tol ? Verdict::pass : Verdict::fail;
        flat.notes = "flat_tol " + num(opts.flat_tol);
        rep.items.push_back(flat);
    }
    return rep;
}

void write_assumption_report(std::ostream& out, const AssumptionReport& report)
{
    const auto& o = report.options;
    out << "[assumptions]\n";
    out << "title = " << report.title << '\n';
    out << "overall = " << to_string(report.overall()) << '\n';
    const auto th = report.theta();
    out << "theta = " << (th ? num(*th) : std::string("none")) << '\n';
    out << "zero_tol = " << num(o.zero_tol) << '\n';
    out << "theta_min = " << num(o.theta_min) << '\n';
    out << "residual_max = " << num(o.residual_max) << '\n';
    out << "R0 = " << num(o.R0) << '\n';
    for (const auto& it : report.items) {
        out << "[[assumptions.item]]\n";
        out << "id = " << it.id << '\n';
        out << "quantity = " << it.quantity << '\n';
        out << "verdict = " << to_string(it.verdict) << '\n';
        if (!it.ladder.empty()) {
            out << "global_sup = " << num(it.global_sup) << '\n';
            out << "ladder = ";
            for (std::size_t k = 0; k < it.ladder.size(); ++k)
                out << (k ? ", " : "") << num(it.ladder[k].R) << ':' << num(it.ladder[k].sup);
            out << '\n';
        }
        if (it.fit) {
            out << "fit_C = " << num(it.fit->C) << '\n';
            out << "fit_theta = " << num(it.fit->theta) << '\n';
            out << "fit_theta_raw = " << num(it.fit->theta_raw) << '\n';
            out << "fit_residual = " << num(it.fit->residual) << '\n';
        }
        if (!it.notes.empty()) out << "notes = " << it.notes << '\n';
    }
}

} // namespace wg
