// Acceptance runner: one PASS/FAIL line per criterion, with wall-clock time.
// Usage: acceptance [--criterion N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "waveguide/assumptions.hpp"
#include "waveguide/bound_states.hpp"
#include "waveguide/commutator.hpp"
#include "waveguide/frames.hpp"
#include "waveguide/pipeline.hpp"
#include "waveguide/report.hpp"

using namespace wg;
using std::numbers::pi;

namespace {

// Bound state of the criterion-2 strip from the independent mode-expansion oracle
// (tests/oracles/bent_strip_oracle.py), frozen before the pipeline was built.
constexpr double bent_strip_oracle = 2.466122;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double orthogonality_defect(const Eigen::MatrixXd& r)
{
    return (r.transpose() * r - Eigen::MatrixXd::Identity(r.cols(), r.cols())).cwiseAbs().maxCoeff();
}

WaveguideConfig bent_config(ProblemKind kind)
{
    WaveguideConfig c;
    c.kind = kind;
    c.dimension = 2;
    c.s_extent = 256;
    c.curvatures = {{"gaussian-bump", 0.5, 1.0, 1.0}};
    c.shape = "interval";
    c.half_width = 1.0;
    return c;
}

ConvergencePolicy policy_for(const WaveguideConfig& c, Recipe r)
{
    ConvergencePolicy p;
    p.recipe = r;
    p.spacings = c.spacings;
    p.L0 = c.L0;
    p.L_max = c.L_max;
    p.fixed_L = c.L;
    p.trunc_tol_rel = c.trunc_tol_rel;
    p.max_states = c.max_states;
    return p;
}

// The criterion-2 problem is shared by criteria 2, 3 and 5.
const BoundStateReport& bent_report(Recipe r)
{
    static std::optional<BoundStateReport> transformed, weighted;
    auto& slot = r == Recipe::transformed ? transformed : weighted;
    if (!slot) {
        const Problem p = build_problem(bent_config(ProblemKind::euclidean_tube));
        slot = bound_states(p.metric, *p.omega, p.thresholds, policy_for(p.config, r));
    }
    return *slot;
}

Outcome criterion1()
{
    const auto profile = CurvatureProfile(2, {families::constant(0.0)}, {-64, 64});
    const auto metric = metric_from_frames(profile, 1.0);
    const auto omega = CrossSection::interval(1.0);
    ConvergencePolicy policy;
    std::vector<double> lowest;
    for (double ds : {1.0 / 8, 1.0 / 16, 1.0 / 32})
        lowest.push_back(solve_level(metric, omega, Recipe::transformed, 24.0, ds, ds, 1, pi * pi / 4, policy).values.front());
    const double extrapolated = richardson(lowest[1], lowest[2], 2.0);
    const double nu1 = pi * pi / 4;
    const double rel = std::abs(extrapolated - nu1) / nu1;
    return {rel < 2e-3, fmt("extrapolated %.8f vs nu1 %.8f, relative %.2e (limit 2e-3)", extrapolated, nu1, rel)};
}

Outcome criterion2()
{
    const auto& r = bent_report(Recipe::transformed);
    const auto found = r.bound_states();
    if (found.empty()) return {false, "no bound state below nu1"};
    const auto& b = found.front();
    const double rel = std::abs(b.extrapolated - bent_strip_oracle) / bent_strip_oracle;
    const bool ok = b.separated && report_sound(r) && r.count_stable() && r.truncation_converged && rel < 1e-3;
    return {ok, fmt("E = %.8f +- %.1e, nu1 - E = %.2e, counts %ld/%ld, L = %g, oracle %.6f, relative %.1e", b.extrapolated, b.error,
                    r.nu1 - b.extrapolated, static_cast<long>(r.count_previous), static_cast<long>(r.count_last), r.L,
                    bent_strip_oracle, rel)};
}

Outcome criterion3()
{
    const auto a = bent_report(Recipe::transformed).bound_states();
    const auto b = bent_report(Recipe::weighted_form).bound_states();
    if (a.empty() || a.size() != b.size())
        return {false, fmt("bound-state counts differ: %zu vs %zu", a.size(), b.size())};
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = std::abs(a[i].extrapolated - b[i].extrapolated);
        const double bound = 3.0 * std::max(a[i].error, b[i].error);
        ok = ok && diff <= bound;
        d << fmt("E%zu: %.9f vs %.9f, |diff| %.1e <= %.1e; ", i + 1, a[i].extrapolated, b[i].extrapolated, diff, bound);
    }
    return {ok, d.str()};
}

Outcome criterion4()
{
    const double tau = 0.2;
    const CurvatureProfile p(3, {families::constant(0.3), families::constant(tau)}, {-40, 40});
    const auto s = uniform_grid(-40, 40, 80 * 64 + 1);
    const auto r = integrate_tang_rotation(p, s, Eigen::MatrixXd::Identity(2, 2));
    double ortho = 0.0, det = 0.0, angle = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        ortho = std::max(ortho, orthogonality_defect(r[i]));
        det = std::max(det, std::abs(r[i].determinant() - 1.0));
        const double alpha = std::atan2(r[i](1, 0), r[i](0, 0));
        angle = std::max(angle, std::abs(std::remainder(alpha - tau * s[i], 2 * pi)));
    }
    return {ortho < 1e-10 && det < 1e-10 && angle < 1e-8,
            fmt("max|R^T R - 1| %.1e, max|det R - 1| %.1e, max|alpha - tau s| %.1e", ortho, det, angle)};
}

Outcome criterion5()
{
    // Jacobi metric with K = 0 against 1 - kappa u on the sample lattice
    SurfaceData flat;
    flat.gauss_curvature = [](double, double) { return 0.0; };
    flat.geodesic_curvature = families::gaussian_bump(0.5, 1.0);
    flat.s_range = {-16, 16};
    const auto sg = uniform_grid(-16, 16, 32 * 32 + 1);
    const auto ug = uniform_grid(-1, 1, 65);
    const auto m = metric_from_jacobi(flat, sg, ug);
    double worst = 0.0;
    for (std::size_t i = 0; i < sg.size(); ++i)
        for (std::size_t k = 0; k < ug.size(); ++k)
            worst = std::max(worst, std::abs(m->h_sample(i, k) - (1 - 0.5 * std::exp(-sg[i] * sg[i]) * ug[k])));

    // surface-strip pipeline against the euclidean one
    auto c = bent_config(ProblemKind::surface_strip);
    c.gauss = "constant";
    c.gauss_value = 0.0;
    const Problem p = build_problem(c);
    const auto strip = bound_states(p.metric, *p.omega, p.thresholds, policy_for(p.config, Recipe::transformed));
    const auto a = bent_report(Recipe::transformed).bound_states();
    const auto b = strip.bound_states();
    if (a.size() != b.size() || a.empty())
        return {false, fmt("h error %.1e; bound-state counts differ: %zu vs %zu", worst, a.size(), b.size())};
    double diff = 0.0, tol = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i].extrapolated - b[i].extrapolated));
        tol = std::max(tol, 1e-2 * std::max(a[i].error, b[i].error));
    }
    return {worst < 1e-10 && diff <= tol,
            fmt("max|h - (1 - kappa u)| %.1e; strip E %.10f vs tube E %.10f, |diff| %.1e <= %.1e (1%% of the error bar)", worst,
                b.front().extrapolated, a.front().extrapolated, diff, tol)};
}

Outcome criterion6()
{
    const auto omega = CrossSection::interval(1.0);
    const auto t = interval_thresholds(1.0, 6);
    auto grid = std::make_shared<const TruncatedGrid>(omega, 96.0, 1.0 / 8, 1.0 / 8);
    const auto h0 = assemble_free_hamiltonian(grid);
    const auto c0 = assemble_free_commutator(grid);
    const double d1 = t.nu[1] - t.nu[0], d2 = t.nu[2] - t.nu[1];
    std::vector<MourreWindow> windows{{t.nu[0] + 0.3 * d1, {}}, {t.nu[0] + 0.7 * d1, {}}, {t.nu[1] + 0.4 * d2, {}}};
    bool ok = true;
    std::ostringstream d;
    for (const auto& r : mourre_check_free(h0, c0, t, windows)) {
        ok = ok && r.pass && r.measured >= 0.95 * r.expected;
        d << fmt("lambda %.4f: m %.4f vs 2rho %.4f; ", r.lambda, r.measured, r.expected);
    }
    return {ok, d.str()};
}

Outcome criterion7()
{
    const auto omega = CrossSection::interval(1.0);
    const auto metric = metric_from_frames(CurvatureProfile(2, {families::gaussian_bump(0.5, 1.0)}, {-30, 30}), 1.0);
    const CoefficientField g(metric);
    const EffectivePotential v(metric);
    std::vector<double> hs, err;
    for (double ds : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
        auto grid = std::make_shared<const TruncatedGrid>(omega, 8.0, ds, ds);
        const auto vs = interior_test_vectors(*grid, omega, 20, 2024, 0.25);
        const auto cmp = compare_commutator(assemble_hamiltonian(g, v, grid).matrix, assemble_dilation(grid).matrix,
                                            assemble_commutator(g, v, grid).matrix, vs, grid->ds());
        hs.push_back(grid->ds());
        err.push_back(cmp.max_relative);
    }
    // least-squares slope of log err against log ds
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) mx += std::log(hs[i]), my += std::log(err[i]);
    mx /= static_cast<double>(hs.size());
    my /= static_cast<double>(hs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        sxy += (std::log(hs[i]) - mx) * (std::log(err[i]) - my);
        sxx += (std::log(hs[i]) - mx) * (std::log(hs[i]) - mx);
    }
    const double order = sxy / sxx;
    return {order >= 1.7 && order <= 2.3, fmt("max relative difference %.2e, %.2e, %.2e; fitted order %.3f (window [1.7, 2.3])",
                                              err[0], err[1], err[2], order)};
}

Outcome criterion8()
{
    auto text = [](const AssumptionReport& r) {
        std::ostringstream o;
        write_assumption_report(o, r);
        return o.str();
    };
    const CurvatureProfile tail(2, {families::power_tail(0.5, 1.0, 1.5)}, {-1e4, 1e4});
    const CurvatureProfile flat(2, {families::constant(0.3)}, {-1e4, 1e4});
    const auto a = check_curvature_decay(tail);
    const auto b = check_curvature_decay(flat);
    const bool deterministic = text(a) == text(check_curvature_decay(tail)) && text(b) == text(check_curvature_decay(flat));
    const auto* item = a.find("curvature.item3.kappa_d");
    const double theta = item && item->fit ? item->fit->theta : NAN;
    const double raw = item && item->fit ? item->fit->theta_raw : NAN;
    const bool constant_fails = b.find("curvature.item1.kappa")->verdict == Verdict::fail;

    // supplementary calibration: kappa_d ~ |s|^-1.5 for p = 1/2
    const CurvatureProfile half(2, {families::power_tail(0.5, 1.0, 0.5)}, {-1e4, 1e4});
    const auto c = check_curvature_decay(half);
    const auto* ci = c.find("curvature.item3.kappa_d");

    const bool ok = theta >= 0.35 && theta <= 0.65 && constant_fails && deterministic;
    return {ok, fmt("p=1.5: item-3 theta %.3f (raw %.3f, window [0.35, 0.65]); constant kappa item1 %s; deterministic %s; "
                    "supplementary p=0.5: theta %.3f",
                    theta, raw, to_string(b.find("curvature.item1.kappa")->verdict).c_str(), deterministic ? "yes" : "no",
                    ci && ci->fit ? ci->fit->theta : NAN)};
}

Outcome criterion9()
{
    std::mt19937_64 rng(20261017);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::ostringstream d;
    bool all = true;

    // frame orthonormality
    {
        double worst = 0.0;
        for (int trial = 0; trial < 6; ++trial) {
            const int dim = 3 + trial % 2;
            std::vector<CurvatureFunction> ks;
            for (int i = 1; i < dim; ++i) ks.push_back(families::gaussian_bump(0.2 + 0.6 * uni(rng), 0.5 + 2 * uni(rng)));
            const CurvatureProfile p(dim, ks, {-20, 20});
            const auto f = build_frame_field(p, uniform_grid(-20, 20, 40 * 32 + 1));
            for (std::size_t i = 0; i < f.s.size(); ++i) {
                worst = std::max(worst, orthogonality_defect(f.frenet[i].transpose()));
                worst = std::max(worst, orthogonality_defect(f.rotation[i]));
                worst = std::max(worst, orthogonality_defect(f.tang[i].transpose()));
            }
        }
        all = all && worst < 1e-10;
        d << fmt("frames %.1e; ", worst);
    }

    const auto omega = CrossSection::interval(1.0);
    ConvergencePolicy policy;

    // variational monotonicity under nested refinement (conforming weighted form)
    {
        bool ok = true;
        for (int trial = 0; trial < 3; ++trial) {
            const auto m = metric_from_frames(
                CurvatureProfile(2, {families::gaussian_bump(0.3 + 0.6 * uni(rng), 0.6 + uni(rng))}, {-300, 300}), 1.0);
            double previous = INFINITY;
            for (double ds : {1.0 / 4, 1.0 / 8, 1.0 / 16}) {
                const double e = solve_level(m, omega, Recipe::weighted_form, 6.0, ds, ds / 2, 2, {}, policy).values.front();
                ok = ok && e <= previous * (1 + 1e-12);
                previous = e;
            }
        }
        all = all && ok;
        d << "refinement " << (ok ? "ok" : "VIOLATED") << "; ";
    }

    // Dirichlet monotonicity in L
    {
        bool ok = true;
        const auto m = metric_from_frames(CurvatureProfile(2, {families::gaussian_bump(0.8, 1.0)}, {-300, 300}), 1.0);
        for (Recipe r : {Recipe::transformed, Recipe::weighted_form}) {
            double previous = INFINITY;
            for (double L : {2.0, 4.0, 8.0, 16.0, 32.0}) {
                const double e = solve_level(m, omega, r, L, 1.0 / 8, 1.0 / 8, 1, {}, policy).values.front();
                ok = ok && e <= previous + 1e-9;
                previous = e;
            }
        }
        all = all && ok;
        d << "L " << (ok ? "ok" : "VIOLATED") << "; ";
    }

    // report soundness
    {
        bool ok = true;
        int reported = 0;
        const auto t = interval_thresholds(1.0, 4);
        for (int trial = 0; trial < 4; ++trial) {
            const auto m = metric_from_frames(
                CurvatureProfile(2, {families::gaussian_bump(0.5 + 0.45 * uni(rng), 0.7 + 0.8 * uni(rng))}, {-300, 300}), 1.0);
            ConvergencePolicy p;
            p.fixed_L = 24.0;
            p.spacings = {1.0 / 8, 1.0 / 16};
            const auto rep = bound_states(m, omega, t, p);
            ok = ok && report_sound(rep);
            reported += static_cast<int>(rep.bound_states().size());
        }
        all = all && ok;
        d << "soundness " << (ok ? "ok" : "VIOLATED") << " (" << reported << " states); ";
    }

    // rho against a brute-force sup over the thresholds
    {
        bool ok = true;
        const auto t = cross_section_spectrum(CrossSection::rectangle(2.0, 1.3), 12);
        for (int k = 0; k < 2000; ++k) {
            const double lambda = t.nu.front() * 0.5 + (t.nu.back() - 0.5 * t.nu.front()) * uni(rng);
            const auto r = rho_of_lambda(t, lambda);
            double sup = -INFINITY;
            for (double z : t.nu)
                if (z <= lambda) sup = std::max(sup, z);
            if (std::isinf(sup)) ok = ok && r.is_infinite();
            else ok = ok && !r.is_infinite() && r.value() == lambda - sup;
        }
        all = all && ok;
        d << "rho " << (ok ? "ok" : "VIOLATED");
    }
    return {all, d.str()};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
    bool all = true;
    for (int i = 1; i <= 9; ++i) {
        if (only && i != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(i - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "Criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  [" << fmt("%.2f", secs)
                  << " s]" << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
