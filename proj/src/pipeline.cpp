#include "waveguide/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "waveguide/bound_states.hpp"
#include "waveguide/commutator.hpp"
#include "waveguide/errors.hpp"
#include "waveguide/frames.hpp"
#include "waveguide/mourre.hpp"
#include "waveguide/tube.hpp"

namespace wg {

std::string current_timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream o;
    o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return o.str();
}

namespace {

std::string num(double v)
{
    std::ostringstream o;
    o.precision(12);
    o << v;
    return o.str();
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path, std::size_t columns)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string(), 0, path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        std::vector<double> row;
        double v = 0.0;
        while (ss >> v) row.push_back(v);
        if (!ss.eof()) throw ConfigError(path.string() + ": unparsable value on line " + std::to_string(n), n, path.string());
        if (row.empty()) continue;
        if (row.size() != columns)
            throw ConfigError(path.string() + ": expected " + std::to_string(columns) + " columns on line " + std::to_string(n), n,
                              path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError(path.string() + ": no data", n, path.string());
    return rows;
}

CurvatureFunction family(const CurvatureSpec& k)
{
    if (k.family == "constant") return families::constant(k.amplitude);
    if (k.family == "gaussian-bump") return families::gaussian_bump(k.amplitude, k.width);
    if (k.family == "power-tail") return families::power_tail(k.amplitude, k.width, k.p);
    return families::log_tail(k.amplitude);
}

// sup |κ₀| of a family is attained at s = 0 (or everywhere for constants)
std::optional<double> family_sup(const std::vector<CurvatureSpec>& specs)
{
    if (specs.empty()) return std::nullopt;
    return std::abs(specs.front().amplitude);
}

CurvatureProfile make_profile(const WaveguideConfig& c)
{
    const Interval range{-c.s_extent, c.s_extent};
    if (c.curvature_table.empty()) {
        std::vector<CurvatureFunction> ks;
        for (const auto& k : c.curvatures) ks.push_back(family(k));
        return CurvatureProfile(c.dimension, std::move(ks), range, c.sup_kappa1 ? c.sup_kappa1 : family_sup(c.curvatures));
    }
    const auto path = c.resolve(c.curvature_table);
    const auto rows = read_rows(path, static_cast<std::size_t>(c.dimension));
    if (rows.size() < 7) throw ConfigError(path.string() + ": need at least 7 samples", 0, "curvature.table");
    const double step = rows[1][0] - rows[0][0];
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(rows.size()), c.dimension - 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::abs(rows[i][0] - (rows[0][0] + static_cast<double>(i) * step)) > 1e-9 * std::max(1.0, std::abs(rows[i][0])))
            throw ConfigError(path.string() + ": s column must be uniform", static_cast<int>(i + 1), "curvature.table");
        for (int j = 1; j < c.dimension; ++j) samples(static_cast<Eigen::Index>(i), j - 1) = rows[i][static_cast<std::size_t>(j)];
    }
    return CurvatureProfile::from_samples(c.dimension, rows[0][0], step, samples);
}

// Bilinear interpolation of an "s u K" lattice, clamped outside.
std::function<double(double, double)> gauss_table(const std::filesystem::path& path)
{
    const auto rows = read_rows(path, 3);
    std::vector<double> s, u;
    for (const auto& r : rows) {
        s.push_back(r[0]);
        u.push_back(r[1]);
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (s.size() * u.size() != rows.size() || s.size() < 2 || u.size() < 2)
        throw ConfigError(path.string() + ": K table must be a full s-u lattice", 0, "surface.gauss_table");
    Eigen::MatrixXd k(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(u.size()));
    for (const auto& r : rows) {
        const auto i = std::lower_bound(s.begin(), s.end(), r[0]) - s.begin();
        const auto j = std::lower_bound(u.begin(), u.end(), r[1]) - u.begin();
        k(i, j) = r[2];
    }
    return [s, u, k](double sv, double uv) {
        auto locate = [](const std::vector<double>& g, double x, double& w) {
            x = std::clamp(x, g.front(), g.back());
            auto i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin());
            i = std::clamp<std::size_t>(i, 1, g.size() - 1) - 1;
            w = (x - g[i]) / (g[i + 1] - g[i]);
            return static_cast<Eigen::Index>(i);
        };
        double ws = 0.0, wu = 0.0;
        const auto i = locate(s, sv, ws);
        const auto j = locate(u, uv, wu);
        return (1 - ws) * ((1 - wu) * k(i, j) + wu * k(i, j + 1)) + ws * ((1 - wu) * k(i + 1, j) + wu * k(i + 1, j + 1));
    };
}

std::vector<double> grid_with_step(double lo, double hi, double step)
{
    const auto n = static_cast<int>(std::llround((hi - lo) / step));
    return uniform_grid(lo, hi, n + 1);
}

std::shared_ptr<const CrossSection> make_omega(const WaveguideConfig& c)
{
    if (c.shape == "interval") return std::make_shared<const CrossSection>(CrossSection::interval(c.half_width));
    if (c.shape == "disc") return std::make_shared<const CrossSection>(CrossSection::disc(c.half_width));
    return std::make_shared<const CrossSection>(CrossSection::rectangle(c.sides[0], c.sides[1]));
}

OverlapResult overlap_of(const CurvatureProfile& profile, const CrossSection& omega)
{
    const double a = omega.radius();
    const double extent = std::min(-profile.s_range().lo, profile.s_range().hi);
    const auto s = grid_with_step(-extent, extent, a / 4.0);
    const auto frame = build_frame_field(profile, s);
    const auto cloud = tube_embedding(frame, transverse_samples(omega.dimension(), a, 9), a);
    return check_self_overlap(cloud, a);
}

CheckerOptions checker_options(const WaveguideConfig& c)
{
    CheckerOptions o;
    o.zero_tol = c.zero_tol;
    o.theta_min = c.theta_min;
    o.residual_max = c.residual_max;
    o.flat_tol = c.flat_tol;
    return o;
}

void log(const RunOptions& opts, const std::string& line)
{
    if (opts.log) *opts.log << line << std::endl;
}

SpectralReport base_report(const std::string& command, const Problem& p)
{
    SpectralReport r;
    r.command = command;
    r.config = canonical_config(p.config);
    r.timestamp = current_timestamp();
    r.thresholds = p.thresholds;
    r.metadata.emplace_back("problem", to_string(p.config.kind));
    r.metadata.emplace_back("dimension", std::to_string(p.config.dimension));
    r.metadata.emplace_back("cross_section", p.omega->describe());
    r.metadata.emplace_back("radius", num(p.omega->radius()));
    if (p.profile) r.metadata.emplace_back("sup_kappa1", num(p.profile->sup_kappa1()));
    return r;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

void write_report_file(const RunOptions& opts, const SpectralReport& r)
{
    std::filesystem::create_directories(opts.out_dir);
    std::ostringstream o;
    write_report(o, r);
    write_text(opts.out_dir / "report.txt", o.str());
}

bool gate_passes(const std::vector<AssumptionReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const auto& a) { return a.overall() == Verdict::pass; });
}

std::vector<MourreWindow> resolve_windows(const WaveguideConfig& c, const ThresholdSet& t)
{
    std::vector<MourreWindowSpec> specs = c.windows;
    if (specs.empty()) specs = {{std::nullopt, 1, 0.3}, {std::nullopt, 1, 0.7}, {std::nullopt, 2, 0.4}};
    std::vector<MourreWindow> out;
    for (const auto& s : specs) {
        if (s.lambda) {
            out.push_back({*s.lambda, std::nullopt});
            continue;
        }
        const auto n = static_cast<std::size_t>(s.threshold);
        if (n >= t.size()) throw InputError("mourre window refers to threshold " + std::to_string(n + 1) + " beyond the computed set");
        out.push_back({t.nu[n - 1] + s.fraction * (t.nu[n] - t.nu[n - 1]), std::nullopt});
    }
    return out;
}

} // namespace

Problem build_problem(const WaveguideConfig& c)
{
    Problem p;
    p.config = c;
    p.omega = make_omega(c);
    p.thresholds = cross_section_spectrum(*p.omega, c.thresholds);
    p.profile = std::make_shared<const CurvatureProfile>(make_profile(c));
    if (c.kind == ProblemKind::euclidean_tube) {
        p.metric = metric_from_frames(*p.profile, p.omega->radius());
        return p;
    }
    SurfaceData surface;
    if (c.gauss == "table") {
        surface.gauss_curvature = gauss_table(c.resolve(c.gauss_table));
    } else {
        const double k = c.gauss_value;
        surface.gauss_curvature = [k](double, double) { return k; };
    }
    const auto prof = p.profile;
    surface.geodesic_curvature = {[prof](double s, int n) { return prof->kappa(1, s, n); }, prof->available_order(1)};
    surface.s_range = {-c.s_extent, c.s_extent};
    surface.half_width = c.half_width;
    const auto s_grid = grid_with_step(-c.s_extent, c.s_extent, c.strip_ds);
    const auto u_grid = grid_with_step(-c.half_width, c.half_width, c.strip_du);
    double kmax = 0.0;
    for (std::size_t i = 0; i < s_grid.size(); i += 4)
        for (double u : u_grid) kmax = std::max(kmax, std::abs(surface.gauss_curvature(s_grid[i], u)));
    p.max_abs_gauss = kmax;
    p.flat = kmax < c.flat_tol;
    p.metric = metric_from_jacobi(surface, s_grid, u_grid);
    return p;
}

std::vector<AssumptionReport> assumption_gate(const Problem& p)
{
    const auto opts = checker_options(p.config);
    std::vector<AssumptionReport> out;
    BasicInputs basic;
    basic.radius = p.omega->radius();
    basic.sup_kappa1 = p.profile->sup_kappa1();
    basic.metric = p.metric.get();
    basic.max_abs_gauss = p.max_abs_gauss;
    const bool strip = p.config.kind == ProblemKind::surface_strip;
    basic.overlap_waived = strip && p.config.waive_overlap;
    // flat strips embed in the plane like a d = 2 tube
    if (!basic.overlap_waived && (!strip || p.flat)) {
        try {
            basic.overlap = overlap_of(*p.profile, *p.omega);
        } catch (const ResolutionError&) {
        }
    }
    out.push_back(check_basic(basic, opts));
    if (!strip || p.flat) out.push_back(check_curvature_decay(*p.profile, opts));
    else out.push_back(check_metric_hypotheses(*p.metric, opts));
    out.push_back(check_coefficient_assumptions(CoefficientField(p.metric), EffectivePotential(p.metric), opts));
    return out;
}

RunResult run_check(const WaveguideConfig& config, const RunOptions& opts)
{
    const Problem p = build_problem(config);
    RunResult res;
    res.report = base_report("check", p);
    res.report.assumptions = assumption_gate(p);
    const bool ok = gate_passes(res.report.assumptions);
    res.report.verdict = ok ? "PASS" : "FAIL";
    res.exit_code = ok ? exit_pass : exit_gate;
    write_report_file(opts, res.report);
    return res;
}

RunResult run_spectrum(const WaveguideConfig& config, const RunOptions& opts)
{
    const Problem p = build_problem(config);
    RunResult res;
    auto& rep = res.report;
    rep = base_report("spectrum", p);
    log(opts, "checking assumptions");
    rep.assumptions = assumption_gate(p);
    if (!gate_passes(rep.assumptions)) {
        if (!opts.force) {
            rep.verdict = "GATED";
            rep.messages.push_back("assumption gate not passed; rerun with --force to override");
            res.exit_code = exit_gate;
            write_report_file(opts, rep);
            return res;
        }
        rep.messages.push_back("assumption gate not passed; overridden by --force");
    }

    ConvergencePolicy policy;
    policy.spacings = config.spacings;
    policy.du_over_ds = config.du_over_ds;
    policy.L0 = config.L0;
    policy.L_max = config.L_max;
    policy.fixed_L = config.L;
    policy.trunc_tol_rel = config.trunc_tol_rel;
    policy.max_states = config.max_states;
    policy.solver.tol = config.solver_tol;
    std::vector<Recipe> recipes;
    if (config.recipe != "weighted-form") recipes.push_back(Recipe::transformed);
    if (config.recipe != "transformed") recipes.push_back(Recipe::weighted_form);

    bool ok = true;
    try {
        for (Recipe r : recipes) {
            policy.recipe = r;
            log(opts, "solving with the " + to_string(r) + " recipe");
            const auto t0 = std::chrono::steady_clock::now();
            rep.spectra.push_back(bound_states(p.metric, *p.omega, p.thresholds, policy));
            log(opts, "  done in " + num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");
        }
    } catch (const DiagnosticsError& e) {
        rep.verdict = "ERROR";
        rep.messages.push_back(e.what());
        rep.messages.push_back("raw ladder: " + e.raw_ladder());
        res.exit_code = exit_numerical;
        write_report_file(opts, rep);
        return res;
    } catch (const Error& e) {
        rep.verdict = "ERROR";
        rep.messages.push_back(e.what());
        res.exit_code = exit_numerical;
        write_report_file(opts, rep);
        return res;
    }

    for (const auto& s : rep.spectra) {
        if (!report_sound(s)) {
            ok = false;
            rep.messages.push_back(to_string(s.recipe) + ": a reported bound state is not separated by its error bar");
        }
        // without a bound state the lowest level creeps up to ν₁ like 1/L² and never settles
        if (!config.L && !s.truncation_converged) {
            if (s.none_detected()) {
                rep.messages.push_back(to_string(s.recipe) + ": truncation ladder not converged (no bound state, ignored)");
            } else {
                ok = false;
                rep.messages.push_back(to_string(s.recipe) + ": truncation ladder reached L_max without converging");
            }
        }
        if (!s.count_stable()) {
            ok = false;
            rep.messages.push_back(to_string(s.recipe) + ": bound-state count differs between the last two levels");
        }
    }
    if (rep.spectra.size() == 2) {
        const auto a = rep.spectra[0].bound_states();
        const auto b = rep.spectra[1].bound_states();
        bool agree = a.size() == b.size();
        for (std::size_t i = 0; agree && i < a.size(); ++i)
            agree = std::abs(a[i].extrapolated - b[i].extrapolated) <= 3.0 * std::max(a[i].error, b[i].error);
        rep.metadata.emplace_back("recipes_agree", agree ? "true" : "false");
        if (!agree) {
            ok = false;
            rep.messages.push_back("the two discretisations disagree beyond 3x the larger error bar");
        }
    }
    rep.verdict = ok ? "PASS" : "FAIL";
    res.exit_code = ok ? exit_pass : exit_numerical;
    write_report_file(opts, rep);
    std::ostringstream csv;
    write_spectrum_csv(csv, rep.spectra);
    write_text(opts.out_dir / "spectrum.csv", csv.str());
    return res;
}

RunResult run_mourre(const WaveguideConfig& config, const RunOptions& opts)
{
    const Problem p = build_problem(config);
    RunResult res;
    auto& rep = res.report;
    rep = base_report("mourre", p);
    rep.metadata.emplace_back("operator", "free Hamiltonian");
    rep.metadata.emplace_back("mourre_L", num(config.mourre_L));
    rep.metadata.emplace_back("mourre_ds", num(config.mourre_ds));
    try {
        auto grid = std::make_shared<const TruncatedGrid>(*p.omega, config.mourre_L, config.mourre_ds,
                                                          config.mourre_ds * config.du_over_ds);
        const auto h0 = assemble_free_hamiltonian(grid);
        const auto c0 = assemble_free_commutator(grid);
        MourreOptions mo;
        mo.tolerance_rel = config.mourre_tolerance;
        mo.solver.tol = config.solver_tol;
        rep.mourre = mourre_check_free(h0, c0, p.thresholds, resolve_windows(config, p.thresholds), mo);
    } catch (const Error& e) {
        rep.verdict = "ERROR";
        rep.messages.push_back(e.what());
        res.exit_code = exit_numerical;
        write_report_file(opts, rep);
        return res;
    }
    const bool ok = std::all_of(rep.mourre.begin(), rep.mourre.end(), [](const auto& m) { return m.pass; });
    rep.verdict = ok ? "PASS" : "FAIL";
    res.exit_code = ok ? exit_pass : exit_numerical;
    write_report_file(opts, rep);
    std::ostringstream csv;
    write_mourre_csv(csv, rep.mourre);
    write_text(opts.out_dir / "mourre.csv", csv.str());
    return res;
}

RunResult run_export(const WaveguideConfig& config, const RunOptions& opts)
{
    const Problem p = build_problem(config);
    RunResult res;
    auto& rep = res.report;
    rep = base_report("export", p);
    std::filesystem::create_directories(opts.out_dir);
    const double extent = std::min(config.export_extent, config.s_extent);
    const auto s = uniform_grid(-extent, extent, config.export_s_count);

    std::vector<Eigen::VectorXd> us;
    const double a = p.omega->radius();
    if (p.omega->dimension() == 1) {
        for (double u : uniform_grid(-config.half_width, config.half_width, config.export_u_count))
            us.push_back(Eigen::VectorXd::Constant(1, u));
    } else {
        const Eigen::VectorXd lo = p.omega->bbox_lo(), hi = p.omega->bbox_hi();
        for (double x : uniform_grid(lo[0], hi[0], config.export_u_count))
            for (double y : uniform_grid(lo[1], hi[1], config.export_u_count)) {
                Eigen::VectorXd u(2);
                u << x, y;
                if (u.norm() <= a * (1.0 + 1e-12)) us.push_back(u);
            }
    }
    const bool embeddable = config.kind == ProblemKind::euclidean_tube || p.flat;
    if (embeddable) {
        const auto frame = build_frame_field(*p.profile, s);
        const auto cloud = tube_embedding(frame, us, a);
        std::ostringstream mesh;
        write_mesh(mesh, cloud);
        write_text(opts.out_dir / "mesh.txt", mesh.str());
        rep.metadata.emplace_back("mesh_vertices", std::to_string(cloud.size()));
    } else {
        rep.messages.push_back("curved strip: no embedding into Euclidean space, mesh.txt not written");
    }
    std::ostringstream metric;
    write_metric_csv(metric, *p.metric, s, us);
    write_text(opts.out_dir / "metric.csv", metric.str());

    // operator of the coarsest level, coordinate triplets
    auto grid = std::make_shared<const TruncatedGrid>(*p.omega, config.L.value_or(config.L0), config.spacings.front(),
                                                      config.spacings.front() * config.du_over_ds);
    const auto h = assemble_hamiltonian(CoefficientField(p.metric), EffectivePotential(p.metric), grid);
    std::ostringstream trip;
    write_triplets(trip, h.matrix);
    write_text(opts.out_dir / "operator.txt", trip.str());
    rep.metadata.emplace_back("s_samples", std::to_string(s.size()));
    rep.metadata.emplace_back("u_samples", std::to_string(us.size()));
    rep.metadata.emplace_back("operator_unknowns", std::to_string(grid->size()));
    rep.verdict = "PASS";
    write_report_file(opts, rep);
    return res;
}

} // namespace wg
