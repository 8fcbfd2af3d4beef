#include "waveguide/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "waveguide/errors.hpp"

namespace wg {

std::string to_string(ProblemKind k)
{
    return k == ProblemKind::euclidean_tube ? "euclidean-tube" : "surface-strip";
}

std::filesystem::path WaveguideConfig::resolve(const std::string& file) const
{
    const std::filesystem::path p(file);
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Cursor {
    int line = 0;
    std::string key;
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("line " + std::to_string(line) + ", " + key + ": " + what, line, key);
    }
};

double to_double(const std::string& v, const Cursor& c)
{
    // fractions such as 1/16 are accepted for spacings
    const auto slash = v.find('/');
    if (slash != std::string::npos) {
        const double n = to_double(trim(v.substr(0, slash)), c);
        const double d = to_double(trim(v.substr(slash + 1)), c);
        if (d == 0.0) c.fail("division by zero in '" + v + "'");
        return n / d;
    }
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end) c.fail("expected a number, got '" + v + "'");
    return out;
}

int to_int(const std::string& v, const Cursor& c)
{
    int out = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end) c.fail("expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& v, const Cursor& c)
{
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    c.fail("expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double positive(double v, const Cursor& c)
{
    if (!(v > 0.0)) c.fail("must be positive");
    return v;
}

std::string fmt(double v)
{
    std::ostringstream o;
    o.precision(17);
    o << v;
    return o.str();
}

} // namespace

WaveguideConfig parse_config(std::istream& in, const std::filesystem::path& base_dir)
{
    WaveguideConfig c;
    c.base_dir = base_dir;
    std::map<int, CurvatureSpec> curv;
    std::map<int, int> curv_line;
    std::string section;
    bool seen_problem_kind = false;
    Cursor cur;
    std::string raw;

    using Handler = std::function<void(const std::string&, const Cursor&)>;
    const std::map<std::string, Handler> handlers = {
        {"problem.kind",
         [&](const std::string& v, const Cursor& k) {
             if (seen_problem_kind) k.fail("problem kind given twice");
             seen_problem_kind = true;
             if (v == "euclidean-tube") c.kind = ProblemKind::euclidean_tube;
             else if (v == "surface-strip") c.kind = ProblemKind::surface_strip;
             else k.fail("unknown problem kind '" + v + "'");
         }},
        {"problem.dimension", [&](const std::string& v, const Cursor& k) { c.dimension = to_int(v, k); }},
        {"problem.s_extent", [&](const std::string& v, const Cursor& k) { c.s_extent = positive(to_double(v, k), k); }},
        {"problem.sup_kappa1", [&](const std::string& v, const Cursor& k) { c.sup_kappa1 = to_double(v, k); }},
        {"curvature.table", [&](const std::string& v, const Cursor&) { c.curvature_table = v; }},
        {"cross_section.shape",
         [&](const std::string& v, const Cursor& k) {
             if (v != "interval" && v != "rectangle" && v != "disc") k.fail("unknown shape '" + v + "'");
             c.shape = v;
         }},
        {"cross_section.half_width", [&](const std::string& v, const Cursor& k) { c.half_width = positive(to_double(v, k), k); }},
        {"cross_section.radius", [&](const std::string& v, const Cursor& k) { c.half_width = positive(to_double(v, k), k); }},
        {"cross_section.sides",
         [&](const std::string& v, const Cursor& k) {
             c.sides.clear();
             for (const auto& s : split_list(v)) c.sides.push_back(positive(to_double(s, k), k));
         }},
        {"surface.gauss",
         [&](const std::string& v, const Cursor& k) {
             if (v != "constant" && v != "table") k.fail("gauss must be constant or table");
             c.gauss = v;
         }},
        {"surface.gauss_value", [&](const std::string& v, const Cursor& k) { c.gauss_value = to_double(v, k); }},
        {"surface.gauss_table", [&](const std::string& v, const Cursor&) { c.gauss_table = v; }},
        {"surface.ds", [&](const std::string& v, const Cursor& k) { c.strip_ds = positive(to_double(v, k), k); }},
        {"surface.du", [&](const std::string& v, const Cursor& k) { c.strip_du = positive(to_double(v, k), k); }},
        {"surface.waive_overlap", [&](const std::string& v, const Cursor& k) { c.waive_overlap = to_bool(v, k); }},
        {"numerics.recipe",
         [&](const std::string& v, const Cursor& k) {
             if (v != "transformed" && v != "weighted-form" && v != "both") k.fail("unknown recipe '" + v + "'");
             c.recipe = v;
         }},
        {"numerics.L", [&](const std::string& v, const Cursor& k) { c.L = positive(to_double(v, k), k); }},
        {"numerics.L0", [&](const std::string& v, const Cursor& k) { c.L0 = positive(to_double(v, k), k); }},
        {"numerics.L_max", [&](const std::string& v, const Cursor& k) { c.L_max = positive(to_double(v, k), k); }},
        {"numerics.spacings",
         [&](const std::string& v, const Cursor& k) {
             c.spacings.clear();
             for (const auto& s : split_list(v)) c.spacings.push_back(positive(to_double(s, k), k));
             if (c.spacings.size() < 2) k.fail("need at least two spacings");
             for (std::size_t i = 1; i < c.spacings.size(); ++i)
                 if (!(c.spacings[i] < c.spacings[i - 1])) k.fail("spacings must decrease");
         }},
        {"numerics.du_over_ds", [&](const std::string& v, const Cursor& k) { c.du_over_ds = positive(to_double(v, k), k); }},
        {"numerics.trunc_tol_rel", [&](const std::string& v, const Cursor& k) { c.trunc_tol_rel = positive(to_double(v, k), k); }},
        {"numerics.max_states", [&](const std::string& v, const Cursor& k) { c.max_states = to_int(v, k); }},
        {"numerics.thresholds", [&](const std::string& v, const Cursor& k) { c.thresholds = to_int(v, k); }},
        {"numerics.solver_tol", [&](const std::string& v, const Cursor& k) { c.solver_tol = positive(to_double(v, k), k); }},
        {"checker.zero_tol", [&](const std::string& v, const Cursor& k) { c.zero_tol = positive(to_double(v, k), k); }},
        {"checker.theta_min", [&](const std::string& v, const Cursor& k) { c.theta_min = positive(to_double(v, k), k); }},
        {"checker.residual_max", [&](const std::string& v, const Cursor& k) { c.residual_max = positive(to_double(v, k), k); }},
        {"checker.flat_tol", [&](const std::string& v, const Cursor& k) { c.flat_tol = positive(to_double(v, k), k); }},
        {"mourre.windows",
         [&](const std::string& v, const Cursor& k) {
             c.windows.clear();
             for (const auto& w : split_list(v)) {
                 MourreWindowSpec spec;
                 const auto colon = w.find(':');
                 if (colon == std::string::npos) {
                     spec.lambda = to_double(w, k);
                 } else {
                     spec.threshold = to_int(trim(w.substr(0, colon)), k);
                     spec.fraction = to_double(trim(w.substr(colon + 1)), k);
                     if (spec.threshold < 1) k.fail("threshold index starts at 1");
                     if (!(spec.fraction > 0.0 && spec.fraction < 1.0)) k.fail("window fraction must lie in (0, 1)");
                 }
                 c.windows.push_back(spec);
             }
         }},
        {"mourre.L", [&](const std::string& v, const Cursor& k) { c.mourre_L = positive(to_double(v, k), k); }},
        {"mourre.ds", [&](const std::string& v, const Cursor& k) { c.mourre_ds = positive(to_double(v, k), k); }},
        {"mourre.tolerance", [&](const std::string& v, const Cursor& k) { c.mourre_tolerance = positive(to_double(v, k), k); }},
        {"export.extent", [&](const std::string& v, const Cursor& k) { c.export_extent = positive(to_double(v, k), k); }},
        {"export.s_count", [&](const std::string& v, const Cursor& k) { c.export_s_count = to_int(v, k); }},
        {"export.u_count", [&](const std::string& v, const Cursor& k) { c.export_u_count = to_int(v, k); }},
    };

    while (std::getline(in, raw)) {
        ++cur.line;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                cur.key = line;
                cur.fail("unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        cur.key = section.empty() ? line : section + "." + line;
        if (eq == std::string::npos) cur.fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        cur.key = section.empty() ? key : section + "." + key;
        if (section.empty()) cur.fail("key outside any section");
        if (value.empty()) cur.fail("empty value");

        if (section.rfind("curvature.", 0) == 0) {
            int idx = 0;
            try {
                idx = std::stoi(section.substr(10));
            } catch (const std::exception&) {
                cur.fail("curvature sections are numbered, e.g. [curvature.1]");
            }
            if (idx < 1) cur.fail("curvature index starts at 1");
            auto& spec = curv[idx];
            curv_line[idx] = cur.line;
            if (key == "family") {
                if (value != "constant" && value != "gaussian-bump" && value != "power-tail" && value != "log-tail")
                    cur.fail("unknown curvature family '" + value + "'");
                spec.family = value;
            } else if (key == "amplitude") {
                spec.amplitude = to_double(value, cur);
            } else if (key == "width") {
                spec.width = positive(to_double(value, cur), cur);
            } else if (key == "p") {
                spec.p = positive(to_double(value, cur), cur);
            } else {
                cur.fail("unknown key");
            }
            continue;
        }
        const auto h = handlers.find(cur.key);
        if (h == handlers.end()) cur.fail("unknown key");
        h->second(value, cur);
    }

    Cursor end;
    end.line = cur.line;
    end.key = "problem.dimension";
    if (c.dimension < 2 || c.dimension > 3) end.fail("dimension must be 2 or 3");
    if (c.kind == ProblemKind::surface_strip && c.dimension != 2) end.fail("surface strips are two-dimensional");
    if (c.curvature_table.empty()) {
        for (int i = 1; i < c.dimension; ++i) c.curvatures.push_back(curv.count(i) ? curv[i] : CurvatureSpec{});
        for (const auto& [i, spec] : curv)
            if (i >= c.dimension) {
                end.line = curv_line[i];
                end.key = "curvature." + std::to_string(i);
                end.fail("curvature index exceeds d - 1");
            }
    } else {
        if (!curv.empty()) {
            end.key = "curvature.table";
            end.fail("a curvature table excludes [curvature.N] sections");
        }
        if (!std::filesystem::exists(c.resolve(c.curvature_table))) {
            end.key = "curvature.table";
            end.fail("file not found: " + c.resolve(c.curvature_table).string());
        }
    }
    if (c.kind == ProblemKind::surface_strip && c.gauss == "table") {
        end.key = "surface.gauss_table";
        if (c.gauss_table.empty()) end.fail("gauss = table requires gauss_table");
        if (!std::filesystem::exists(c.resolve(c.gauss_table))) end.fail("file not found: " + c.resolve(c.gauss_table).string());
    }
    end.key = "cross_section.sides";
    if (c.shape == "rectangle") {
        if (c.dimension != 3) end.fail("rectangle cross-sections need d = 3");
        if (c.sides.size() != 2) end.fail("rectangle needs two sides");
    }
    end.key = "cross_section.shape";
    if (c.shape == "disc" && c.dimension != 3) end.fail("disc cross-sections need d = 3");
    if (c.shape == "interval" && c.dimension != 2) end.fail("interval cross-sections need d = 2");
    end.key = "numerics.L_max";
    if (c.L_max < c.L0) end.fail("L_max must be at least L0");
    if (c.s_extent < std::max(c.L_max, c.L.value_or(0.0))) {
        end.key = "problem.s_extent";
        end.fail("s_extent must cover the largest truncation length");
    }
    end.key = "numerics.max_states";
    if (c.max_states < 1) end.fail("must be at least 1");
    end.key = "numerics.thresholds";
    if (c.thresholds < 2) end.fail("must be at least 2");
    end.key = "export.s_count";
    if (c.export_s_count < 2 || c.export_u_count < 2) end.fail("export counts must be at least 2");
    return c;
}

WaveguideConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string(), 0, "");
    return parse_config(in, path.parent_path());
}

std::string canonical_config(const WaveguideConfig& c)
{
    std::ostringstream o;
    o << "[problem]\n";
    o << "kind = " << to_string(c.kind) << '\n';
    o << "dimension = " << c.dimension << '\n';
    o << "s_extent = " << fmt(c.s_extent) << '\n';
    if (c.sup_kappa1) o << "sup_kappa1 = " << fmt(*c.sup_kappa1) << '\n';
    if (!c.curvature_table.empty()) {
        o << "\n[curvature]\ntable = " << c.resolve(c.curvature_table).string() << '\n';
    } else {
        for (std::size_t i = 0; i < c.curvatures.size(); ++i) {
            const auto& k = c.curvatures[i];
            o << "\n[curvature." << i + 1 << "]\n";
            o << "family = " << k.family << '\n';
            o << "amplitude = " << fmt(k.amplitude) << '\n';
            o << "width = " << fmt(k.width) << '\n';
            o << "p = " << fmt(k.p) << '\n';
        }
    }
    o << "\n[cross_section]\nshape = " << c.shape << '\n';
    if (c.shape == "rectangle") o << "sides = " << fmt(c.sides[0]) << ", " << fmt(c.sides[1]) << '\n';
    else o << (c.shape == "disc" ? "radius = " : "half_width = ") << fmt(c.half_width) << '\n';
    if (c.kind == ProblemKind::surface_strip) {
        o << "\n[surface]\ngauss = " << c.gauss << '\n';
        if (c.gauss == "table") o << "gauss_table = " << c.resolve(c.gauss_table).string() << '\n';
        else o << "gauss_value = " << fmt(c.gauss_value) << '\n';
        o << "ds = " << fmt(c.strip_ds) << '\n';
        o << "du = " << fmt(c.strip_du) << '\n';
        o << "waive_overlap = " << (c.waive_overlap ? "true" : "false") << '\n';
    }
    o << "\n[numerics]\nrecipe = " << c.recipe << '\n';
    if (c.L) o << "L = " << fmt(*c.L) << '\n';
    o << "L0 = " << fmt(c.L0) << '\n';
    o << "L_max = " << fmt(c.L_max) << '\n';
    o << "spacings = ";
    for (std::size_t i = 0; i < c.spacings.size(); ++i) o << (i ? ", " : "") << fmt(c.spacings[i]);
    o << '\n';
    o << "du_over_ds = " << fmt(c.du_over_ds) << '\n';
    o << "trunc_tol_rel = " << fmt(c.trunc_tol_rel) << '\n';
    o << "max_states = " << c.max_states << '\n';
    o << "thresholds = " << c.thresholds << '\n';
    o << "solver_tol = " << fmt(c.solver_tol) << '\n';
    o << "\n[checker]\nzero_tol = " << fmt(c.zero_tol) << '\n';
    o << "theta_min = " << fmt(c.theta_min) << '\n';
    o << "residual_max = " << fmt(c.residual_max) << '\n';
    o << "flat_tol = " << fmt(c.flat_tol) << '\n';
    o << "\n[mourre]\n";
    if (!c.windows.empty()) {
        o << "windows = ";
        for (std::size_t i = 0; i < c.windows.size(); ++i) {
            const auto& w = c.windows[i];
            o << (i ? ", " : "");
            if (w.lambda) o << fmt(*w.lambda);
            else o << w.threshold << ':' << fmt(w.fraction);
        }
        o << '\n';
    }
    o << "L = " << fmt(c.mourre_L) << '\n';
    o << "ds = " << fmt(c.mourre_ds) << '\n';
    o << "tolerance = " << fmt(c.mourre_tolerance) << '\n';
    o << "\n[export]\nextent = " << fmt(c.export_extent) << '\n';
    o << "s_count = " << c.export_s_count << '\n';
    o << "u_count = " << c.export_u_count << '\n';
    return o.str();
}

} // namespace wg
