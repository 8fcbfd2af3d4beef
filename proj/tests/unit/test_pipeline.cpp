#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "waveguide/pipeline.hpp"

using namespace wg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("wg_pipeline_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_timestamp(std::string s)
{
    const auto b = s.find("timestamp = ");
    if (b != std::string::npos) s.erase(b, s.find('\n', b) - b);
    return s;
}

WaveguideConfig data(const std::string& name) { return load_config(fs::path(WG_TEST_DATA) / name); }

} // namespace

TEST_CASE("check on constant curvature reports the gate failure")
{
    RunOptions opts;
    opts.out_dir = scratch("check");
    const auto r = run_check(data("constant.ini"), opts);
    CHECK(r.exit_code == exit_gate);
    CHECK(r.report.verdict == "FAIL");
    CHECK(slurp(opts.out_dir / "report.txt").find("curvature.item1.kappa") != std::string::npos);
}

TEST_CASE("spectrum refuses a failed gate unless forced")
{
    RunOptions opts;
    opts.out_dir = scratch("gated");
    auto c = data("constant.ini");
    const auto r = run_spectrum(c, opts);
    CHECK(r.exit_code == exit_gate);
    CHECK(r.report.verdict == "GATED");
}

TEST_CASE("export writes one mesh vertex per s and u sample")
{
    RunOptions opts;
    opts.out_dir = scratch("export");
    const auto r = run_export(data("helix.ini"), opts);
    CHECK(r.exit_code == exit_pass);
    std::ifstream mesh(opts.out_dir / "mesh.txt");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(mesh, line))
        if (!line.empty() && line[0] != '#') ++rows;
    std::string u_samples;
    for (const auto& [k, v] : r.report.metadata)
        if (k == "u_samples") u_samples = v;
    CHECK(rows == 81 * std::stoul(u_samples));
    CHECK(fs::exists(opts.out_dir / "metric.csv"));
    CHECK(fs::exists(opts.out_dir / "operator.txt"));
}

TEST_CASE("Mourre on the straight strip passes every window")
{
    RunOptions opts;
    opts.out_dir = scratch("mourre");
    const auto r = run_mourre(data("straight.ini"), opts);
    CHECK(r.exit_code == exit_pass);
    REQUIRE(r.report.mourre.size() == 3);
    for (const auto& m : r.report.mourre) CHECK(m.pass);
}

TEST_CASE("straight strip: no bound state, threshold pi^2/4, reproducible report")
{
    auto c = data("straight.ini");
    c.spacings = {1.0 / 8, 1.0 / 16};
    RunOptions a, b;
    a.out_dir = scratch("straight_a");
    b.out_dir = scratch("straight_b");
    const auto r = run_spectrum(c, a);
    CHECK(r.exit_code == exit_pass);
    REQUIRE(r.report.thresholds);
    CHECK(r.report.thresholds->nu1() == doctest::Approx(std::numbers::pi * std::numbers::pi / 4));
    REQUIRE(r.report.spectra.size() == 1);
    CHECK(r.report.spectra[0].none_detected());
    const std::string text = slurp(a.out_dir / "report.txt");
    CHECK(text.find("status = no bound state detected") != std::string::npos);

    run_spectrum(c, b);
    CHECK(without_timestamp(text) == without_timestamp(slurp(b.out_dir / "report.txt")));

    // the embedded config reproduces the run
    std::istringstream embedded(extract_embedded_config(text));
    const auto again = parse_config(embedded);
    CHECK(canonical_config(again) == canonical_config(c));
}
