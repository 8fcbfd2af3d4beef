#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "waveguide/errors.hpp"
#include "waveguide/pipeline.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Spectral toolkit for curved quantum waveguides"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir = ".";
    bool force = false;
    bool verbose = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "problem definition")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--force", force, "run the spectrum even when the assumption gate fails");
        sub->add_flag("--verbose", verbose, "progress on stderr");
    };
    auto* spectrum = app.add_subcommand("spectrum", "bound states below the threshold");
    auto* check = app.add_subcommand("check", "assumption report");
    auto* exporter = app.add_subcommand("export", "mesh, metric and operator files");
    auto* mourre = app.add_subcommand("mourre", "Mourre estimate for the free Hamiltonian");
    for (auto* sub : {spectrum, check, exporter, mourre}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : wg::exit_usage;
    }

    wg::RunOptions opts;
    opts.out_dir = out_dir;
    opts.force = force;
    opts.log = verbose ? &std::cerr : nullptr;
    try {
        const auto config = wg::load_config(config_path);
        wg::RunResult r;
        if (spectrum->parsed()) r = wg::run_spectrum(config, opts);
        else if (check->parsed()) r = wg::run_check(config, opts);
        else if (exporter->parsed()) r = wg::run_export(config, opts);
        else r = wg::run_mourre(config, opts);
        std::cout << r.report.command << ": " << r.report.verdict << '\n';
        for (const auto& m : r.report.messages) std::cout << "  " << m << '\n';
        return r.exit_code;
    } catch (const wg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return wg::exit_usage;
    } catch (const wg::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return wg::exit_numerical;
    } catch (const wg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wg::exit_numerical;
    }
}
