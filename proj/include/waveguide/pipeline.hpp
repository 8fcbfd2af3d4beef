#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "waveguide/assumptions.hpp"
#include "waveguide/config.hpp"
#include "waveguide/cross_section.hpp"
#include "waveguide/curvature.hpp"
#include "waveguide/metric.hpp"
#include "waveguide/report.hpp"

namespace wg {

// Exit codes of the command-line front end.
enum ExitCode : int { exit_pass = 0, exit_usage = 1, exit_gate = 2, exit_numerical = 3 };

struct Problem {
    WaveguideConfig config;
    std::shared_ptr<const CrossSection> omega;
    // curve curvatures for tubes; geodesic curvature (d = 2) for strips
    std::shared_ptr<const CurvatureProfile> profile;
    std::shared_ptr<const TubeMetric> metric;
    ThresholdSet thresholds;
    std::optional<double> max_abs_gauss;  // strips only
    bool flat = false;                    // strip with max|K| < flat_tol
};

Problem build_problem(const WaveguideConfig& config);

// Assumption reports gating the spectrum: tubes use curvature decay; flat strips use curvature decay
// plus flatness; curved strips use the metric hypotheses. Basic and coefficient checks always run.
std::vector<AssumptionReport> assumption_gate(const Problem& problem);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool force = false;
    std::ostream* log = nullptr;  // verbose progress, never part of any report
};

struct RunResult {
    int exit_code = exit_pass;
    SpectralReport report;
};

RunResult run_spectrum(const WaveguideConfig& config, const RunOptions& opts);
RunResult run_check(const WaveguideConfig& config, const RunOptions& opts);
RunResult run_export(const WaveguideConfig& config, const RunOptions& opts);
RunResult run_mourre(const WaveguideConfig& config, const RunOptions& opts);

// UTC, ISO 8601
std::string current_timestamp();

} // namespace wg
