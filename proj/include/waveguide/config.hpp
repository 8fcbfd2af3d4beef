#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wg {

enum class ProblemKind { euclidean_tube, surface_strip };

struct CurvatureSpec {
    std::string family = "constant";  // constant | gaussian-bump | power-tail | log-tail
    double amplitude = 0.0;
    double width = 1.0;
    double p = 1.0;
};

struct MourreWindowSpec {
    // either an absolute λ, or ν_n + fraction·(ν_{n+1} − ν_n)
    std::optional<double> lambda;
    int threshold = 1;
    double fraction = 0.5;
};

// One problem per file. Sections: [problem] [curvature] [curvature.N] [cross_section] [surface]
// [numerics] [checker] [mourre] [export]; see README for every key.
struct WaveguideConfig {
    ProblemKind kind = ProblemKind::euclidean_tube;
    int dimension = 2;
    double s_extent = 512.0;  // curvature and metric defined on [−s_extent, s_extent]
    std::optional<double> sup_kappa1;

    std::vector<CurvatureSpec> curvatures;  // κ₁ … κ_{d−1}
    std::string curvature_table;            // "s κ₁ … κ_{d−1}" rows, uniform in s; replaces `curvatures`

    std::string shape = "interval";  // interval | rectangle | disc
    double half_width = 1.0;         // interval half-width or disc radius
    std::vector<double> sides;       // rectangle side lengths

    std::string gauss = "constant";  // constant | table
    double gauss_value = 0.0;
    std::string gauss_table;         // "s u K" rows on a full lattice
    double strip_ds = 1.0 / 32.0;
    double strip_du = 1.0 / 32.0;
    bool waive_overlap = false;

    std::string recipe = "transformed";  // transformed | weighted-form | both
    std::optional<double> L;              // fixed L skips the doubling rule
    double L0 = 8.0;
    double L_max = 256.0;
    std::vector<double> spacings{1.0 / 8, 1.0 / 16, 1.0 / 32};
    double du_over_ds = 1.0;
    double trunc_tol_rel = 1e-6;
    int max_states = 4;
    int thresholds = 6;
    double solver_tol = 1e-10;

    double zero_tol = 1e-4;
    double theta_min = 0.05;
    double residual_max = 0.2;
    double flat_tol = 1e-12;

    std::vector<MourreWindowSpec> windows;
    double mourre_L = 96.0;
    double mourre_ds = 1.0 / 8.0;
    double mourre_tolerance = 0.05;

    double export_extent = 10.0;
    int export_s_count = 161;
    int export_u_count = 9;

    std::filesystem::path base_dir;  // relative file names resolve against this

    [[nodiscard]] std::filesystem::path resolve(const std::string& file) const;
};

// Parses the INI-like text. ConfigError carries the 1-based line and the offending key.
WaveguideConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
WaveguideConfig load_config(const std::filesystem::path& path);

// Fully resolved config in the same grammar; parse_config(canonical_config(c)) reproduces c.
std::string canonical_config(const WaveguideConfig& c);

std::string to_string(ProblemKind k);

} // namespace wg
