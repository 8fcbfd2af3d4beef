#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "waveguide/frames.hpp"

namespace wg {

// 𝓛(s, u) = p(s) + ẽ_μ(s) u^μ sampled s-major, then u.
struct TubeCloud {
    int dimension = 0;
    std::vector<double> s;              // per vertex
    std::vector<Eigen::VectorXd> u;     // per vertex
    std::vector<Eigen::VectorXd> x;     // per vertex
    std::size_t s_count = 0;
    std::size_t u_count = 0;

    [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
};

TubeCloud tube_embedding(const FrameField& frame, const std::vector<Eigen::VectorXd>& cross_section_points,
                         double radius);

struct OverlapResult {
    bool no_overlap = true;
    std::vector<std::pair<std::size_t, std::size_t>> offending;  // vertex indices
    double max_adjacent_spacing = 0.0;
    double min_arc_separation = 0.0;
    double clearance = 0.0;
};

// Heuristic self-overlap certificate: flags vertex pairs closer than `clearance` whose
// arclength parameters differ by more than `min_arc_separation`. Throws ResolutionError
// when s-adjacent vertices are further apart than clearance/2.
OverlapResult check_self_overlap(const TubeCloud& cloud, double min_arc_separation, double clearance,
                                 std::size_t max_reported_pairs = 64);

// Defaults tied to the cross-section radius a: min_arc_separation = 4a, clearance = 1.98a.
OverlapResult check_self_overlap(const TubeCloud& cloud, double radius);

// Plain-text mesh: '#' header naming the columns, then "s u… x…" per vertex.
void write_mesh(std::ostream& out, const TubeCloud& cloud);

} // namespace wg
