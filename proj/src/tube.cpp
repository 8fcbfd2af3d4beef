#include "waveguide/tube.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <string>
#include <unordered_map>

#include "waveguide/errors.hpp"

namespace wg {

TubeCloud tube_embedding(const FrameField& frame, const std::vector<Eigen::VectorXd>& cross_section_points,
                         double radius)
{
    const int d = frame.dimension();
    for (const auto& u : cross_section_points) {
        if (u.size() != d - 1) throw InputError("tube_embedding: cross-section point has wrong dimension");
        if (u.norm() > radius * (1.0 + 1e-12))
            throw InputError("tube_embedding: cross-section point outside radius a");
    }

    TubeCloud cloud;
    cloud.dimension = d;
    cloud.s_count = frame.s.size();
    cloud.u_count = cross_section_points.size();
    const std::size_t total = cloud.s_count * cloud.u_count;
    cloud.s.reserve(total);
    cloud.u.reserve(total);
    cloud.x.reserve(total);
    for (std::size_t k = 0; k < frame.s.size(); ++k) {
        const Eigen::MatrixXd transverse = frame.tang[k].bottomRows(d - 1);
        for (const auto& u : cross_section_points) {
            cloud.s.push_back(frame.s[k]);
            cloud.u.push_back(u);
            cloud.x.push_back(frame.point[k] + transverse.transpose() * u);
        }
    }
    return cloud;
}

namespace {

struct CellHash {
    std::size_t operator()(const std::vector<std::int64_t>& key) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for (auto v : key) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

} // namespace

OverlapResult check_self_overlap(const TubeCloud& cloud, double min_arc_separation, double clearance,
                                 std::size_t max_reported_pairs)
{
    if (!(clearance > 0.0)) throw InputError("check_self_overlap: clearance must be positive");
    OverlapResult result;
    result.min_arc_separation = min_arc_separation;
    result.clearance = clearance;

    // Resolution: consecutive s samples of the same u must be closer than clearance/2.
    for (std::size_t k = 1; k < cloud.s_count; ++k)
        for (std::size_t m = 0; m < cloud.u_count; ++m) {
            const double gap = (cloud.x[k * cloud.u_count + m] - cloud.x[(k - 1) * cloud.u_count + m]).norm();
            result.max_adjacent_spacing = std::max(result.max_adjacent_spacing, gap);
        }
    if (result.max_adjacent_spacing >= 0.5 * clearance)
        throw ResolutionError("check_self_overlap: adjacent samples are " + std::to_string(result.max_adjacent_spacing)
                              + " apart, need < clearance/2 = " + std::to_string(0.5 * clearance));

    const int d = cloud.dimension;
    auto cell_of = [&](const Eigen::VectorXd& x) {
        std::vector<std::int64_t> key(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) key[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor(x[i] / clearance));
        return key;
    };
    std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, CellHash> cells;
    for (std::size_t i = 0; i < cloud.size(); ++i) cells[cell_of(cloud.x[i])].push_back(i);

    std::vector<std::int64_t> offset(static_cast<std::size_t>(d));
    int neighbours = 1;
    for (int i = 0; i < d; ++i) neighbours *= 3;

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto base = cell_of(cloud.x[i]);
        for (int code = 0; code < neighbours; ++code) {
            int c = code;
            auto key = base;
            for (int a = 0; a < d; ++a) {
                key[static_cast<std::size_t>(a)] += c % 3 - 1;
                c /= 3;
            }
            const auto it = cells.find(key);
            if (it == cells.end()) continue;
            for (std::size_t j : it->second) {
                if (j <= i) continue;
                if (std::abs(cloud.s[i] - cloud.s[j]) <= min_arc_separation) continue;
                if ((cloud.x[i] - cloud.x[j]).norm() < clearance) {
                    result.no_overlap = false;
                    if (result.offending.size() < max_reported_pairs) result.offending.emplace_back(i, j);
                }
            }
        }
    }
    std::sort(result.offending.begin(), result.offending.end());
    return result;
}

OverlapResult check_self_overlap(const TubeCloud& cloud, double radius)
{
    return check_self_overlap(cloud, 4.0 * radius, 2.0 * radius * 0.99);
}

void write_mesh(std::ostream& out, const TubeCloud& cloud)
{
    const int d = cloud.dimension;
    out << "# s";
    for (int mu = 2; mu <= d; ++mu) out << " u" << mu;
    for (int i = 1; i <= d; ++i) out << " x" << i;
    out << '\n';
    out << std::setprecision(12);
    for (std::size_t k = 0; k < cloud.size(); ++k) {
        out << cloud.s[k];
        for (int mu = 0; mu < d - 1; ++mu) out << ' ' << cloud.u[k][mu];
        for (int i = 0; i < d; ++i) out << ' ' << cloud.x[k][i];
        out << '\n';
    }
}

} // namespace wg
