#include "waveguide/grid.hpp"

#include <cmath>
#include <string>

#include "waveguide/errors.hpp"

namespace wg {

TruncatedGrid::TruncatedGrid(const CrossSection& omega, double L, double ds, double du, int min_transverse_nodes)
    : m_(omega.dimension()), L_(L)
{
    if (!(L > 0.0) || !(ds > 0.0) || !(du > 0.0)) throw InputError("grid: L, ds and du must be positive");
    if (m_ > 2) throw InputError("grid: transverse dimension above 2 is not supported");

    const auto ns = static_cast<Eigen::Index>(std::ceil(2.0 * L / ds - 1e-9));
    ds_ = 2.0 * L / static_cast<double>(ns);
    for (Eigen::Index i = 1; i < ns; ++i) s_.push_back(-L + static_cast<double>(i) * ds_);
    if (s_.empty()) throw ResolutionError("grid: no interior s nodes");

    // one spacing for every transverse axis, the finest that divides all sides
    const auto& sides = omega.sides();
    du_ = du;
    std::vector<int> cells(sides.size());
    for (std::size_t k = 0; k < sides.size(); ++k) {
        cells[k] = static_cast<int>(std::ceil(sides[k] / du - 1e-9));
        du_ = std::min(du_, sides[k] / cells[k]);
    }
    for (std::size_t k = 0; k < sides.size(); ++k) {
        cells[k] = static_cast<int>(std::lround(sides[k] / du_));
        if (std::abs(cells[k] * du_ - sides[k]) > 1e-9 * sides[k])
            throw InputError("grid: bounding-box sides are not commensurate with the transverse spacing");
        axis_counts_.push_back(cells[k] - 1);
        if (cells[k] - 1 < min_transverse_nodes)
            throw ResolutionError("grid: " + std::to_string(cells[k] - 1)
                                  + " interior transverse nodes, need at least " + std::to_string(min_transverse_nodes));
    }

    lo_ = omega.bbox_lo();
    std::vector<int> map;
    if (m_ == 1) {
        map.resize(static_cast<std::size_t>(axis_counts_[0]), -1);
        for (int j = 0; j < axis_counts_[0]; ++j) {
            Eigen::VectorXd u(1);
            u[0] = lo_[0] + (j + 1) * du_;
            if (!omega.contains(u)) continue;
            map[static_cast<std::size_t>(j)] = static_cast<int>(u_.size());
            u_.push_back(u);
        }
        for (int j = 0; j < axis_counts_[0]; ++j) {
            if (map[static_cast<std::size_t>(j)] < 0) continue;
            std::array<int, 6> nb{-1, -1, -1, -1, -1, -1};
            if (j > 0) nb[0] = map[static_cast<std::size_t>(j - 1)];
            if (j + 1 < axis_counts_[0]) nb[1] = map[static_cast<std::size_t>(j + 1)];
            neighbours_.push_back(nb);
        }
    } else {
        const int nx = axis_counts_[0], ny = axis_counts_[1];
        map.resize(static_cast<std::size_t>(nx * ny), -1);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                Eigen::VectorXd u(2);
                u << lo_[0] + (i + 1) * du_, lo_[1] + (j + 1) * du_;
                if (!omega.contains(u)) continue;
                map[static_cast<std::size_t>(i * ny + j)] = static_cast<int>(u_.size());
                u_.push_back(u);
            }
        auto at = [&](int i, int j) {
            if (i < 0 || i >= nx || j < 0 || j >= ny) return -1;
            return map[static_cast<std::size_t>(i * ny + j)];
        };
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                if (at(i, j) < 0) continue;
                neighbours_.push_back({at(i - 1, j), at(i + 1, j), at(i, j - 1), at(i, j + 1), -1, -1});
            }
    }
    if (u_.empty()) throw ResolutionError("grid: cross-section contains no interior nodes");
}

} // namespace wg
