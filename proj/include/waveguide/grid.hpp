#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "waveguide/cross_section.hpp"

namespace wg {

// Tensor grid on [−L, L] × bbox(ω) with spacing ds along the tube and du across it.
// Only nodes strictly inside are unknowns; the rest carry the Dirichlet condition.
// Unknowns are ordered s-major: index = is · transverse_count() + it.
class TruncatedGrid {
public:
    // ds and du are adjusted down so that 2L/ds and each bbox side / du are integers.
    TruncatedGrid(const CrossSection& omega, double L, double ds, double du, int min_transverse_nodes = 8);

    [[nodiscard]] int transverse_dimension() const noexcept { return m_; }
    [[nodiscard]] double L() const noexcept { return L_; }
    [[nodiscard]] double ds() const noexcept { return ds_; }
    [[nodiscard]] double du() const noexcept { return du_; }

    [[nodiscard]] Eigen::Index s_count() const noexcept { return static_cast<Eigen::Index>(s_.size()); }
    [[nodiscard]] Eigen::Index transverse_count() const noexcept { return static_cast<Eigen::Index>(u_.size()); }
    [[nodiscard]] Eigen::Index size() const noexcept { return s_count() * transverse_count(); }
    [[nodiscard]] Eigen::Index index(Eigen::Index is, Eigen::Index it) const noexcept
    {
        return is * transverse_count() + it;
    }

    // Interior s nodes (walls excluded) and the nodal value of s at position is ∈ [−1, s_count()].
    [[nodiscard]] const std::vector<double>& s() const noexcept { return s_; }
    [[nodiscard]] double s_at(Eigen::Index is) const noexcept { return -L_ + static_cast<double>(is + 1) * ds_; }
    [[nodiscard]] const std::vector<Eigen::VectorXd>& u() const noexcept { return u_; }

    // Transverse neighbour of node it in direction ±e_mu; −1 if it is a boundary node.
    [[nodiscard]] int neighbour(Eigen::Index it, int mu, int sign) const
    {
        return neighbours_[static_cast<std::size_t>(it)][static_cast<std::size_t>(2 * mu + (sign > 0 ? 1 : 0))];
    }
    // Number of interior points per transverse axis of the bounding box.
    [[nodiscard]] const std::vector<int>& axis_counts() const noexcept { return axis_counts_; }
    [[nodiscard]] const Eigen::VectorXd& bbox_lo() const noexcept { return lo_; }

    // True for unknowns within `nodes` s-steps of a wall at s = ±L.
    [[nodiscard]] bool near_s_wall(Eigen::Index is, int nodes) const noexcept
    {
        return is < nodes || is >= s_count() - nodes;
    }

private:
    int m_;
    double L_, ds_, du_;
    std::vector<double> s_;
    std::vector<Eigen::VectorXd> u_;
    std::vector<std::array<int, 6>> neighbours_;
    std::vector<int> axis_counts_;
    Eigen::VectorXd lo_;
};

} // namespace wg
