#pragma once

#include <vector>

#include <Eigen/Dense>

#include "waveguide/curvature.hpp"

namespace wg {

struct IntegratorOptions {
    double s0 = 0.0;           // where the initial data is imposed
    int substeps = 1;          // RK4 steps per s_grid interval
    double frame_tol = 1e-10;  // orthonormality tolerance checked on output
    int retry_budget = 8;      // step halvings allowed before giving up
};

// Sampled moving frames along the curve. Frames are stored row-wise:
// frenet[k].row(i) is e_{i+1}(s_k), tang[k].row(i) is ẽ_{i+1}(s_k).
struct FrameField {
    std::vector<double> s;
    std::vector<Eigen::MatrixXd> frenet;
    std::vector<Eigen::MatrixXd> rotation;  // (d−1)×(d−1), R_μ^ν with μ as row
    std::vector<Eigen::VectorXd> point;
    std::vector<Eigen::MatrixXd> tang;

    [[nodiscard]] int dimension() const
    {
        return frenet.empty() ? 0 : static_cast<int>(frenet.front().rows());
    }
};

// Polar factor of m: the orthogonal matrix closest to m in Frobenius norm.
Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& m);

struct FrenetSamples {
    std::vector<Eigen::MatrixXd> frame;
    std::vector<Eigen::VectorXd> point;
};

// Integrates ė_i = K_i^j e_j and ṗ = e₁ by RK4 from s0, re-projecting the frame onto
// the nearest orthogonal matrix after each step.
FrenetSamples integrate_frenet(const CurvatureProfile& profile, const Eigen::MatrixXd& initial_frame,
                               const Eigen::VectorXd& initial_point,
                               const std::vector<double>& s_grid,
                               const IntegratorOptions& options = {});

// Integrates Ṙ + R B = 0 with B the transverse block K_α^ν (α, ν ≥ 2).
std::vector<Eigen::MatrixXd> integrate_tang_rotation(const CurvatureProfile& profile,
                                                     const std::vector<double>& s_grid,
                                                     const Eigen::MatrixXd& r0,
                                                     const IntegratorOptions& options = {});

// Frenet frame, Tang rotation and Tang frame with the default initial data:
// standard basis, R0 = 1 and p = 0 at s0.
FrameField build_frame_field(const CurvatureProfile& profile, const std::vector<double>& s_grid,
                             const IntegratorOptions& options = {});

FrameField build_frame_field(const CurvatureProfile& profile, const std::vector<double>& s_grid,
                             const Eigen::MatrixXd& initial_frame,
                             const Eigen::VectorXd& initial_point, const Eigen::MatrixXd& r0,
                             const IntegratorOptions& options = {});

// Uniform grid with `count` samples on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, int count);

} // namespace wg
