#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace wg {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    [[nodiscard]] double length() const noexcept { return hi - lo; }
};

// One curvature function κ_i(s) together with its derivatives.
// `eval(s, n)` returns the n-th derivative; n never exceeds `max_order`.
struct CurvatureFunction {
    std::function<double(double s, int order)> eval;
    int max_order = 0;
};

namespace families {

CurvatureFunction constant(double value);
// κ₀ exp(−(s/σ)²)
CurvatureFunction gaussian_bump(double amplitude, double width);
// κ₀ (1 + (s/σ)²)^(−p/2)
CurvatureFunction power_tail(double amplitude, double width, double p);
// κ₀ / log(e − 1 + ⟨s⟩), a smoothed 1/log(e + |s|)
CurvatureFunction log_tail(double amplitude);

} // namespace families

// The d−1 curvature functions of a unit-speed curve in ℝ^d.
class CurvatureProfile {
public:
    CurvatureProfile(int dimension, std::vector<CurvatureFunction> kappas, Interval s_range,
                     std::optional<double> declared_sup_kappa1 = std::nullopt);

    // Uniformly spaced samples, one row per s sample and one column per curvature.
    // Derivatives are estimated by finite differences (order 4 inside, order 2 at the ends)
    // and interpolated by local cubics between samples.
    static CurvatureProfile from_samples(int dimension, double s_first, double s_step,
                                         const Eigen::MatrixXd& samples);

    [[nodiscard]] int dimension() const noexcept { return dimension_; }
    [[nodiscard]] const Interval& s_range() const noexcept { return s_range_; }

    // i is 1-based (κ₁ … κ_{d−1}).
    [[nodiscard]] double kappa(int i, double s, int order = 0) const;
    [[nodiscard]] int available_order(int i) const;

    // ‖κ₁‖∞: maximum over an 8× refinement of the sampling grid (or a uniform 32768-point
    // sample for analytic profiles), raised to the declared bound when one is supplied.
    [[nodiscard]] double sup_kappa1() const;

    // The skew-symmetric Frenet matrix K (or its n-th s-derivative):
    // K(i, i+1) = κ_{i+1}, K(i+1, i) = −κ_{i+1} with 0-based indices.
    [[nodiscard]] Eigen::MatrixXd frenet_matrix(double s, int order = 0) const;

private:
    int dimension_;
    std::vector<CurvatureFunction> kappas_;
    Interval s_range_;
    std::optional<double> declared_sup_;
    int sample_count_ = 0;  // 0 for analytic profiles
};

} // namespace wg
