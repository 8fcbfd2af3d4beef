#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wg {

enum class ShapeKind { interval, box, disc, grid_mask };

// Bounded open connected ω ⊂ ℝ^{d−1}, centred at the origin.
class CrossSection {
public:
    static CrossSection interval(double half_width);
    // Axis-aligned box with the given side lengths, centred at the origin.
    static CrossSection box(std::vector<double> sides);
    static CrossSection rectangle(double lx, double ly) { return box({lx, ly}); }
    static CrossSection disc(double radius);
    // General planar ω given by an open membership test on a bounding box [lo, hi].
    static CrossSection grid_mask(std::function<bool(const Eigen::Vector2d&)> inside, Eigen::Vector2d lo,
                                  Eigen::Vector2d hi, std::string label = "mask");

    [[nodiscard]] ShapeKind kind() const noexcept { return kind_; }
    [[nodiscard]] int dimension() const noexcept { return dimension_; }
    // a = sup_{u∈ω} |u|
    [[nodiscard]] double radius() const noexcept { return radius_; }
    [[nodiscard]] bool contains(const Eigen::VectorXd& u) const;
    [[nodiscard]] Eigen::VectorXd bbox_lo() const { return lo_; }
    [[nodiscard]] Eigen::VectorXd bbox_hi() const { return hi_; }
    [[nodiscard]] const std::vector<double>& sides() const noexcept { return sides_; }
    [[nodiscard]] std::string describe() const;

private:
    CrossSection() = default;

    ShapeKind kind_ = ShapeKind::interval;
    int dimension_ = 1;
    double radius_ = 0.0;
    std::vector<double> sides_;
    Eigen::VectorXd lo_, hi_;
    std::function<bool(const Eigen::Vector2d&)> inside_;
    std::string label_;
};

enum class Exactness { analytic, discretized };

struct ThresholdSet {
    std::vector<double> nu;            // ν₁ ≤ ν₂ ≤ …, with multiplicity
    std::vector<Exactness> exactness;  // per entry

    [[nodiscard]] double nu1() const { return nu.front(); }
    [[nodiscard]] std::size_t size() const noexcept { return nu.size(); }
};

// grid_resolution = interior points per shortest side of the bounding box (masks only, ≥ 16).
ThresholdSet cross_section_spectrum(const CrossSection& omega, int n_max, int grid_resolution = 32);

// For d = 2: 𝒯 = {n² ν₁}, n = 1..n_max (the interval spectrum).
ThresholdSet interval_thresholds(double half_width, int n_max);

// Energy value with an explicit +∞ state.
class ExtendedEnergy {
public:
    static ExtendedEnergy infinity() { return ExtendedEnergy(true, 0.0); }
    static ExtendedEnergy finite(double v) { return ExtendedEnergy(false, v); }

    [[nodiscard]] bool is_infinite() const noexcept { return infinite_; }
    // Throws InputError when infinite.
    [[nodiscard]] double value() const;
    [[nodiscard]] std::string str() const;

private:
    ExtendedEnergy(bool inf, double v) : infinite_(inf), value_(v) {}
    bool infinite_;
    double value_;
};

// ρ(λ) = λ − sup{ζ ∈ 𝒯 : ζ ≤ λ}; +∞ below ν₁. CoverageError when λ exceeds the last threshold.
ExtendedEnergy rho_of_lambda(const ThresholdSet& thresholds, double lambda);

// Zeros of J_m, first `count`, by bracketing and bisection.
std::vector<double> bessel_zeros(int m, int count, double tol = 1e-12);

} // namespace wg
