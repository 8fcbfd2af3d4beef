#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "waveguide/curvature.hpp"

namespace wg {

enum class MetricSource { euclidean_tube, surface_strip };

// h and every partial derivative entering V and V_{,1} at one point (s, u).
struct MetricJet {
    double h = 1.0;
    double h1 = 0.0;    // h_{,1}
    double h11 = 0.0;   // h_{,11}
    double h111 = 0.0;  // h_{,111}
    Eigen::VectorXd grad;   // h_{,μ}
    Eigen::VectorXd grad1;  // h_{,1μ}
    double lap = 0.0;       // δ^{μν} h_{,μν}
    double lap1 = 0.0;      // δ^{μν} h_{,1μν}
    double grad_sq = 0.0;   // δ^{μν} h_{,μ} h_{,ν}
    double grad_sq1 = 0.0;  // (δ^{μν} h_{,μ} h_{,ν})_{,1}
};

// Metric g = diag(h², 1, …, 1) on the reference tube ℝ × ω.
class TubeMetric {
public:
    virtual ~TubeMetric() = default;

    [[nodiscard]] virtual MetricJet jet(double s, const Eigen::VectorXd& u) const = 0;
    [[nodiscard]] virtual double h(double s, const Eigen::VectorXd& u) const { return jet(s, u).h; }
    // |g| = h²
    [[nodiscard]] double determinant(double s, const Eigen::VectorXd& u) const
    {
        const double v = h(s, u);
        return v * v;
    }

    [[nodiscard]] int transverse_dimension() const noexcept { return transverse_dim_; }
    [[nodiscard]] double radius() const noexcept { return radius_; }
    [[nodiscard]] MetricSource source() const noexcept { return source_; }
    [[nodiscard]] const Interval& s_range() const noexcept { return s_range_; }
    // (1 − a‖κ₁‖∞, 1 + a‖κ₁‖∞) for euclidean tubes.
    [[nodiscard]] virtual std::optional<std::pair<double, double>> analytic_bounds() const
    {
        return std::nullopt;
    }

protected:
    TubeMetric(int transverse_dim, double radius, MetricSource source, Interval s_range)
        : transverse_dim_(transverse_dim), radius_(radius), source_(source), s_range_(s_range)
    {}

private:
    int transverse_dim_;
    double radius_;
    MetricSource source_;
    Interval s_range_;
};

// h(s,u) = 1 + u^μ R_μ^α K_α^1 with the closed-form s-derivatives obtained by repeatedly
// applying d/ds (R v) = R (v̇ − B v), B the transverse block of K.
class FrameMetric final : public TubeMetric {
public:
    // rotation samples on s_grid (ignored for d = 2, where R ≡ 1).
    FrameMetric(CurvatureProfile profile, double radius, std::vector<double> s_grid,
                std::vector<Eigen::MatrixXd> rotations);

    [[nodiscard]] MetricJet jet(double s, const Eigen::VectorXd& u) const override;
    [[nodiscard]] double h(double s, const Eigen::VectorXd& u) const override;
    [[nodiscard]] std::optional<std::pair<double, double>> analytic_bounds() const override;

    [[nodiscard]] Eigen::MatrixXd rotation_at(double s) const;
    [[nodiscard]] const CurvatureProfile& profile() const noexcept { return profile_; }
    [[nodiscard]] double sup_kappa1() const noexcept { return sup_kappa1_; }

private:
    CurvatureProfile profile_;
    std::vector<double> s_grid_;
    std::vector<Eigen::MatrixXd> rotations_;
    double sup_kappa1_;
};

// Integrates the Tang rotation on a uniform grid of the given step over the profile's
// s_range and builds the metric. Throws EllipticityError when a‖κ₁‖∞ ≥ 1.
std::shared_ptr<const FrameMetric> metric_from_frames(const CurvatureProfile& profile, double radius,
                                                      double rotation_step = 1.0 / 64.0);

struct SurfaceData {
    std::function<double(double s, double u)> gauss_curvature;
    CurvatureFunction geodesic_curvature;
    Interval s_range;
    double half_width = 1.0;  // strip is u ∈ (−a, a)
};

// h from the Jacobi equation h_{,22} + K h = 0, h(·,0) = 1, h_{,2}(·,0) = −κ, sampled on a
// uniform (s, u) lattice; s-derivatives by fourth-order finite differences across columns.
class JacobiMetric final : public TubeMetric {
public:
    [[nodiscard]] MetricJet jet(double s, const Eigen::VectorXd& u) const override;
    [[nodiscard]] double h(double s, const Eigen::VectorXd& u) const override;

    // Sample values, exposed for tests and exports.
    [[nodiscard]] double h_sample(std::size_t is, std::size_t iu) const { return h_(is, iu); }
    [[nodiscard]] const std::vector<double>& s_samples() const noexcept { return s_; }
    [[nodiscard]] const std::vector<double>& u_samples() const noexcept { return u_; }

private:
    friend std::shared_ptr<const JacobiMetric> metric_from_jacobi(const SurfaceData&, const std::vector<double>&,
                                                                  const std::vector<double>&, int);
    JacobiMetric(double half_width, Interval s_range) : TubeMetric(1, half_width, MetricSource::surface_strip, s_range) {}

    double interpolate(const Eigen::MatrixXd& table, double s, double u) const;

    std::vector<double> s_;
    std::vector<double> u_;
    Eigen::MatrixXd h_, h1_, h11_, h111_, hu_, h1u_, k_, k1_;
};

// s_grid and u_grid must be uniform; u_grid must contain 0 and stay inside [−a, a].
// Each u interval is integrated with `substeps` RK4 steps.
std::shared_ptr<const JacobiMetric> metric_from_jacobi(const SurfaceData& surface, const std::vector<double>& s_grid,
                                                       const std::vector<double>& u_grid, int substeps = 4);

struct EllipticityBounds {
    double c_minus = 1.0;
    double c_plus = 1.0;
    std::optional<std::pair<double, double>> analytic;
    bool within_analytic = true;
};

// Min/max of h over a Halton sample of the truncated domain (plus u = 0 and u = ±a e_μ for
// every sampled s).
EllipticityBounds ellipticity_bounds(const TubeMetric& metric, int sample_budget = 4096);

// CSV snapshot: s, u…, h, h_1, h_11
void write_metric_csv(std::ostream& out, const TubeMetric& metric, const std::vector<double>& s_samples,
                      const std::vector<Eigen::VectorXd>& u_samples);

} // namespace wg
