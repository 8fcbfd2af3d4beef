#pragma once

#include <memory>

#include <Eigen/Dense>

#include "waveguide/metric.hpp"

namespace wg {

// The four summands of V, in the order −5/4 h_{,1}²/h⁴, ½ h_{,11}/h³, −¼ |∇_u h|²/h², ½ Δ_u h/h.
struct PotentialTerms {
    double kinetic = 0.0;
    double second = 0.0;
    double gradient = 0.0;
    double laplacian = 0.0;

    [[nodiscard]] double total() const noexcept { return kinetic + second + gradient + laplacian; }
};

PotentialTerms potential_terms(const MetricJet& jet);
double potential_value(const MetricJet& jet);
double potential_derivative(const MetricJet& jet);

class EffectivePotential {
public:
    // Evaluations with h ≤ h_floor raise SingularityError. `offset` is added to V everywhere.
    explicit EffectivePotential(std::shared_ptr<const TubeMetric> metric, double h_floor = 0.0, double offset = 0.0);

    [[nodiscard]] double value(double s, const Eigen::VectorXd& u) const;
    [[nodiscard]] double derivative(double s, const Eigen::VectorXd& u) const;  // V_{,1}
    [[nodiscard]] PotentialTerms terms(double s, const Eigen::VectorXd& u) const;
    // value and derivative from one metric evaluation
    [[nodiscard]] std::pair<double, double> value_and_derivative(double s, const Eigen::VectorXd& u) const;

    [[nodiscard]] const TubeMetric& metric() const noexcept { return *metric_; }
    [[nodiscard]] std::shared_ptr<const TubeMetric> metric_ptr() const noexcept { return metric_; }
    [[nodiscard]] double offset() const noexcept { return offset_; }
    [[nodiscard]] EffectivePotential shifted(double c) const { return EffectivePotential(metric_, h_floor_, offset_ + c); }

private:
    MetricJet checked_jet(double s, const Eigen::VectorXd& u) const;

    std::shared_ptr<const TubeMetric> metric_;
    double h_floor_;
    double offset_;
};

// G = diag(h⁻², 1, …, 1)
class CoefficientField {
public:
    explicit CoefficientField(std::shared_ptr<const TubeMetric> metric);

    [[nodiscard]] Eigen::MatrixXd matrix(double s, const Eigen::VectorXd& u) const;
    [[nodiscard]] double g11(double s, const Eigen::VectorXd& u) const;
    [[nodiscard]] double g11_derivative(double s, const Eigen::VectorXd& u) const;  // −2 h_{,1}/h³
    // C₋ = c₊⁻², C₊ = max(c₋⁻², 1) from the metric's ellipticity bounds.
    [[nodiscard]] std::pair<double, double> bounds(int sample_budget = 4096) const;

    [[nodiscard]] const TubeMetric& metric() const noexcept { return *metric_; }
    [[nodiscard]] int dimension() const noexcept { return metric_->transverse_dimension() + 1; }

private:
    std::shared_ptr<const TubeMetric> metric_;
};

} // namespace wg
