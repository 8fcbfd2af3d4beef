#include "waveguide/potential.hpp"

#include <algorithm>
#include <sstream>

#include "waveguide/errors.hpp"

namespace wg {

PotentialTerms potential_terms(const MetricJet& j)
{
    const double h = j.h;
    const double h2 = h * h;
    PotentialTerms t;
    t.kinetic = -1.25 * j.h1 * j.h1 / (h2 * h2);
    t.second = 0.5 * j.h11 / (h2 * h);
    t.gradient = -0.25 * j.grad_sq / h2;
    t.laplacian = 0.5 * j.lap / h;
    return t;
}

double potential_value(const MetricJet& j)
{
    return potential_terms(j).total();
}

double potential_derivative(const MetricJet& j)
{
    const double h = j.h;
    const double h2 = h * h;
    const double h3 = h2 * h;
    const double h4 = h2 * h2;
    const double h5 = h4 * h;
    return 5.0 * j.h1 * j.h1 * j.h1 / h5 - 4.0 * j.h1 * j.h11 / h4 + j.h111 / (2.0 * h3)
           + 0.5 * (j.h1 * j.grad_sq / h3 - 0.5 * j.grad_sq1 / h2 - (j.h1 * j.lap) / h2 + j.lap1 / h);
}

EffectivePotential::EffectivePotential(std::shared_ptr<const TubeMetric> metric, double h_floor, double offset)
    : metric_(std::move(metric)), h_floor_(h_floor), offset_(offset)
{
    if (!metric_) throw InputError("EffectivePotential: null metric");
}

MetricJet EffectivePotential::checked_jet(double s, const Eigen::VectorXd& u) const
{
    MetricJet j = metric_->jet(s, u);
    if (!(j.h > h_floor_)) {
        std::ostringstream msg;
        msg << "effective potential: h = " << j.h << " at or below the floor " << h_floor_ << " at s = " << s;
        throw SingularityError(msg.str(), s, u.size() ? u[0] : 0.0);
    }
    return j;
}

double EffectivePotential::value(double s, const Eigen::VectorXd& u) const
{
    return potential_value(checked_jet(s, u)) + offset_;
}

double EffectivePotential::derivative(double s, const Eigen::VectorXd& u) const
{
    return potential_derivative(checked_jet(s, u));
}

PotentialTerms EffectivePotential::terms(double s, const Eigen::VectorXd& u) const
{
    return potential_terms(checked_jet(s, u));
}

std::pair<double, double> EffectivePotential::value_and_derivative(double s, const Eigen::VectorXd& u) const
{
    const MetricJet j = checked_jet(s, u);
    return {potential_value(j) + offset_, potential_derivative(j)};
}

CoefficientField::CoefficientField(std::shared_ptr<const TubeMetric> metric) : metric_(std::move(metric))
{
    if (!metric_) throw InputError("CoefficientField: null metric");
}

Eigen::MatrixXd CoefficientField::matrix(double s, const Eigen::VectorXd& u) const
{
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dimension(), dimension());
    g(0, 0) = g11(s, u);
    return g;
}

double CoefficientField::g11(double s, const Eigen::VectorXd& u) const
{
    const double h = metric_->h(s, u);
    return 1.0 / (h * h);
}

double CoefficientField::g11_derivative(double s, const Eigen::VectorXd& u) const
{
    const MetricJet j = metric_->jet(s, u);
    return -2.0 * j.h1 / (j.h * j.h * j.h);
}

std::pair<double, double> CoefficientField::bounds(int sample_budget) const
{
    const auto e = ellipticity_bounds(*metric_, sample_budget);
    return {1.0 / (e.c_plus * e.c_plus), std::max(1.0 / (e.c_minus * e.c_minus), 1.0)};
}

} // namespace wg
