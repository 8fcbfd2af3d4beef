#include "waveguide/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "waveguide/errors.hpp"
#include "numerics.hpp"

namespace wg {

namespace families {

CurvatureFunction constant(double value)
{
    return {[value](double, int order) { return order == 0 ? value : 0.0; }, 3};
}

CurvatureFunction gaussian_bump(double amplitude, double width)
{
    if (!(width > 0.0)) throw InputError("gaussian_bump: width must be positive");
    return {[amplitude, width](double s, int order) {
                const double x = s / width;
                const double e = amplitude * std::exp(-x * x);
                switch (order) {
                case 0: return e;
                case 1: return -2.0 * x * e / width;
                case 2: return (4.0 * x * x - 2.0) * e / (width * width);
                default: return (-8.0 * x * x * x + 12.0 * x) * e / (width * width * width);
                }
            },
            3};
}

CurvatureFunction power_tail(double amplitude, double width, double p)
{
    if (!(width > 0.0)) throw InputError("power_tail: width must be positive");
    const double q = 0.5 * p;
    return {[amplitude, width, q](double s, int order) {
                const double x = s / width;
                const double w = 1.0 + x * x;
                switch (order) {
                case 0: return amplitude * std::pow(w, -q);
                case 1: return amplitude * (-2.0 * q * x) * std::pow(w, -q - 1.0) / width;
                case 2:
                    return amplitude
                           * (-2.0 * q * std::pow(w, -q - 1.0)
                              + 4.0 * q * (q + 1.0) * x * x * std::pow(w, -q - 2.0))
                           / (width * width);
                default:
                    return amplitude
                           * (12.0 * q * (q + 1.0) * x * std::pow(w, -q - 2.0)
                              - 8.0 * q * (q + 1.0) * (q + 2.0) * x * x * x * std::pow(w, -q - 3.0))
                           / (width * width * width);
                }
            },
            3};
}

CurvatureFunction log_tail(double amplitude)
{
    return {[amplitude](double s, int order) {
                const double ir = 1.0 / std::hypot(s, 1.0);
                const double r = 1.0 / ir;
                const double r1 = s * ir;
                const double r2 = ir * ir * ir;
                const double r3 = -3.0 * r1 * (ir * ir) * (ir * ir);
                const double q = std::numbers::e - 1.0 + r;
                const double y = std::log(q);
                const double y1 = r1 / q;
                const double y2 = r2 / q - y1 * y1;
                const double y3 = r3 / q - 3.0 * r1 * r2 / (q * q) + 2.0 * y1 * y1 * y1;
                switch (order) {
                case 0: return amplitude / y;
                case 1: return -amplitude * y1 / (y * y);
                case 2: return amplitude * (2.0 * y1 * y1 / (y * y * y) - y2 / (y * y));
                default:
                    return amplitude
                           * (-6.0 * y1 * y1 * y1 / (y * y * y * y) + 6.0 * y1 * y2 / (y * y * y) - y3 / (y * y));
                }
            },
            3};
}

} // namespace families

CurvatureProfile::CurvatureProfile(int dimension, std::vector<CurvatureFunction> kappas,
                                   Interval s_range, std::optional<double> declared_sup_kappa1)
    : dimension_(dimension), kappas_(std::move(kappas)), s_range_(s_range),
      declared_sup_(declared_sup_kappa1)
{
    if (dimension_ < 2) throw InputError("curvature profile: dimension must be at least 2");
    if (static_cast<int>(kappas_.size()) != dimension_ - 1)
        throw InputError("curvature profile: expected " + std::to_string(dimension_ - 1)
                         + " curvature functions, got " + std::to_string(kappas_.size()));
    if (!(s_range_.hi > s_range_.lo)) throw InputError("curvature profile: empty s_range");
    for (const auto& k : kappas_)
        if (!k.eval) throw InputError("curvature profile: missing curvature callable");
}

CurvatureProfile CurvatureProfile::from_samples(int dimension, double s_first, double s_step,
                                                const Eigen::MatrixXd& samples)
{
    if (!(s_step > 0.0)) throw InputError("sampled curvature: step must be positive");
    if (samples.rows() < 7) throw InputError("sampled curvature: need at least 7 samples");
    if (samples.cols() != dimension - 1)
        throw InputError("sampled curvature: column count must equal dimension - 1");
    if (!samples.allFinite()) throw InputError("sampled curvature: non-finite sample");

    const Eigen::Index n = samples.rows();
    std::vector<CurvatureFunction> kappas;
    for (Eigen::Index c = 0; c < samples.cols(); ++c) {
        // Derivative tables of orders 0..3 at the sample points.
        auto tables = std::make_shared<std::vector<Eigen::VectorXd>>(4, Eigen::VectorXd(n));
        const Eigen::VectorXd f = samples.col(c);
        for (int order = 0; order <= 3; ++order)
            for (Eigen::Index k = 0; k < n; ++k)
                (*tables)[static_cast<std::size_t>(order)][k] = detail::fd_derivative([&f](Eigen::Index j) { return f[j]; }, n,
                                                            s_step, k, order);
        kappas.push_back({[tables, s_first, s_step](double s, int order) {
                              const auto& t = (*tables)[static_cast<std::size_t>(order)];
                              const auto c = detail::cubic4((s - s_first) / s_step, t.size());
                              double v = 0.0;
                              for (int q = 0; q < 4; ++q) v += c.w[q] * t[c.start + q];
                              return v;
                          },
                          3});
    }
    CurvatureProfile profile(dimension, std::move(kappas),
                             {s_first, s_first + s_step * static_cast<double>(n - 1)});
    profile.sample_count_ = static_cast<int>(n);
    return profile;
}

double CurvatureProfile::kappa(int i, double s, int order) const
{
    if (i < 1 || i >= dimension_)
        throw InputError("curvature index " + std::to_string(i) + " out of range");
    const auto& k = kappas_[static_cast<std::size_t>(i - 1)];
    if (order > k.max_order)
        throw InputError("curvature " + std::to_string(i) + ": derivative order "
                         + std::to_string(order) + " exceeds declared availability "
                         + std::to_string(k.max_order));
    return k.eval(s, order);
}

int CurvatureProfile::available_order(int i) const
{
    if (i < 1 || i >= dimension_) throw InputError("curvature index out of range");
    return kappas_[static_cast<std::size_t>(i - 1)].max_order;
}

double CurvatureProfile::sup_kappa1() const
{
    const int count = sample_count_ > 0 ? 8 * (sample_count_ - 1) + 1 : 32769;
    double sup = 0.0;
    for (int k = 0; k < count; ++k) {
        const double s = s_range_.lo + s_range_.length() * k / (count - 1);
        sup = std::max(sup, std::abs(kappa(1, s)));
    }
    if (declared_sup_) sup = std::max(sup, *declared_sup_);
    return sup;
}

Eigen::MatrixXd CurvatureProfile::frenet_matrix(double s, int order) const
{
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dimension_, dimension_);
    for (int i = 0; i + 1 < dimension_; ++i) {
        const double value = kappa(i + 1, s, order);
        k(i, i + 1) = value;
        k(i + 1, i) = -value;
    }
    return k;
}

} // namespace wg
