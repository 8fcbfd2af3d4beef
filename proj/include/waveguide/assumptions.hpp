#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "waveguide/curvature.hpp"
#include "waveguide/metric.hpp"
#include "waveguide/potential.hpp"
#include "waveguide/tube.hpp"

namespace wg {

enum class Verdict { pass, fail, inconclusive, waived };

std::string to_string(Verdict v);

struct CheckerOptions {
    double zero_tol = 1e-4;       // "→ 0": last tail sup below zero_tol · global sup
    double theta_min = 0.05;
    double residual_max = 0.2;    // RMS residual of the log-log fit
    double R0 = 1.0;
    double linear_extent = 64.0;  // dense uniform sampling of |s| up to here
    double linear_step = 1.0 / 32.0;
    int per_octave = 128;         // geometric sampling beyond linear_extent
    int u_points = 9;             // transverse samples per radius for metric checks
    double flat_tol = 1e-12;      // max|K| for a strip to count as flat
};

struct LadderPoint {
    double R = 0.0;
    double sup = 0.0;  // sup_{|s| ≥ R} |f(s)| over the sampled abscissae
};

struct DecayFit {
    double C = 0.0;
    double theta = 0.0;      // min(theta_raw, 1)
    double theta_raw = 0.0;  // −slope − 1 of the fit over the upper half of the ladder
    double residual = 0.0;   // RMS, natural log
};

struct AssumptionItem {
    std::string id;
    std::string quantity;
    std::vector<LadderPoint> ladder;
    double global_sup = 0.0;
    std::optional<DecayFit> fit;
    Verdict verdict = Verdict::inconclusive;
    std::string notes;
};

struct AssumptionReport {
    std::string title;
    CheckerOptions options;
    std::vector<AssumptionItem> items;

    // fail if any item fails, else inconclusive if any is inconclusive, else pass
    [[nodiscard]] Verdict overall() const;
    // minimum fitted θ over the regression items; empty when nothing was fitted
    [[nodiscard]] std::optional<double> theta() const;
    [[nodiscard]] const AssumptionItem* find(const std::string& id) const;
    void append(const AssumptionReport& other);
};

// One row per s sample: `eval(s, out)` fills out (size m) with non-negative magnitudes.
using TailQuantities = std::function<void(double s, Eigen::Ref<Eigen::VectorXd> out)>;

struct TailTable {
    std::vector<double> R;   // ladder R₀·2^k ≤ S/2
    Eigen::MatrixXd sup;     // R.size() × m, non-increasing down each column
    Eigen::VectorXd global;  // sup over every sample
    double coverage = 0.0;   // S = min(s_hi, −s_lo)
    std::size_t samples = 0;
};

// |s| on [0, min(S, linear_extent)] with linear_step, then per_octave geometric points up to S;
// both signs. Non-finite magnitudes propagate as +∞.
TailTable tail_sups(const TailQuantities& eval, int m, Interval s_range, const CheckerOptions& opts = {});

// Least-squares fit log sup = c + b log R over the upper half of a ladder of at least four points; θ_raw = −b − 1.
std::optional<DecayFit> fit_decay(const std::vector<LadderPoint>& ladder, double global_sup, const CheckerOptions& opts,
                                  std::string* note = nullptr);

// Item verdict helpers, shared by every checker.
AssumptionItem limit_item(std::string id, std::string quantity, const TailTable& t, int column, const CheckerOptions& opts);
AssumptionItem bounded_item(std::string id, std::string quantity, const TailTable& t, int column);
// `coverage_throws` selects CoverageError instead of an inconclusive verdict for short ladders.
AssumptionItem decay_item(std::string id, std::string quantity, const TailTable& t, int column, const CheckerOptions& opts,
                          bool coverage_throws = false);

// Decay of κ and derivatives; d = 2 uses κ, κ̈ (limits) and κ̇, κ⃛ (regression).
AssumptionReport check_curvature_decay(const CurvatureProfile& profile, const CheckerOptions& opts = {});

// The same items on h directly, sup over a transverse sample of the ball |u| ≤ a.
AssumptionReport check_metric_hypotheses(const TubeMetric& metric, const CheckerOptions& opts = {});

struct BasicInputs {
    double radius = 0.0;
    std::optional<double> sup_kappa1;  // ‖κ₁‖∞ (geodesic curvature for strips)
    const TubeMetric* metric = nullptr;
    std::optional<OverlapResult> overlap;
    bool overlap_waived = false;       // abstract strips
    std::optional<double> max_abs_gauss;  // strips: sup|K| on the strip, for the flatness item
};

AssumptionReport check_basic(const BasicInputs& in, const CheckerOptions& opts = {});

// Bounds and decay of G and V on the sampling ladder. Throws CoverageError when the
// s_range supports fewer than four ladder points.
AssumptionReport check_coefficient_assumptions(const CoefficientField& coeffs, const EffectivePotential& potential,
                                               const CheckerOptions& opts = {});

// Transverse points used by the metric and coefficient checks (always includes ±a on each axis).
std::vector<Eigen::VectorXd> transverse_samples(int transverse_dim, double radius, int points);

void write_assumption_report(std::ostream& out, const AssumptionReport& report);

} // namespace wg
