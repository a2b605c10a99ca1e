#pragma once

#include <cstdint>
#include <vector>

#include "csl/domain.hpp"

namespace csl {

/// Observed and simulated counts in the analysis window plus the signal
/// constant a (s m^2) that maps lambda / r_C^2 to expected signal counts.
class CountingExperiment {
public:
    CountingExperiment(std::int64_t z_c, std::int64_t z_b, double a, EnergyWindow window = {1000.0, 3800.0});

    std::int64_t z_c() const noexcept { return z_c_; }
    std::int64_t z_b() const noexcept { return z_b_; }
    double a() const noexcept { return a_; }
    const EnergyWindow& window() const noexcept { return window_; }

    /// Expected background Lambda_b = z_b + 1.
    double lambda_b() const noexcept { return static_cast<double>(z_b_) + 1.0; }

private:
    std::int64_t z_c_;
    std::int64_t z_b_;
    double a_;
    EnergyWindow window_;
};

struct UpperLimit {
    double lambda_max;    // s^-1; 0 when has_positive_limit is false
    double r_c;           // m
    double credibility;
    double lambda_bar_c;  // posterior quantile of the expected total counts
    double signal_quota;  // Lambda_bar_c - Lambda_b - 1, the room left for signal
    bool has_positive_limit;
};

struct ExclusionPoint {
    double r_c;
    double lambda_max;
};

struct ExclusionCurve {
    std::vector<ExclusionPoint> points;  // empty when has_positive_limit is false
    double credibility;
    double lambda_bar_c;
    bool has_positive_limit;
};

/// Posterior density of Lambda_c under a uniform prior,
/// Lambda_c^z_c e^-Lambda_c / Gamma(z_c + 1), evaluated in log space.
double posterior_pdf(const CountingExperiment& exp, double lambda_c);

/// Posterior probability that the expected count is below lambda_c: P(z_c + 1, lambda_c).
double posterior_cdf(const CountingExperiment& exp, double lambda_c);

/// The Lambda_bar_c with posterior_cdf = credibility.
double posterior_quantile(const CountingExperiment& exp, double credibility);

/// lambda_max = (Lambda_bar_c - (z_b + 1) - 1) r_C^2 / a. When the quota is
/// not positive the result is flagged instead of returning a negative rate.
UpperLimit upper_limit_lambda(const CountingExperiment& exp, double r_c, double credibility);

/// Same, with a precomputed quantile (it does not depend on r_C).
UpperLimit upper_limit_from_quantile(const CountingExperiment& exp, double lambda_bar_c, double r_c,
                                     double credibility);

/// n log-uniform points from lo to hi inclusive.
std::vector<double> log_uniform_grid(double lo, double hi, std::size_t n);

/// Upper limits over a log-uniform r_C grid. The quantile is solved once.
ExclusionCurve exclusion_curve(const CountingExperiment& exp, double r_c_min, double r_c_max, std::size_t n_points,
                               double credibility);

/// Least-squares slope of ln lambda_max against ln r_C.
double loglog_slope(const ExclusionCurve& curve);

/// lambda_max at r_c by linear interpolation in log-log space.
double interpolate_loglog(const ExclusionCurve& curve, double r_c);

}  // namespace csl
