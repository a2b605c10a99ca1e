#include "csl/inference.hpp"

#include <cmath>
#include <string>

#include "csl/errors.hpp"
#include "csl/specfun.hpp"

namespace csl {

namespace {

void check_credibility(double credibility) {
    if (!(credibility > 0.0 && credibility < 1.0)) {
        throw DomainError("credibility must lie strictly between 0 and 1");
    }
}

double posterior_shape(const CountingExperiment& exp) { return static_cast<double>(exp.z_c()) + 1.0; }

}  // namespace

CountingExperiment::CountingExperiment(std::int64_t z_c, std::int64_t z_b, double a, EnergyWindow window)
    : z_c_(z_c), z_b_(z_b), a_(a), window_(window) {
    if (z_c < 0) throw DomainError("CountingExperiment: z_c must be non-negative");
    if (z_b < 0) throw DomainError("CountingExperiment: z_b must be non-negative");
    if (!(a > 0.0) || std::isinf(a)) throw DomainError("CountingExperiment: a must be positive");
}

double posterior_pdf(const CountingExperiment& exp, double lambda_c) {
    if (!(lambda_c >= 0.0)) throw DomainError("posterior_pdf: Lambda_c must be non-negative");
    const double z = static_cast<double>(exp.z_c());
    if (lambda_c == 0.0) return exp.z_c() == 0 ? 1.0 : 0.0;
    return std::exp(z * std::log(lambda_c) - lambda_c - ln_gamma(z + 1.0));
}

double posterior_cdf(const CountingExperiment& exp, double lambda_c) {
    if (!(lambda_c >= 0.0)) throw DomainError("posterior_cdf: Lambda_c must be non-negative");
    return reg_lower_gamma(posterior_shape(exp), lambda_c);
}

double posterior_quantile(const CountingExperiment& exp, double credibility) {
    check_credibility(credibility);
    return gamma_quantile(posterior_shape(exp), credibility);
}

UpperLimit upper_limit_from_quantile(const CountingExperiment& exp, double lambda_bar_c, double r_c,
                                     double credibility) {
    if (!(r_c > 0.0)) throw DomainError("upper_limit: r_c must be positive");
    check_credibility(credibility);
    // Lambda_c = Lambda_b + Lambda_s with Lambda_s = z_s + 1 and z_s = a lambda / r_C^2.
    const double quota = lambda_bar_c - exp.lambda_b() - 1.0;
    UpperLimit out{0.0, r_c, credibility, lambda_bar_c, quota, quota > 0.0};
    if (out.has_positive_limit) out.lambda_max = quota * r_c * r_c / exp.a();
    return out;
}

UpperLimit upper_limit_lambda(const CountingExperiment& exp, double r_c, double credibility) {
    if (!(r_c > 0.0)) throw DomainError("upper_limit_lambda: r_c must be positive");
    return upper_limit_from_quantile(exp, posterior_quantile(exp, credibility), r_c, credibility);
}

std::vector<double> log_uniform_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && lo < hi)) throw DomainError("log_uniform_grid: need 0 < lo < hi");
    if (n < 2) throw DomainError("log_uniform_grid: need at least 2 points");
    const double log_lo = std::log(lo);
    const double step = (std::log(hi) - log_lo) / static_cast<double>(n - 1);
    std::vector<double> grid(n);
    grid.front() = lo;
    grid.back() = hi;
    for (std::size_t i = 1; i + 1 < n; ++i) grid[i] = std::exp(log_lo + step * static_cast<double>(i));
    return grid;
}

ExclusionCurve exclusion_curve(const CountingExperiment& exp, double r_c_min, double r_c_max, std::size_t n_points,
                               double credibility) {
    const std::vector<double> grid = log_uniform_grid(r_c_min, r_c_max, n_points);
    const double lambda_bar = posterior_quantile(exp, credibility);

    ExclusionCurve curve{{}, credibility, lambda_bar, true};
    curve.points.reserve(grid.size());
    for (double r_c : grid) {
        const UpperLimit ul = upper_limit_from_quantile(exp, lambda_bar, r_c, credibility);
        if (!ul.has_positive_limit) {
            curve.points.clear();
            curve.has_positive_limit = false;
            return curve;
        }
        curve.points.push_back({r_c, ul.lambda_max});
    }
    return curve;
}

double loglog_slope(const ExclusionCurve& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 2) throw DomainError("loglog_slope: need at least 2 points");
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += std::log(p.r_c);
        my += std::log(p.lambda_max);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : pts) {
        const double dx = std::log(p.r_c) - mx;
        sxy += dx * (std::log(p.lambda_max) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double interpolate_loglog(const ExclusionCurve& curve, double r_c) {
    const auto& pts = curve.points;
    if (pts.size() < 2) throw DomainError("interpolate_loglog: need at least 2 points");
    if (!(r_c >= pts.front().r_c && r_c <= pts.back().r_c)) {
        throw DomainError("interpolate_loglog: r_c outside the curve's range");
    }
    std::size_t hi = 1;
    while (hi + 1 < pts.size() && pts[hi].r_c < r_c) ++hi;
    const auto& p0 = pts[hi - 1];
    const auto& p1 = pts[hi];
    const double t = (std::log(r_c) - std::log(p0.r_c)) / (std::log(p1.r_c) - std::log(p0.r_c));
    return std::exp(std::log(p0.lambda_max) + t * (std::log(p1.lambda_max) - std::log(p0.lambda_max)));
}

}  // namespace csl
