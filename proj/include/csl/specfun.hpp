#pragma once

#include <functional>

namespace csl {

/// Adaptive quadrature controls. The target error on [a, b] is
/// max(abs_tol, rel_tol * |integral|).
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_depth = 50;
};

/// ln Gamma(s) for s > 0. Stirling series for s >= 10, upward recurrence below.
double ln_gamma(double s);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
double reg_lower_gamma(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), computed directly.
double reg_upper_gamma(double s, double x);

/// Inverse of P(s, .): the x with P(s, x) = p, |P(s,x) - p| < 1e-10.
/// Throws NumericError if the refinement does not converge.
double gamma_quantile(double s, double p);

/// Standard normal quantile. Used to seed the Wilson-Hilferty bracket.
double normal_quantile(double p);

/// Wilson-Hilferty approximation to the gamma(s, 1) quantile.
double wilson_hilferty_quantile(double s, double p);

struct RootResult {
    double root;
    double residual;
    int iterations;
};

/// Brent's method on a sign-changing bracket [a, b]. Stops when the bracket is
/// narrower than x_tol (plus a few ulps of the root) or the residual is exactly
/// zero. Throws DomainError if f(a) and f(b) have the same sign and NumericError
/// after max_iter iterations.
RootResult find_root_bracketed(const std::function<double(double)>& f, double a, double b,
                               double x_tol, int max_iter = 200);

/// Adaptive Simpson quadrature of f over [a, b]. Throws NumericError (carrying
/// the best estimate) when a panel needs more than spec.max_depth bisections.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

}  // namespace csl
