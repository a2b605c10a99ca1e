#include "csl/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "csl/errors.hpp"

namespace csl {

namespace {

constexpr double kLnSqrtTwoPi = 0.91893853320467274178;
constexpr double kSqrtTwoPi = 2.50662827463100050242;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Every intermediate in the gamma kernels goes through here; a non-finite
// value means the log-space bookkeeping broke and must not leak out.
inline double finite_or_throw(double v, const char* where) {
    if (!std::isfinite(v)) {
        throw NumericError(std::string("non-finite intermediate in ") + where, v);
    }
    return v;
}

// ln Gamma(s) - [(s - 1/2) ln s - s + ln sqrt(2 pi)], valid for s >= 10.
double stirling_correction(double s) {
    static constexpr std::array<double, 8> kCoeffs = {
        1.0 / 12.0,     -1.0 / 360.0,          1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0,   -691.0 / 360360.0,     1.0 / 156.0,  -3617.0 / 122400.0,
    };
    const double inv = 1.0 / s;
    const double inv2 = inv * inv;
    double sum = 0.0;
    for (auto it = kCoeffs.rbegin(); it != kCoeffs.rend(); ++it) {
        sum = sum * inv2 + *it;
    }
    return sum * inv;
}

// ln(x^s e^{-x} / Gamma(s)).
double log_gamma_prefactor(double s, double x) {
    if (s >= 10.0) {
        // s ln(x/s) + s - x written as s (log1p(t) - t) keeps the large
        // terms from cancelling when x is close to s.
        const double t = (x - s) / s;
        const double main = s * (std::log1p(t) - t);
        return finite_or_throw(main + 0.5 * std::log(s) - kLnSqrtTwoPi - stirling_correction(s),
                               "log_gamma_prefactor");
    }
    return finite_or_throw(s * std::log(x) - x - ln_gamma(s), "log_gamma_prefactor");
}

int max_gamma_iterations(double s) { return 1000 + static_cast<int>(100.0 * std::sqrt(s)); }

// P(s, x) by the power series; use for x < s + 1.
double lower_gamma_series(double s, double x) {
    const int max_iter = max_gamma_iterations(s);
    double denom = s;
    double term = 1.0 / s;
    double sum = term;
    for (int k = 1; k < max_iter; ++k) {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            const double logp = log_gamma_prefactor(s, x) + std::log(sum);
            return finite_or_throw(std::exp(logp), "lower_gamma_series");
        }
    }
    throw NumericError("reg_lower_gamma: series did not converge", std::exp(log_gamma_prefactor(s, x)) * sum);
}

// Q(s, x) by the Legendre continued fraction (modified Lentz); use for x >= s + 1.
double upper_gamma_fraction(double s, double x) {
    const int max_iter = max_gamma_iterations(s);
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        finite_or_throw(h, "upper_gamma_fraction");
        if (std::abs(delta - 1.0) < kEps) {
            const double logq = log_gamma_prefactor(s, x) + std::log(h);
            return finite_or_throw(std::exp(logq), "upper_gamma_fraction");
        }
    }
    throw NumericError("reg_upper_gamma: continued fraction did not converge",
                       std::exp(log_gamma_prefactor(s, x)) * h);
}

void check_gamma_args(double s, double x, const char* who) {
    if (!(s > 0.0) || std::isinf(s)) throw DomainError(std::string(who) + ": s must be positive and finite");
    if (!(x >= 0.0)) throw DomainError(std::string(who) + ": x must be non-negative");
}

}  // namespace

double ln_gamma(double s) {
    if (!(s > 0.0) || std::isinf(s)) throw DomainError("ln_gamma: s must be positive and finite");
    if (s == 1.0 || s == 2.0) return 0.0;
    if (s >= 10.0) {
        return (s - 0.5) * std::log(s) - s + kLnSqrtTwoPi + stirling_correction(s);
    }
    // Shift up past 10 and divide out the product s (s+1) ... (s+n-1).
    double shifted = s;
    double product = 1.0;
    while (shifted < 10.0) {
        product *= shifted;
        shifted += 1.0;
    }
    return ln_gamma(shifted) - std::log(product);
}

double reg_lower_gamma(double s, double x) {
    check_gamma_args(s, x, "reg_lower_gamma");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < s + 1.0) return lower_gamma_series(s, x);
    return 1.0 - upper_gamma_fraction(s, x);
}

double reg_upper_gamma(double s, double x) {
    check_gamma_args(s, x, "reg_upper_gamma");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < s + 1.0) return 1.0 - lower_gamma_series(s, x);
    return upper_gamma_fraction(s, x);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
    // Acklam's rational approximation followed by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * kSqrtTwoPi * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

double wilson_hilferty_quantile(double s, double p) {
    if (!(s > 0.0)) throw DomainError("wilson_hilferty_quantile: s must be positive");
    const double z = normal_quantile(p);
    const double k = 1.0 / (9.0 * s);
    const double base = 1.0 - k + z * std::sqrt(k);
    return base > 0.0 ? s * base * base * base : 0.0;
}

double gamma_quantile(double s, double p) {
    if (!(s > 0.0) || std::isinf(s)) throw DomainError("gamma_quantile: s must be positive and finite");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("gamma_quantile: p must lie in (0, 1)");

    double guess = wilson_hilferty_quantile(s, p);
    if (!(guess > 0.0)) {
        // Small-x limit P(s, x) ~ x^s / Gamma(s + 1).
        guess = std::exp((std::log(p) + ln_gamma(s + 1.0)) / s);
    }

    const auto residual = [s, p](double x) { return reg_lower_gamma(s, x) - p; };

    // Bracket around the guess, widening by a few standard deviations at a time.
    const double width = std::max(std::sqrt(s), 1.0);
    double lo = guess;
    double hi = guess;
    for (int k = 0; residual(lo) > 0.0; ++k) {
        if (k > 200) throw NumericError("gamma_quantile: could not bracket from below", lo);
        lo = std::max(0.0, lo - width * (1 << std::min(k, 20)));
        if (lo == 0.0) break;
    }
    for (int k = 0; residual(hi) < 0.0; ++k) {
        if (k > 200) throw NumericError("gamma_quantile: could not bracket from above", hi);
        hi += width * (1 << std::min(k, 20));
    }
    if (lo == hi) return lo;

    const RootResult r = find_root_bracketed(residual, lo, hi, 4.0 * kEps * hi, 300);
    const double err = std::abs(residual(r.root));
    if (!(err < 1e-10)) {
        throw NumericError("gamma_quantile: residual " + std::to_string(err) + " above tolerance", r.root);
    }
    return r.root;
}

RootResult find_root_bracketed(const std::function<double(double)>& f, double a, double b, double x_tol,
                               int max_iter) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if ((fa > 0.0) == (fb > 0.0)) throw DomainError("find_root_bracketed: root is not bracketed");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * kEps * std::abs(b) + 0.5 * x_tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return {b, fb, iter};

        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic interpolation, or secant when only two points differ.
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }
    throw NumericError("find_root_bracketed: no convergence", b);
}

namespace {

struct SimpsonPanel {
    double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

struct SimpsonState {
    const std::function<double(double)>& f;
    int max_depth;
    bool depth_exceeded = false;
};

double adaptive_simpson(SimpsonState& st, const SimpsonPanel& p, double eps, int depth) {
    const double lm = 0.5 * (p.a + p.m);
    const double rm = 0.5 * (p.m + p.b);
    const double flm = st.f(lm);
    const double frm = st.f(rm);
    const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
    const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
    const double delta = left + right - p.whole;
    if (std::abs(delta) <= 15.0 * eps || p.b - p.a <= 4.0 * kEps * std::abs(p.m)) {
        return left + right + delta / 15.0;
    }
    if (depth >= st.max_depth) {
        st.depth_exceeded = true;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(st, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * eps, depth + 1) +
           adaptive_simpson(st, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * eps, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
    if (!(a < b)) throw DomainError("integrate: need a < b");
    if (!(spec.rel_tol > 0.0) || spec.max_depth < 10 || spec.abs_tol < 0.0) {
        throw DomainError("integrate: invalid QuadratureSpec");
    }

    // Seed with a uniform composite rule so the tolerance is set relative to a
    // realistic magnitude even for peaked integrands.
    constexpr int kSeedPanels = 32;
    const double h = (b - a) / kSeedPanels;
    std::vector<SimpsonPanel> panels;
    panels.reserve(kSeedPanels);
    double fa = f(a);
    double coarse = 0.0;
    double coarse_abs = 0.0;
    for (int i = 0; i < kSeedPanels; ++i) {
        const double pa = a + i * h;
        const double pb = (i + 1 == kSeedPanels) ? b : a + (i + 1) * h;
        const double pm = 0.5 * (pa + pb);
        const double fm = f(pm);
        const double fb = f(pb);
        const double whole = simpson(pa, fa, fm, pb, fb);
        panels.push_back({pa, fa, pm, fm, pb, fb, whole});
        coarse += whole;
        coarse_abs += std::abs(whole);
        fa = fb;
    }
    if (!std::isfinite(coarse)) throw NumericError("integrate: integrand is not finite on [a, b]", coarse);

    const double target = std::max(spec.abs_tol, spec.rel_tol * std::max(std::abs(coarse), 1e-3 * coarse_abs));
    SimpsonState st{f, spec.max_depth};
    double total = 0.0;
    for (const auto& p : panels) {
        total += adaptive_simpson(st, p, target / kSeedPanels, 0);
    }
    if (st.depth_exceeded) throw NumericError("integrate: maximum recursion depth exceeded", total);
    return total;
}

}  // namespace csl
