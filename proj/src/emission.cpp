#include "csl/emission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "csl/simd/kernels.hpp"

namespace csl {

namespace {

void require_positive_energy(double e_kev, const char* who) {
    if (!(e_kev > 0.0) || std::isinf(e_kev)) throw DomainError(std::string(who) + ": energy must be positive");
}

// Angular factors of the two-term J_ij form:
//   T1 = ((b^2 - 1) sin b + b cos b) / b^3  ->  2/3
//   T2 = ((b^2 - 3) sin b + 3 b cos b) / b^3  ->  0
// Both cancel catastrophically at small b; below 0.5 use the Taylor series,
// whose b^(2n-2) coefficients follow from those of sin and cos.
struct AngularFactors {
    double t1;
    double t2;
};

AngularFactors angular_factors(double b) {
    if (b < 0.5) {
        double t1 = 0.0;
        double t2 = 0.0;
        double fact_2n_minus_1 = 1.0;  // (2n-1)!
        double b_pow = 1.0;            // b^(2n-2)
        double sign = -1.0;            // (-1)^n
        for (int n = 1; n <= 12; ++n) {
            const double fact_2n = fact_2n_minus_1 * (2 * n);
            const double fact_2n_plus_1 = fact_2n * (2 * n + 1);
            t1 += sign * (1.0 / fact_2n - 1.0 / fact_2n_minus_1 - 1.0 / fact_2n_plus_1) * b_pow;
            t2 += sign * (3.0 / fact_2n - 1.0 / fact_2n_minus_1 - 3.0 / fact_2n_plus_1) * b_pow;
            fact_2n_minus_1 = fact_2n_plus_1;
            b_pow *= b * b;
            sign = -sign;
        }
        return {t1, t2};
    }
    const double s = std::sin(b);
    const double c = std::cos(b);
    const double b3 = b * b * b;
    return {((b * b - 1.0) * s + b * c) / b3, ((b * b - 3.0) * s + 3.0 * b * c) / b3};
}

struct SoaCharges {
    std::vector<double> x, y, z, q;

    explicit SoaCharges(const ParticleSystem& system) {
        const auto n = system.size();
        x.reserve(n);
        y.reserve(n);
        z.reserve(n);
        q.reserve(n);
        for (const auto& p : system.particles()) {
            x.push_back(p.position_m[0]);
            y.push_back(p.position_m[1]);
            z.push_back(p.position_m[2]);
            q.push_back(p.charge_e);
        }
    }

    simd::ChargeCloud view() const { return {x, y, z, q}; }
};

}  // namespace

std::string_view regime_name(EmissionRegime regime) {
    switch (regime) {
        case EmissionRegime::Incoherent: return "Incoherent";
        case EmissionRegime::Coherent: return "Coherent";
        case EmissionRegime::Mixed: return "Mixed";
    }
    return "Unknown";
}

double coherence_factor(double b) {
    if (!(b >= 0.0)) throw DomainError("coherence_factor: b must be non-negative");
    return simd::scalar::sinc(b);
}

PairCorrelation f_ij_point(const Vec3& separation, double m_i, double m_j, double r_c) {
    if (!(r_c > 0.0)) throw DomainError("f_ij_point: r_c must be positive");
    const double two_rc2 = 2.0 * r_c * r_c;
    const double d2 = separation[0] * separation[0] + separation[1] * separation[1] + separation[2] * separation[2];
    const double scale = m_i * m_j * std::exp(-d2 / (2.0 * two_rc2)) / two_rc2;

    PairCorrelation out{};
    for (int k = 0; k < 3; ++k) {
        out.total += scale * (1.0 - separation[k] * separation[k] / two_rc2);
    }
    out.z = scale * (1.0 - separation[2] * separation[2] / two_rc2);
    // Along the unit vector D/|D| the quadratic form reduces to 1 - D^2 / 2 r_C^2;
    // at D = 0 every direction is equivalent.
    out.longitudinal = scale * (1.0 - d2 / two_rc2);
    return out;
}

double j_ij_expectation(double omega, const Vec3& r_i, const Vec3& r_j, double f_total, double f_z,
                        const NoiseParams& noise, double m_i, double m_j) {
    if (!(omega > 0.0)) throw DomainError("j_ij_expectation: omega must be positive");
    const double b = omega * norm(r_i - r_j) / kPhys.c;
    const auto [t1, t2] = angular_factors(b);
    const double prefactor = 8.0 * kPi * kPi * kPhys.hbar * kPhys.hbar * noise.lambda_collapse() /
                             (noise.m0() * noise.m0() * m_i * m_j);
    return prefactor * (f_total * t1 - f_z * t2);
}

RateDensity unit_charge_rate(const NoiseParams& noise, double e_kev) {
    require_positive_energy(e_kev, "unit_charge_rate");
    const double e = kPhys.e_charge;
    const double r2 = noise.r_c() * noise.r_c();
    const double c3 = kPhys.c * kPhys.c * kPhys.c;
    // Per joule; the extra kJoulePerKev converts to per keV.
    const double per_joule = kPhys.hbar * noise.lambda_collapse() * e * e /
                             (4.0 * kPi * kPi * kPhys.eps0 * noise.m0() * noise.m0() * r2 * c3 * kev_to_joule(e_kev));
    return {per_joule * kJoulePerKev};
}

RateDensity rate_general(const ParticleSystem& system, const NoiseParams& noise, double e_kev) {
    require_positive_energy(e_kev, "rate_general");
    const double r_c = noise.r_c();
    const simd::PairKernelParams params{1.0 / (4.0 * r_c * r_c), angular_frequency(e_kev) / kPhys.c};
    const SoaCharges soa(system);
    const double amplification = simd::active().pair_sum(soa.view(), params);
    return {amplification * unit_charge_rate(noise, e_kev).value};
}

RateDensity rate_general_full_angular(const ParticleSystem& system, const NoiseParams& noise, double e_kev) {
    require_positive_energy(e_kev, "rate_general_full_angular");
    const double omega = angular_frequency(e_kev);
    const auto& ps = system.particles();
    double sum = 0.0;
    for (const auto& pi : ps) {
        for (const auto& pj : ps) {
            const auto f = f_ij_point(pi.position_m - pj.position_m, pi.mass_kg, pj.mass_kg, noise.r_c());
            const double j = j_ij_expectation(omega, pi.position_m, pj.position_m, f.total, f.longitudinal, noise,
                                              pi.mass_kg, pj.mass_kg);
            sum += pi.charge_coulomb() * pj.charge_coulomb() * j;
        }
    }
    const double c3 = kPhys.c * kPhys.c * kPhys.c;
    // P = (1/64 pi^4 eps0 c^3) int domega dnu ..., folded onto omega > 0 and
    // divided by hbar omega; then dGamma/dE = (1/hbar) dGamma/domega.
    const double per_omega = sum / (32.0 * kPi * kPi * kPi * kPi * kPhys.eps0 * c3 * kPhys.hbar * omega);
    return {per_omega / kPhys.hbar * kJoulePerKev};
}

RateDensity rate_incoherent(std::span<const double> charges_e, const NoiseParams& noise, double e_kev) {
    require_positive_energy(e_kev, "rate_incoherent");
    double a = 0.0;
    for (double q : charges_e) a += q * q;
    return {a * unit_charge_rate(noise, e_kev).value};
}

RateDensity rate_coherent(std::span<const double> charges_e, const NoiseParams& noise, double e_kev) {
    require_positive_energy(e_kev, "rate_coherent");
    double total = 0.0;
    for (double q : charges_e) total += q;
    return {total * total * unit_charge_rate(noise, e_kev).value};
}

double atomic_amplification(int atomic_number, bool include_electrons) {
    if (atomic_number < 1) throw DomainError("atomic_amplification: atomic number must be >= 1");
    const double z = atomic_number;
    return include_electrons ? z * z + z : z * z;
}

RateDensity rate_atomic(double n_atoms, int atomic_number, const NoiseParams& noise, double e_kev,
                        bool include_electrons, Diagnostics* diag) {
    require_positive_energy(e_kev, "rate_atomic");
    if (!(n_atoms >= 0.0)) throw DomainError("rate_atomic: n_atoms must be non-negative");
    const double amplification = atomic_amplification(atomic_number, include_electrons);
    if (diag != nullptr) {
        if (e_kev < 10.0 || e_kev > 1e5) {
            diag->warn("rate_atomic: E = " + std::to_string(e_kev) +
                       " keV is outside the 10 - 1e5 keV range where nuclei emit coherently and electrons incoherently");
        }
        if (include_electrons && e_kev > 100.0) {
            diag->warn("rate_atomic: electron term requested at E = " + std::to_string(e_kev) +
                       " keV; electrons are relativistic above 100 keV and the term is not valid there");
        }
    }
    return {n_atoms * amplification * unit_charge_rate(noise, e_kev).value};
}

RegimeReport classify_regime(const ParticleSystem& system, const NoiseParams& noise, double e_kev, double theta) {
    require_positive_energy(e_kev, "classify_regime");
    if (!(theta > 0.0 && theta < 1.0)) throw DomainError("classify_regime: theta must lie in (0, 1)");

    RegimeReport report{};
    report.wavelength_m = wavelength_from_energy(e_kev);
    report.reduced_wavelength_m = kPhys.c / angular_frequency(e_kev);
    report.r_c_m = noise.r_c();

    const auto& ps = system.particles();
    double min_sep = std::numeric_limits<double>::infinity();
    double max_sep = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const double d = norm(ps[i].position_m - ps[j].position_m);
            min_sep = std::min(min_sep, d);
            max_sep = std::max(max_sep, d);
        }
    }
    if (ps.size() < 2) {
        report.min_separation_m = 0.0;
        report.max_separation_m = 0.0;
        report.regime = EmissionRegime::Coherent;
        return report;
    }
    report.min_separation_m = min_sep;
    report.max_separation_m = max_sep;

    const double scale = std::min(report.reduced_wavelength_m, report.r_c_m);
    if (max_sep < theta * scale) {
        report.regime = EmissionRegime::Coherent;
    } else if (min_sep > scale / theta) {
        report.regime = EmissionRegime::Incoherent;
    } else {
        report.regime = EmissionRegime::Mixed;
    }
    return report;
}

}  // namespace csl
