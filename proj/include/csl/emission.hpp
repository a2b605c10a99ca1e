#pragma once

#include <span>
#include <string_view>

#include "csl/domain.hpp"
#include "csl/errors.hpp"

namespace csl {

/// Differential emission rate dGamma/dE in (keV s)^-1.
struct RateDensity {
    double value = 0.0;
};

enum class EmissionRegime { Incoherent, Coherent, Mixed };

std::string_view regime_name(EmissionRegime regime);

/// Classification plus the length scales it was based on.
struct RegimeReport {
    EmissionRegime regime;
    double min_separation_m;
    double max_separation_m;
    double wavelength_m;          // lambda_k = 2 pi c / omega
    double reduced_wavelength_m;  // c / omega, the scale that enters b = omega D / c
    double r_c_m;
};

/// Noise correlation functional of two point masses separated by D = r_i - r_j,
/// in kg^2/m^2.
struct PairCorrelation {
    double total;         // sum over the three axes
    double z;             // component along the z axis
    double longitudinal;  // component along D (total / 3 at D = 0)
};

/// sin(b)/b with the removable singularity at 0 (series below b = 1e-4).
double coherence_factor(double b);

/// Closed form of the Gaussian-kernel correlation for point masses:
///   f^k = m_i m_j exp(-D^2/4r_C^2) / (2 r_C^2) * (1 - D_k^2 / 2 r_C^2).
PairCorrelation f_ij_point(const Vec3& separation, double m_i, double m_j, double r_c);

/// Noise average of the angular integral J_ij(omega, -omega) with the
/// delta(omega + nu) factor stripped:
///   8 pi^2 hbar^2 lambda / (m0^2 m_i m_j) * [f T1(b) - f_z T2(b)],
/// b = omega |r_i - r_j| / c. f_z is the correlation component along
/// r_i - r_j (for f_z = f / 3 this reduces to (2/3) f sinc(b)).
double j_ij_expectation(double omega, const Vec3& r_i, const Vec3& r_j, double f_total, double f_z,
                        const NoiseParams& noise, double m_i, double m_j);

/// Rate of a single charge e at the given energy:
///   hbar lambda e^2 / (4 pi^2 eps0 m0^2 r_C^2 c^3 E).
RateDensity unit_charge_rate(const NoiseParams& noise, double e_kev);

/// Full double sum over all particle pairs,
///   dGamma/domega = hbar lambda / (6 pi^2 eps0 c^3 m0^2 omega)
///                   * sum_ij q_i q_j / (m_i m_j) f_ij sinc(b_ij),
/// converted to per keV. For point masses m_i m_j cancels against f_ij, so
/// the inner loop runs over the normalised pair kernel in simd::pair_sum.
RateDensity rate_general(const ParticleSystem& system, const NoiseParams& noise, double e_kev);

/// Same double sum, but with the two-term angular integral and the
/// correlation component along each pair axis instead of f/3. Agrees with
/// rate_general when all pairs are coincident or far beyond r_C; differs at
/// separations comparable to r_C.
RateDensity rate_general_full_angular(const ParticleSystem& system, const NoiseParams& noise, double e_kev);

/// Amplification A = sum q_i^2 (charges in units of e).
RateDensity rate_incoherent(std::span<const double> charges_e, const NoiseParams& noise, double e_kev);

/// Amplification A = (sum q_i)^2 (charges in units of e).
RateDensity rate_coherent(std::span<const double> charges_e, const NoiseParams& noise, double e_kev);

/// N_A^2 + N_A with electrons, N_A^2 without.
double atomic_amplification(int atomic_number, bool include_electrons);

/// n_atoms * A * unit_charge_rate. Energies outside 10 - 1e5 keV, or the
/// electron term above 100 keV, are outside the model's validity and produce
/// a warning, not an error.
RateDensity rate_atomic(double n_atoms, int atomic_number, const NoiseParams& noise, double e_kev,
                        bool include_electrons, Diagnostics* diag = nullptr);

/// Coherent when every pair is closer than theta * min(c/omega, r_C);
/// incoherent when every pair is farther than min(c/omega, r_C) / theta;
/// mixed otherwise. Advisory only: the rate functions never branch on it.
RegimeReport classify_regime(const ParticleSystem& system, const NoiseParams& noise, double e_kev,
                             double theta = 0.01);

}  // namespace csl
