#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace csl {

// CODATA 2018. The nucleon reference mass m0 is the proton mass.
struct PhysConstants {
    double hbar = 1.054571817e-34;     // J s
    double c = 2.99792458e8;           // m/s
    double eps0 = 8.8541878128e-12;    // F/m
    double e_charge = 1.602176634e-19; // C
    double amu = 1.67262192369e-27;    // kg, used as m0
};

inline constexpr PhysConstants kPhys{};

inline constexpr double kJoulePerKev = 1.602176634e-16;
inline constexpr double kPi = 3.14159265358979323846;

using Vec3 = std::array<double, 3>;

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

/// CSL noise parameters: collapse rate lambda (1/s), correlation length r_C (m)
/// and the reference mass m0 (kg).
class NoiseParams {
public:
    NoiseParams(double lambda_collapse, double r_c, double m0 = kPhys.amu);

    double lambda_collapse() const noexcept { return lambda_; }
    double r_c() const noexcept { return r_c_; }
    double m0() const noexcept { return m0_; }

private:
    double lambda_;
    double r_c_;
    double m0_;
};

/// Point particle. Charge is kept in units of e so that neutral systems sum
/// to exactly zero.
struct Particle {
    double charge_e = 0.0;
    double mass_kg = 0.0;
    Vec3 position_m{};

    double charge_coulomb() const noexcept { return charge_e * kPhys.e_charge; }
};

class ParticleSystem {
public:
    explicit ParticleSystem(std::vector<Particle> particles);

    const std::vector<Particle>& particles() const noexcept { return particles_; }
    std::size_t size() const noexcept { return particles_.size(); }

private:
    std::vector<Particle> particles_;
};

/// Photon energy window in keV, 0 < e_min < e_max.
class EnergyWindow {
public:
    EnergyWindow(double e_min_kev, double e_max_kev);

    double e_min() const noexcept { return e_min_; }
    double e_max() const noexcept { return e_max_; }
    bool contains(double e_kev) const noexcept { return e_kev >= e_min_ && e_kev <= e_max_; }

private:
    double e_min_;
    double e_max_;
};

double kev_to_joule(double e_kev);
double joule_to_kev(double e_joule);

/// Photon wavelength 2*pi*hbar*c/E for an energy in keV.
double wavelength_from_energy(double e_kev);

/// Angular frequency E/hbar for an energy in keV.
double angular_frequency(double e_kev);

}  // namespace csl
