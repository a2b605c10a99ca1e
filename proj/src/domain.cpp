#include "csl/domain.hpp"

#include <string>

#include "csl/errors.hpp"

namespace csl {

NoiseParams::NoiseParams(double lambda_collapse, double r_c, double m0)
    : lambda_(lambda_collapse), r_c_(r_c), m0_(m0) {
    if (!(lambda_collapse > 0.0) || !(r_c > 0.0) || !(m0 > 0.0)) {
        throw DomainError("NoiseParams: lambda, r_c and m0 must be positive");
    }
}

ParticleSystem::ParticleSystem(std::vector<Particle> particles) : particles_(std::move(particles)) {
    if (particles_.empty()) {
        throw DomainError("ParticleSystem: at least one particle is required");
    }
    for (std::size_t i = 0; i < particles_.size(); ++i) {
        if (!(particles_[i].mass_kg > 0.0)) {
            throw DomainError("ParticleSystem: particle " + std::to_string(i) + " has non-positive mass");
        }
    }
}

EnergyWindow::EnergyWindow(double e_min_kev, double e_max_kev) : e_min_(e_min_kev), e_max_(e_max_kev) {
    if (!(e_min_kev > 0.0) || !(e_min_kev < e_max_kev)) {
        throw DomainError("EnergyWindow: need 0 < e_min < e_max");
    }
}

double kev_to_joule(double e_kev) {
    if (e_kev < 0.0) throw DomainError("kev_to_joule: negative energy");
    return e_kev * kJoulePerKev;
}

double joule_to_kev(double e_joule) {
    if (e_joule < 0.0) throw DomainError("joule_to_kev: negative energy");
    return e_joule / kJoulePerKev;
}

double wavelength_from_energy(double e_kev) {
    if (!(e_kev > 0.0)) throw DomainError("wavelength_from_energy: energy must be positive");
    return 2.0 * kPi * kPhys.hbar * kPhys.c / kev_to_joule(e_kev);
}

double angular_frequency(double e_kev) {
    if (!(e_kev > 0.0)) throw DomainError("angular_frequency: energy must be positive");
    return kev_to_joule(e_kev) / kPhys.hbar;
}

}  // namespace csl
