#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csl/domain.hpp"
#include "csl/errors.hpp"
#include "csl/specfun.hpp"

namespace csl {

/// Detection efficiency eps(E) = sum_j coeffs[j] E^j with E in keV.
struct EfficiencyPoly {
    std::vector<double> coeffs;
    std::vector<double> uncertainties;  // fit errors; metadata only, never propagated

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

/// Horner evaluation; negative values are clamped to 0 and reported through diag.
double eval_efficiency(const EfficiencyPoly& poly, double e_kev, Diagnostics* diag = nullptr);

struct MaterialComponent {
    std::string name;
    int n_protons = 0;        // atomic number of the material's atoms
    double atoms_per_kg = 0;  // n_i
    double mass_kg = 0;       // m_i
    double live_time_s = 0;   // T
    EfficiencyPoly efficiency;

    /// alpha = m n T: atoms times seconds of exposure.
    double alpha() const noexcept { return mass_kg * atoms_per_kg * live_time_s; }

    /// Throws DomainError naming the first offending field.
    void validate() const;
};

/// beta = hbar e^2 / (4 pi^2 eps0 c^3 m0^2), in m^2.
double signal_beta(const PhysConstants& k = kPhys);

class SignalModel {
public:
    SignalModel(std::vector<MaterialComponent> materials, EnergyWindow window);

    const std::vector<MaterialComponent>& materials() const noexcept { return materials_; }
    const EnergyWindow& window() const noexcept { return window_; }
    double beta() const noexcept { return beta_; }

private:
    std::vector<MaterialComponent> materials_;
    EnergyWindow window_;
    double beta_;
};

/// Expected detected counts per keV at energy E for a given lambda / r_C^2
/// (s^-1 m^-2): sum_i N_i^2 alpha_i beta (lambda/r_C^2) eps_i(E) / E.
/// Only the coherent proton term contributes.
double signal_density(const SignalModel& model, double noise_ratio, double e_kev, Diagnostics* diag = nullptr);

/// signal_density on a grid of energies, through the active SIMD kernel.
std::vector<double> signal_density_grid(const SignalModel& model, double noise_ratio,
                                        std::span<const double> energies_kev, Diagnostics* diag = nullptr);

struct MaterialContribution {
    std::string name;
    double a;  // s m^2
};

/// a_i = N_i^2 alpha_i beta * int_window eps_i(E) / E dE for each material. The
/// integral is dimensionless, so E and dE only need to share a unit.
std::vector<MaterialContribution> signal_constant_by_material(const SignalModel& model,
                                                              const QuadratureSpec& spec = {},
                                                              Diagnostics* diag = nullptr);

/// The signal constant a with z_s = a * lambda / r_C^2; sum of the per-material terms.
double compute_a(const SignalModel& model, const QuadratureSpec& spec = {}, Diagnostics* diag = nullptr);

struct SpectrumSample {
    double e_kev;
    double density;  // per keV, normalised to unit area over the window
};

/// Uniform samples of the folded spectrum over the window, scaled so the
/// trapezoid integral of the samples is 1.
std::vector<SpectrumSample> signal_shape(const SignalModel& model, std::size_t n_points,
                                         Diagnostics* diag = nullptr);

struct NamedEfficiency {
    std::string name;
    EfficiencyPoly poly;
};

/// Built-in efficiency datasets. "paper-table-1" holds the five fitted
/// polynomials for the HPGe setup components.
const std::vector<NamedEfficiency>& efficiency_dataset(std::string_view dataset);

/// Looks up a material in "paper-table-1". Throws DomainError listing the
/// valid names if it is unknown.
const EfficiencyPoly& builtin_efficiency(std::string_view material);

inline constexpr std::string_view kBuiltinDataset = "paper-table-1";

}  // namespace csl
