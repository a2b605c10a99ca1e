#include "csl/signal.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "csl/simd/kernels.hpp"

namespace csl {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double fold_weight(const MaterialComponent& m, double beta) {
    const double n = m.n_protons;
    return n * n * m.alpha() * beta;
}

}  // namespace

double eval_efficiency(const EfficiencyPoly& poly, double e_kev, Diagnostics* diag) {
    if (!(e_kev > 0.0)) throw DomainError("eval_efficiency: energy must be positive");
    double acc = 0.0;
    for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) {
        acc = acc * e_kev + *it;
    }
    if (acc < 0.0) {
        if (diag != nullptr) {
            diag->warn("efficiency polynomial is negative (" + format_double(acc) + ") at " + format_double(e_kev) +
                       " keV; clamped to 0");
        }
        return 0.0;
    }
    return acc;
}

void MaterialComponent::validate() const {
    const std::string who = "material '" + name + "': ";
    if (n_protons <= 0) throw DomainError(who + "n_protons must be positive");
    if (!(atoms_per_kg > 0.0)) throw DomainError(who + "atoms_per_kg must be positive");
    if (!(mass_kg > 0.0)) throw DomainError(who + "mass_kg must be positive");
    if (!(live_time_s > 0.0)) throw DomainError(who + "live_time_s must be positive");
    if (efficiency.coeffs.empty()) throw DomainError(who + "efficiency_coeffs must not be empty");
}

double signal_beta(const PhysConstants& k) {
    return k.hbar * k.e_charge * k.e_charge / (4.0 * kPi * kPi * k.eps0 * k.c * k.c * k.c * k.amu * k.amu);
}

SignalModel::SignalModel(std::vector<MaterialComponent> materials, EnergyWindow window)
    : materials_(std::move(materials)), window_(window), beta_(signal_beta()) {
    for (const auto& m : materials_) m.validate();
}

double signal_density(const SignalModel& model, double noise_ratio, double e_kev, Diagnostics* diag) {
    if (!model.window().contains(e_kev)) {
        throw DomainError("signal_density: E = " + format_double(e_kev) + " keV is outside the energy window");
    }
    if (!(noise_ratio >= 0.0)) throw DomainError("signal_density: lambda / r_C^2 must be non-negative");
    double sum = 0.0;
    for (const auto& m : model.materials()) {
        sum += fold_weight(m, model.beta()) * eval_efficiency(m.efficiency, e_kev, diag);
    }
    return noise_ratio * sum / e_kev;
}

std::vector<double> signal_density_grid(const SignalModel& model, double noise_ratio,
                                        std::span<const double> energies_kev, Diagnostics* diag) {
    if (!(noise_ratio >= 0.0)) throw DomainError("signal_density_grid: lambda / r_C^2 must be non-negative");
    for (double e : energies_kev) {
        if (!model.window().contains(e)) {
            throw DomainError("signal_density_grid: E = " + format_double(e) + " keV is outside the energy window");
        }
    }
    std::vector<double> acc(energies_kev.size(), 0.0);
    const auto& kernels = simd::active();
    for (const auto& m : model.materials()) {
        const std::size_t clamped = kernels.folded_density(m.efficiency.coeffs, noise_ratio * fold_weight(m, model.beta()),
                                                           energies_kev, acc);
        if (clamped > 0 && diag != nullptr) {
            diag->warn("material '" + m.name + "': efficiency clamped to 0 at " + std::to_string(clamped) +
                       " grid point(s)");
        }
    }
    return acc;
}

std::vector<MaterialContribution> signal_constant_by_material(const SignalModel& model, const QuadratureSpec& spec,
                                                              Diagnostics* diag) {
    std::vector<MaterialContribution> out;
    out.reserve(model.materials().size());
    const auto& w = model.window();
    for (const auto& m : model.materials()) {
        Diagnostics local;
        const double folded = integrate(
            [&](double e) { return eval_efficiency(m.efficiency, e, &local) / e; }, w.e_min(), w.e_max(), spec);
        if (!local.empty() && diag != nullptr) {
            diag->warn("material '" + m.name + "': efficiency clamped to 0 over part of the window");
        }
        out.push_back({m.name, fold_weight(m, model.beta()) * folded});
    }
    return out;
}

double compute_a(const SignalModel& model, const QuadratureSpec& spec, Diagnostics* diag) {
    double a = 0.0;
    for (const auto& c : signal_constant_by_material(model, spec, diag)) a += c.a;
    return a;
}

std::vector<SpectrumSample> signal_shape(const SignalModel& model, std::size_t n_points, Diagnostics* diag) {
    if (n_points < 2) throw DomainError("signal_shape: need at least 2 points");
    const auto& w = model.window();
    const double step = (w.e_max() - w.e_min()) / static_cast<double>(n_points - 1);
    std::vector<double> energies(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        energies[i] = (i + 1 == n_points) ? w.e_max() : w.e_min() + step * static_cast<double>(i);
    }
    const std::vector<double> density = signal_density_grid(model, 1.0, energies, diag);

    double area = 0.0;
    for (std::size_t i = 1; i < n_points; ++i) {
        area += 0.5 * (density[i - 1] + density[i]) * (energies[i] - energies[i - 1]);
    }
    if (!(area > 0.0)) throw NumericError("signal_shape: folded spectrum has zero area and cannot be normalised", area);

    std::vector<SpectrumSample> out(n_points);
    for (std::size_t i = 0; i < n_points; ++i) out[i] = {energies[i], density[i] / area};
    return out;
}

const std::vector<NamedEfficiency>& efficiency_dataset(std::string_view dataset) {
    // Fitted efficiency polynomials for the HPGe setup, E in keV. Degrees
    // differ per component; missing high-order terms are absent, not zero.
    static const std::vector<NamedEfficiency> kTable1 = {
        {"Ge crystal",
         {{4.82e-1, -4.42e-4, 2.10e-7, -4.87e-11, 4.32e-15}, {0.03e-1, 0.03e-4, 0.01e-7, 0.03e-11, 0.07e-15}}},
        {"Inner Cu",
         {{3.77e-2, -2.48e-5, 1.03e-8, -2.24e-12, 1.93e-16}, {0.04e-2, 0.03e-5, 0.01e-8, 0.04e-12, 0.08e-16}}},
        {"Cu block + plate",
         {{2.6e-3, 2.9e-7, -3.1e-10, 5.7e-14, -3.1e-18}, {0.1e-3, 1.4e-7, 0.5e-10, 1.6e-14, 3.3e-18}}},
        {"Cu shield", {{-1.01e-5, 7.8e-8, -2.07e-11, 1.61e-15}, {0.07e-5, 0.1e-8, 0.06e-11, 0.09e-15}}},
        {"Pb shield",
         {{-5.76e-4, 3.812e-6, -2.728e-9, 9.036e-13, -1.477e-16, 9.60e-21},
          {0.03e-4, 0.003e-6, 0.001e-9, 0.004e-13, 0.001e-16, 0.02e-21}}},
    };
    if (dataset == kBuiltinDataset) return kTable1;
    throw DomainError("unknown efficiency dataset '" + std::string(dataset) + "' (available: paper-table-1)");
}

const EfficiencyPoly& builtin_efficiency(std::string_view material) {
    const auto& table = efficiency_dataset(kBuiltinDataset);
    for (const auto& entry : table) {
        if (entry.name == material) return entry.poly;
    }
    std::string names;
    for (const auto& entry : table) {
        if (!names.empty()) names += ", ";
        names += "'" + entry.name + "'";
    }
    throw DomainError("unknown material '" + std::string(material) + "'; valid names: " + names);
}

}  // namespace csl
