#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "csl/domain.hpp"
#include "csl/inference.hpp"
#include "csl/signal.hpp"

namespace csl::io {

// ParticleSystem JSON:
//   [ { "charge_e": number, "mass_kg": number, "position_m": [x, y, z] }, ... ]
ParticleSystem parse_particle_system(std::string_view json_text);

// Inventory JSON:
//   { "window_kev": [lo, hi],
//     "materials": [ { "name": string, "n_protons": integer, "atoms_per_kg": number,
//                      "mass_kg": number, "live_time_s": number,
//                      "efficiency_coeffs": [xi0, ...] } ] }
// A material may name a built-in polynomial with "efficiency_builtin": "<name>"
// (dataset "paper-table-1") instead of giving efficiency_coeffs. window_kev
// defaults to 1000 - 3800 keV; window_override replaces it.
SignalModel parse_inventory(std::string_view json_text, std::optional<EnergyWindow> window_override = std::nullopt);

std::string read_file(const std::filesystem::path& path);

/// printf-style "%.{digits-1}e".
std::string format_sci(double value, int significant_digits);

/// "r_c_m,lambda_max_per_s" with 17 significant digits.
void write_exclusion_csv(std::ostream& out, const ExclusionCurve& curve);

/// "energy_kev,density_per_kev" with 17 significant digits.
void write_shape_csv(std::ostream& out, const std::vector<SpectrumSample>& samples);

}  // namespace csl::io
