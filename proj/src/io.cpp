#include "csl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csl/errors.hpp"

namespace csl::io {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

const json& require(const json& obj, const char* field, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    const auto it = obj.find(field);
    if (it == obj.end()) throw ParseError(where + ": missing required field \"" + field + "\"");
    return *it;
}

double require_number(const json& obj, const char* field, const std::string& where) {
    const json& v = require(obj, field, where);
    if (!v.is_number()) throw ParseError(where + ": field \"" + field + "\" must be a number");
    return v.get<double>();
}

std::vector<double> number_array(const json& v, const char* field, const std::string& where) {
    if (!v.is_array()) throw ParseError(where + ": field \"" + field + "\" must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) throw ParseError(where + ": field \"" + field + "\" must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

ParticleSystem parse_particle_system(std::string_view json_text) {
    const json doc = parse_json(json_text, "particle system");
    if (!doc.is_array()) throw ParseError("particle system: top level must be an array of particles");
    std::vector<Particle> particles;
    particles.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string where = "particle[" + std::to_string(i) + "]";
        Particle p;
        p.charge_e = require_number(doc[i], "charge_e", where);
        p.mass_kg = require_number(doc[i], "mass_kg", where);
        const auto pos = number_array(require(doc[i], "position_m", where), "position_m", where);
        if (pos.size() != 3) throw ParseError(where + ": field \"position_m\" must have exactly 3 components");
        p.position_m = {pos[0], pos[1], pos[2]};
        if (!(p.mass_kg > 0.0)) throw ParseError(where + ": field \"mass_kg\" must be positive");
        particles.push_back(p);
    }
    if (particles.empty()) throw ParseError("particle system: at least one particle is required");
    return ParticleSystem(std::move(particles));
}

SignalModel parse_inventory(std::string_view json_text, std::optional<EnergyWindow> window_override) {
    const json doc = parse_json(json_text, "inventory");
    if (!doc.is_object()) throw ParseError("inventory: top level must be an object");

    EnergyWindow window{1000.0, 3800.0};
    if (const auto it = doc.find("window_kev"); it != doc.end()) {
        const auto w = number_array(*it, "window_kev", "inventory");
        if (w.size() != 2) throw ParseError("inventory: field \"window_kev\" must have exactly 2 entries");
        try {
            window = EnergyWindow(w[0], w[1]);
        } catch (const DomainError&) {
            throw ParseError("inventory: field \"window_kev\" must satisfy 0 < lo < hi");
        }
    }
    if (window_override) window = *window_override;

    const json& mats = require(doc, "materials", "inventory");
    if (!mats.is_array()) throw ParseError("inventory: field \"materials\" must be an array");

    std::vector<MaterialComponent> materials;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const std::string where = "materials[" + std::to_string(i) + "]";
        const json& m = mats[i];
        MaterialComponent c;
        const json& name = require(m, "name", where);
        if (!name.is_string()) throw ParseError(where + ": field \"name\" must be a string");
        c.name = name.get<std::string>();
        const json& np = require(m, "n_protons", where);
        if (!np.is_number_integer()) throw ParseError(where + ": field \"n_protons\" must be an integer");
        c.n_protons = np.get<int>();
        c.atoms_per_kg = require_number(m, "atoms_per_kg", where);
        c.mass_kg = require_number(m, "mass_kg", where);
        c.live_time_s = require_number(m, "live_time_s", where);

        const bool has_coeffs = m.contains("efficiency_coeffs");
        const bool has_builtin = m.contains("efficiency_builtin");
        if (has_coeffs == has_builtin) {
            throw ParseError(where + ": exactly one of \"efficiency_coeffs\" or \"efficiency_builtin\" is required");
        }
        if (has_coeffs) {
            c.efficiency.coeffs = number_array(m["efficiency_coeffs"], "efficiency_coeffs", where);
            if (c.efficiency.coeffs.empty()) throw ParseError(where + ": field \"efficiency_coeffs\" is empty");
        } else {
            const json& b = m["efficiency_builtin"];
            if (!b.is_string()) throw ParseError(where + ": field \"efficiency_builtin\" must be a string");
            try {
                c.efficiency = builtin_efficiency(b.get<std::string>());
            } catch (const DomainError& e) {
                throw ParseError(where + ": field \"efficiency_builtin\": " + e.what());
            }
        }
        try {
            c.validate();
        } catch (const DomainError& e) {
            throw ParseError(where + ": " + e.what());
        }
        materials.push_back(std::move(c));
    }
    return SignalModel(std::move(materials), window);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_sci(double value, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", significant_digits - 1, value);
    return buf;
}

void write_exclusion_csv(std::ostream& out, const ExclusionCurve& curve) {
    out << "r_c_m,lambda_max_per_s\n";
    for (const auto& p : curve.points) {
        out << format_sci(p.r_c, 17) << ',' << format_sci(p.lambda_max, 17) << '\n';
    }
}

void write_shape_csv(std::ostream& out, const std::vector<SpectrumSample>& samples) {
    out << "energy_kev,density_per_kev\n";
    for (const auto& s : samples) {
        out << format_sci(s.e_kev, 17) << ',' << format_sci(s.density, 17) << '\n';
    }
}

}  // namespace csl::io
