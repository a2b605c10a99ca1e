#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "csl/cli.hpp"
#include "csl/emission.hpp"
#include "csl/errors.hpp"
#include "csl/inference.hpp"
#include "csl/io.hpp"
#include "csl/signal.hpp"
#include "csl/simd/kernels.hpp"

namespace csl::cli {

namespace {

// Report numbers: 4 significant digits.
std::string num(double v) { return io::format_sci(v, 4); }

std::string line(std::string_view label, const std::string& value) {
    std::string s = "  ";
    s += label;
    s.append(label.size() < 26 ? 26 - label.size() : 1, ' ');
    s += ": ";
    s += value;
    s += '\n';
    return s;
}

struct CountingFlags {
    std::int64_t z_c = 576;
    std::int64_t z_b = 506;
    double a = 2.0986;
    double credibility = 0.95;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--zc", z_c, "Observed counts in the window")->capture_default_str();
        cmd->add_option("--zb", z_b, "Simulated background counts in the window")->capture_default_str();
        cmd->add_option("--a", a, "Signal constant a (s m^2)")->capture_default_str();
        cmd->add_option("--credibility", credibility, "Posterior probability of the limit")->capture_default_str();
    }

    void validate() const {
        if (z_c < 0) throw CLI::ValidationError("--zc", "must be non-negative");
        if (z_b < 0) throw CLI::ValidationError("--zb", "must be non-negative");
        if (!(a > 0.0) || !std::isfinite(a)) throw CLI::ValidationError("--a", "must be positive");
        if (!(credibility > 0.0 && credibility < 1.0)) {
            throw CLI::ValidationError("--credibility", "must lie strictly between 0 and 1");
        }
    }
};

struct Options {
    std::string output;
    std::string simd;

    CountingFlags counting;
    double limit_rc = 1e-7;

    double rc_min = 1e-9;
    double rc_max = 1e-3;
    std::size_t exclusion_points = 200;

    std::string inventory;
    std::optional<double> window_min;
    std::optional<double> window_max;
    std::size_t shape_points = 1401;

    std::string system;
    std::optional<double> atoms;
    std::optional<int> atomic_number;
    bool electrons = false;
    double energy_kev = 1000.0;
    double lambda = 1e-16;
    double rc = 1e-7;

    std::string material;
    std::string dataset{kBuiltinDataset};
};

void require_positive(double v, const char* flag) {
    if (!(v > 0.0) || !std::isfinite(v)) throw CLI::ValidationError(flag, "must be a positive number");
}

std::optional<EnergyWindow> window_flags(const Options& o) {
    if (o.window_min.has_value() != o.window_max.has_value()) {
        throw CLI::ValidationError("--window-min/--window-max", "give both bounds or neither");
    }
    if (!o.window_min) return std::nullopt;
    if (!(*o.window_min > 0.0 && *o.window_min < *o.window_max)) {
        throw CLI::ValidationError("--window-min/--window-max", "need 0 < min < max");
    }
    return EnergyWindow(*o.window_min, *o.window_max);
}

struct Result {
    std::string text;
    int code = kSuccess;
};

void flush_warnings(const Diagnostics& diag, std::ostream& err) {
    for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
}

Result cmd_limit(const Options& o) {
    const auto& c = o.counting;
    const CountingExperiment exp(c.z_c, c.z_b, c.a);
    const UpperLimit ul = upper_limit_lambda(exp, o.limit_rc, c.credibility);

    std::string r = "CSL collapse-rate upper limit (uniform prior, Poisson counts)\n";
    r += line("observed counts z_c", std::to_string(c.z_c));
    r += line("background counts z_b", std::to_string(c.z_b));
    r += line("signal constant a", num(c.a) + " s m^2");
    r += line("correlation length r_C", num(o.limit_rc) + " m");
    r += line("credibility", num(c.credibility));
    r += line("posterior quantile", num(ul.lambda_bar_c) + " counts");
    r += line("signal quota", num(ul.signal_quota) + " counts");
    if (ul.has_positive_limit) {
        r += line("lambda_max", num(ul.lambda_max) + " s^-1");
        r += line("status", "ok");
        return {r, kSuccess};
    }
    r += line("lambda_max", "none");
    r += line("status", "no positive limit (posterior quantile <= z_b + 2)");
    return {r, kNoPositiveLimit};
}

Result cmd_exclusion(const Options& o, std::ostream& err) {
    const auto& c = o.counting;
    const CountingExperiment exp(c.z_c, c.z_b, c.a);
    const ExclusionCurve curve = exclusion_curve(exp, o.rc_min, o.rc_max, o.exclusion_points, c.credibility);
    if (!curve.has_positive_limit) {
        err << "error: no positive limit (posterior quantile " << num(curve.lambda_bar_c) << " <= z_b + 2)\n";
        return {"", kNoPositiveLimit};
    }
    const double slope = loglog_slope(curve);
    if (std::abs(slope - 2.0) > 1e-9) {
        err << "warning: exclusion curve log-log slope " << io::format_sci(slope, 12) << " deviates from 2\n";
    }
    std::ostringstream csv;
    io::write_exclusion_csv(csv, curve);
    return {csv.str(), kSuccess};
}

Result cmd_signal(const Options& o, std::ostream& err) {
    const SignalModel model = io::parse_inventory(io::read_file(o.inventory), window_flags(o));
    Diagnostics diag;
    const auto parts = signal_constant_by_material(model, {}, &diag);
    flush_warnings(diag, err);
    if (parts.empty()) err << "warning: inventory has no materials; a = 0\n";

    double total = 0.0;
    std::string r = "Signal constant a (expected counts = a * lambda / r_C^2)\n";
    r += line("energy window", num(model.window().e_min()) + " - " + num(model.window().e_max()) + " keV");
    r += line("beta", num(model.beta()) + " m^2");
    r += "  a_i = N_i^2 * (m_i n_i T) * beta * integral of eps_i(E)/E dE over the window\n";
    for (const auto& p : parts) {
        r += line("a[" + p.name + "]", num(p.a) + " s m^2");
        total += p.a;
    }
    r += line("a (total)", num(total) + " s m^2");
    return {r, kSuccess};
}

Result cmd_shape(const Options& o, std::ostream& err) {
    if (o.shape_points < 2) throw CLI::ValidationError("--points", "must be at least 2");
    const SignalModel model = io::parse_inventory(io::read_file(o.inventory), window_flags(o));
    Diagnostics diag;
    const auto samples = signal_shape(model, o.shape_points, &diag);
    flush_warnings(diag, err);
    std::ostringstream csv;
    io::write_shape_csv(csv, samples);
    return {csv.str(), kSuccess};
}

Result cmd_rate(const Options& o, std::ostream& err) {
    const NoiseParams noise(o.lambda, o.rc);
    std::string r = "CSL spontaneous emission rate\n";
    r += line("energy", num(o.energy_kev) + " keV");
    r += line("lambda", num(o.lambda) + " s^-1");
    r += line("r_C", num(o.rc) + " m");
    const double unit = unit_charge_rate(noise, o.energy_kev).value;

    if (!o.system.empty()) {
        const ParticleSystem system = io::parse_particle_system(io::read_file(o.system));
        const RateDensity rate = rate_general(system, noise, o.energy_kev);
        std::vector<double> charges;
        for (const auto& p : system.particles()) charges.push_back(p.charge_e);
        r += line("particles", std::to_string(system.size()));
        r += line("amplification", num(rate.value / unit));
        r += line("incoherent limit A", num(rate_incoherent(charges, noise, o.energy_kev).value / unit));
        r += line("coherent limit A", num(rate_coherent(charges, noise, o.energy_kev).value / unit));
        r += line("dGamma/dE", num(rate.value) + " keV^-1 s^-1");
        return {r, kSuccess};
    }

    Diagnostics diag;
    const RateDensity rate = rate_atomic(*o.atoms, *o.atomic_number, noise, o.energy_kev, o.electrons, &diag);
    flush_warnings(diag, err);
    const double amp = atomic_amplification(*o.atomic_number, o.electrons);
    char amp_text[32];
    std::snprintf(amp_text, sizeof amp_text, "%.0f", amp);
    r += line("atoms", num(*o.atoms));
    r += line("atomic number", std::to_string(*o.atomic_number));
    r += line("electrons", o.electrons ? "included" : "excluded");
    r += line("amplification", amp_text);
    r += line("dGamma/dE", num(rate.value) + " keV^-1 s^-1");
    return {r, kSuccess};
}

Result cmd_efficiency(const Options& o, std::ostream& err) {
    const auto& table = efficiency_dataset(o.dataset);
    const EfficiencyPoly* poly = nullptr;
    for (const auto& e : table) {
        if (e.name == o.material) poly = &e.poly;
    }
    if (poly == nullptr) poly = &builtin_efficiency(o.material);  // throws with the valid names
    Diagnostics diag;
    const double eff = eval_efficiency(*poly, o.energy_kev, &diag);
    flush_warnings(diag, err);
    std::string r = "Detection efficiency\n";
    r += line("material", o.material);
    r += line("degree", std::to_string(poly->degree()));
    r += line("energy", num(o.energy_kev) + " keV");
    r += line("efficiency", num(eff));
    return {r, kSuccess};
}

Result cmd_regime(const Options& o) {
    const NoiseParams noise(o.lambda, o.rc);
    const ParticleSystem system = io::parse_particle_system(io::read_file(o.system));
    const RegimeReport rep = classify_regime(system, noise, o.energy_kev);
    std::string r = "Emission regime\n";
    r += line("regime", std::string(regime_name(rep.regime)));
    r += line("min pair separation", num(rep.min_separation_m) + " m");
    r += line("max pair separation", num(rep.max_separation_m) + " m");
    r += line("photon wavelength", num(rep.wavelength_m) + " m");
    r += line("reduced wavelength c/w", num(rep.reduced_wavelength_m) + " m");
    r += line("r_C", num(rep.r_c_m) + " m");
    return {r, kSuccess};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Bounds on the CSL collapse model from spontaneous radiation emission"};
    app.name("cslbound");
    app.require_subcommand(1);
    app.add_option("--simd", o.simd, "Kernel variant: scalar or avx2 (default: best available)")
        ->check(CLI::IsMember({"scalar", "avx2"}));

    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--output", o.output, "Write the result to this file instead of standard output");
    };

    auto* limit = app.add_subcommand("limit", "Upper limit on lambda at one r_C");
    o.counting.add_to(limit);
    limit->add_option("--rc", o.limit_rc, "Correlation length r_C (m)")->capture_default_str();
    add_output(limit);

    auto* exclusion = app.add_subcommand("exclusion", "lambda_max over a log-uniform r_C grid (CSV)");
    o.counting.add_to(exclusion);
    exclusion->add_option("--rc-min", o.rc_min, "Smallest r_C (m)")->capture_default_str();
    exclusion->add_option("--rc-max", o.rc_max, "Largest r_C (m)")->capture_default_str();
    exclusion->add_option("--points", o.exclusion_points, "Grid points")->capture_default_str();
    add_output(exclusion);

    auto* signal = app.add_subcommand("signal", "Signal constant a for a material inventory");
    signal->add_option("--inventory", o.inventory, "Inventory JSON file")->required();
    signal->add_option("--window-min", o.window_min, "Window lower edge (keV)");
    signal->add_option("--window-max", o.window_max, "Window upper edge (keV)");
    add_output(signal);

    auto* shape = app.add_subcommand("shape", "Normalised expected signal spectrum (CSV)");
    shape->add_option("--inventory", o.inventory, "Inventory JSON file")->required();
    shape->add_option("--points", o.shape_points, "Samples across the window")->capture_default_str();
    shape->add_option("--window-min", o.window_min, "Window lower edge (keV)");
    shape->add_option("--window-max", o.window_max, "Window upper edge (keV)");
    add_output(shape);

    auto* rate = app.add_subcommand("rate", "Emission rate dGamma/dE for a particle system or atoms");
    auto* sys_opt = rate->add_option("--system", o.system, "Particle system JSON file");
    auto* atoms_opt = rate->add_option("--atoms", o.atoms, "Number of atoms");
    auto* na_opt = rate->add_option("--na", o.atomic_number, "Atomic number N_A");
    rate->add_flag("--electrons", o.electrons, "Include the incoherent electron term");
    rate->add_option("--energy", o.energy_kev, "Photon energy (keV)")->capture_default_str();
    rate->add_option("--lambda", o.lambda, "Collapse rate lambda (1/s)")->capture_default_str();
    rate->add_option("--rc", o.rc, "Correlation length r_C (m)")->capture_default_str();
    sys_opt->excludes(atoms_opt)->excludes(na_opt);
    atoms_opt->needs(na_opt);
    na_opt->needs(atoms_opt);
    add_output(rate);

    auto* efficiency = app.add_subcommand("efficiency", "Built-in detection efficiency at one energy");
    efficiency->add_option("--material", o.material, "Material name, e.g. \"Ge crystal\"")->required();
    efficiency->add_option("--energy", o.energy_kev, "Photon energy (keV)")->required();
    efficiency->add_option("--dataset", o.dataset, "Built-in dataset")->capture_default_str();
    add_output(efficiency);

    auto* regime = app.add_subcommand("regime", "Coherent / incoherent classification of a particle system");
    regime->add_option("--system", o.system, "Particle system JSON file")->required();
    regime->add_option("--energy", o.energy_kev, "Photon energy (keV)")->capture_default_str();
    regime->add_option("--rc", o.rc, "Correlation length r_C (m)")->capture_default_str();
    add_output(regime);

    Result result;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (!o.simd.empty()) simd::select(o.simd == "avx2" ? simd::Isa::avx2 : simd::Isa::scalar);

        if (limit->parsed()) {
            o.counting.validate();
            require_positive(o.limit_rc, "--rc");
            result = cmd_limit(o);
        } else if (exclusion->parsed()) {
            o.counting.validate();
            require_positive(o.rc_min, "--rc-min");
            require_positive(o.rc_max, "--rc-max");
            if (!(o.rc_min < o.rc_max)) throw CLI::ValidationError("--rc-min/--rc-max", "need rc-min < rc-max");
            if (o.exclusion_points < 2) throw CLI::ValidationError("--points", "must be at least 2");
            result = cmd_exclusion(o, err);
        } else if (signal->parsed()) {
            result = cmd_signal(o, err);
        } else if (shape->parsed()) {
            result = cmd_shape(o, err);
        } else if (rate->parsed()) {
            require_positive(o.energy_kev, "--energy");
            require_positive(o.lambda, "--lambda");
            require_positive(o.rc, "--rc");
            if (o.system.empty() && !o.atoms) {
                throw CLI::ValidationError("rate", "give either --system or --atoms with --na");
            }
            if (o.atoms && !(*o.atoms >= 0.0)) throw CLI::ValidationError("--atoms", "must be non-negative");
            if (o.atomic_number && *o.atomic_number < 1) throw CLI::ValidationError("--na", "must be at least 1");
            result = cmd_rate(o, err);
        } else if (efficiency->parsed()) {
            require_positive(o.energy_kev, "--energy");
            result = cmd_efficiency(o, err);
        } else if (regime->parsed()) {
            require_positive(o.energy_kev, "--energy");
            require_positive(o.rc, "--rc");
            o.lambda = 1.0;  // the classification does not depend on lambda
            result = cmd_regime(o);
        }
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run 'cslbound --help' for usage\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    if (result.text.empty()) return result.code;
    if (o.output.empty()) {
        out << result.text;
    } else {
        std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
        if (!file || !(file << result.text) || !file.flush()) {
            err << "error: cannot write '" << o.output << "'\n";
            return kUsageError;
        }
    }
    return result.code;
}

}  // namespace csl::cli
