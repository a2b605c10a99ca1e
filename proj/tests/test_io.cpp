#include <doctest.h>

#include <sstream>
#include <string>

#include "csl/errors.hpp"
#include "csl/io.hpp"

using namespace csl;

namespace {

bool throws_mentioning(const std::string& json, const std::string& needle, bool inventory) {
    try {
        if (inventory) {
            io::parse_inventory(json);
        } else {
            io::parse_particle_system(json);
        }
    } catch (const ParseError& e) {
        const bool found = std::string(e.what()).find(needle) != std::string::npos;
        if (!found) MESSAGE("message was: " << e.what());
        return found;
    }
    return false;
}

const char* kMaterial = R"({"name": "Ge", "n_protons": 32, "atoms_per_kg": 8.29e24, "mass_kg": 1.0,
                            "live_time_s": 1.07e7, "efficiency_coeffs": [1.0]})";

}  // namespace

TEST_CASE("particle system JSON") {
    const auto sys = io::parse_particle_system(
        R"([{"charge_e": 1, "mass_kg": 1.67e-27, "position_m": [0, 0, 0]},
            {"charge_e": -1, "mass_kg": 9.1e-31, "position_m": [1e-10, 0, 2e-10]}])");
    REQUIRE(sys.size() == 2);
    CHECK(sys.particles()[1].charge_e == -1.0);
    CHECK(sys.particles()[1].position_m[2] == 2e-10);

    CHECK(throws_mentioning("[]", "at least one", false));
    CHECK(throws_mentioning("{}", "array", false));
    CHECK(throws_mentioning("[{\"charge_e\": 1, \"position_m\": [0,0,0]}]", "mass_kg", false));
    CHECK(throws_mentioning("[{\"charge_e\": 1, \"mass_kg\": 1, \"position_m\": [0,0]}]", "position_m", false));
    CHECK(throws_mentioning("[{\"charge_e\": 1, \"mass_kg\": 0, \"position_m\": [0,0,0]}]", "mass_kg", false));
    CHECK(throws_mentioning("[{\"charge_e\": \"x\", \"mass_kg\": 1, \"position_m\": [0,0,0]}]", "charge_e", false));
    CHECK(throws_mentioning("[{", "invalid JSON", false));
}

TEST_CASE("inventory JSON") {
    const auto m = io::parse_inventory(std::string("{\"materials\": [") + kMaterial + "]}");
    CHECK(m.window().e_min() == 1000.0);
    CHECK(m.window().e_max() == 3800.0);
    REQUIRE(m.materials().size() == 1);
    CHECK(m.materials()[0].n_protons == 32);

    const auto w = io::parse_inventory(R"({"window_kev": [1500, 2500], "materials": []})");
    CHECK(w.window().e_min() == 1500.0);
    CHECK(w.materials().empty());

    const auto over = io::parse_inventory(R"({"window_kev": [1500, 2500], "materials": []})", EnergyWindow(10, 20));
    CHECK(over.window().e_max() == 20.0);

    const auto builtin = io::parse_inventory(
        R"({"materials": [{"name": "Ge", "n_protons": 32, "atoms_per_kg": 8.29e24, "mass_kg": 1.0,
            "live_time_s": 1.07e7, "efficiency_builtin": "Ge crystal"}]})");
    CHECK(builtin.materials()[0].efficiency.degree() == 4);
}

TEST_CASE("inventory errors name the field") {
    CHECK(throws_mentioning(R"({"materials": [{"name": "Ge", "n_protons": 32, "atoms_per_kg": 8.29e24,
        "live_time_s": 1.07e7, "efficiency_coeffs": [1.0]}]})",
                            "\"mass_kg\"", true));
    CHECK(throws_mentioning(R"({"materials": [{"name": "Ge", "n_protons": 32.5, "atoms_per_kg": 8.29e24,
        "mass_kg": 1, "live_time_s": 1.07e7, "efficiency_coeffs": [1.0]}]})",
                            "n_protons", true));
    CHECK(throws_mentioning(R"({"materials": [{"name": "Ge", "n_protons": 32, "atoms_per_kg": 8.29e24,
        "mass_kg": 1, "live_time_s": 1.07e7}]})",
                            "efficiency", true));
    CHECK(throws_mentioning(R"({"materials": [{"name": "Ge", "n_protons": 32, "atoms_per_kg": 8.29e24,
        "mass_kg": 1, "live_time_s": 1.07e7, "efficiency_builtin": "Unobtainium"}]})",
                            "valid names", true));
    CHECK(throws_mentioning(R"({"window_kev": [3800, 1000], "materials": []})", "window_kev", true));
    CHECK(throws_mentioning(R"({"window_kev": [1000], "materials": []})", "window_kev", true));
    CHECK(throws_mentioning(R"({"window_kev": [1000, 3800]})", "materials", true));
    CHECK(throws_mentioning(R"({"materials": [{"name": "Ge", "n_protons": 32, "atoms_per_kg": 8.29e24,
        "mass_kg": -1, "live_time_s": 1.07e7, "efficiency_coeffs": [1.0]}]})",
                            "mass_kg", true));
}

TEST_CASE("CSV writers use 17 significant digits") {
    ExclusionCurve c;
    c.points = {{1e-9, 5.1973236246308371e-17}, {1e-3, 0.1}};
    c.credibility = 0.95;
    c.lambda_bar_c = 617.1;
    c.has_positive_limit = true;
    std::ostringstream out;
    io::write_exclusion_csv(out, c);
    CHECK(out.str() ==
          "r_c_m,lambda_max_per_s\n"
          "1.0000000000000001e-09,5.1973236246308371e-17\n"
          "1.0000000000000000e-03,1.0000000000000001e-01\n");

    std::ostringstream shape;
    io::write_shape_csv(shape, {{1000.0, 0.5}});
    CHECK(shape.str() == "energy_kev,density_per_kev\n1.0000000000000000e+03,5.0000000000000000e-01\n");

    CHECK(io::format_sci(5.19732e-13, 4) == "5.197e-13");
}

TEST_CASE("read_file") {
    CHECK_THROWS_AS(io::read_file("/nonexistent/file.json"), ParseError);
}
