#include "usc/config.hpp"
#include "usc/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace usc;

namespace {

constexpr double kPi = std::numbers::pi;

ConfigFile parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in);
}

std::string error_key(Scenario s, const std::string &text)
{
    try {
        make_spec(s, parse(text));
    } catch (const ConfigError &e) {
        return e.key();
    }
    return "";
}

} // namespace

TEST_CASE("numbers and pi expressions")
{
    CHECK(parse_number("x", "0.25") == 0.25);
    CHECK(parse_number("x", " 1e-3 ") == 1e-3);
    CHECK(parse_number("x", "pi") == kPi);
    CHECK(parse_number("x", "pi/6") == kPi / 6);
    CHECK(parse_number("x", "2*pi/3") == doctest::Approx(2 * kPi / 3).epsilon(1e-15));
    CHECK(parse_number("x", "0.5*pi") == kPi / 2);
    CHECK_THROWS_AS(parse_number("x", "abc"), ConfigError);
    CHECK_THROWS_AS(parse_number("x", "2pi"), ConfigError);
    CHECK_THROWS_AS(parse_number("x", "1.0junk"), ConfigError);
}

TEST_CASE("parameter names")
{
    SystemParams p;
    for (const char *name : {"omega_c", "lambda", "theta", "Omega", "omega_d", "kappa", "gamma_sigma"}) {
        CHECK(is_param_name(name));
        set_param(p, name, 0.123);
        CHECK(get_param(p, name) == 0.123);
    }
    CHECK_FALSE(is_param_name("n_max"));
    CHECK_FALSE(is_param_name("omega"));
}

TEST_CASE("grid endpoints are exact")
{
    const Axis a{"omega_d", 0.7, 1.4, 701, {}};
    const std::vector<double> g = a.grid();
    REQUIRE(g.size() == 701);
    CHECK(g.front() == 0.7);
    CHECK(g.back() == 1.4);
    CHECK(g[350] == doctest::Approx(1.05).epsilon(1e-14));
    const Axis list{"lambda", 0, 0, 0, {0.05, 0.2}};
    CHECK(list.grid() == std::vector<double>{0.05, 0.2});
}

TEST_CASE("defaults validate for every scenario")
{
    for (Scenario s : {Scenario::energy_spectrum, Scenario::radiance_vs_drive, Scenario::detuning_sweep,
                       Scenario::peak_map, Scenario::excitation_spectrum, Scenario::parity_compare}) {
        CHECK_NOTHROW(default_spec(s).validate());
        CHECK(scenario_from_string(to_string(s)) == s);
    }
    CHECK_FALSE(scenario_from_string("radiance").has_value());
    const SweepSpec r = default_spec(Scenario::radiance_vs_drive);
    CHECK(r.axis1.name == "omega_d");
    CHECK(r.axis1.grid().size() == 701);
    REQUIRE(r.axis2.has_value());
    CHECK(r.axis2->grid() == std::vector<double>{0.05, 0.1, 0.2});
}

TEST_CASE("global keys, section overrides and comments")
{
    const ConfigFile f = parse("# comment\n"
                               "lambda = 0.15   ; trailing\n"
                               "n_max = 12\n"
                               "level_cut = all\n"
                               "thetas = pi/2, pi/6\n"
                               "\n"
                               "[radiance_vs_drive]\n"
                               "lambda = 0.05\n"
                               "axis1_min = 0.8\n"
                               "axis1_max = 1.2\n"
                               "axis1_points = 41\n"
                               "axis2 = Omega\n"
                               "axis2_values = 0.001, 0.002\n"
                               "[parity_compare]\n"
                               "kappa = 0.02\n");
    const SweepSpec r = make_spec(Scenario::radiance_vs_drive, f);
    CHECK(r.base.lambda == 0.05);
    CHECK(r.base.n_max == 12);
    CHECK(r.base.level_cut == kAllLevels);
    CHECK(r.base.kappa == 0.01);
    CHECK(r.thetas == std::vector<double>{kPi / 2, kPi / 6});
    CHECK(r.axis1.grid().size() == 41);
    CHECK(r.axis2->name == "Omega");
    CHECK(r.axis2->grid() == std::vector<double>{0.001, 0.002});

    const SweepSpec p = make_spec(Scenario::parity_compare, f);
    CHECK(p.base.lambda == 0.15);
    CHECK(p.base.kappa == 0.02);
}

TEST_CASE("explicit ranges replace default value lists")
{
    const SweepSpec r = make_spec(Scenario::radiance_vs_drive, parse("axis2_min = 0.05\naxis2_max = 0.2\naxis2_points = 4\n"));
    CHECK(r.axis2->grid().size() == 4);
    CHECK(r.axis2->grid().back() == 0.2);
    // Renaming without new values must not reuse the old list.
    CHECK(error_key(Scenario::radiance_vs_drive, "axis2 = Omega\n") == "axis2_points");
}

TEST_CASE("windows")
{
    const SweepSpec d = make_spec(Scenario::detuning_sweep, parse("windows = 0.8:0.9, 1.1 : 1.2\n"));
    REQUIRE(d.windows.size() == 2);
    CHECK(d.windows[1].lo == 1.1);
    CHECK(d.windows[1].hi == 1.2);
    CHECK(error_key(Scenario::detuning_sweep, "windows = 0.9:0.8\n") == "windows");
    CHECK(error_key(Scenario::detuning_sweep, "windows = 0.9\n") == "windows");
}

TEST_CASE("invalid configurations name the key")
{
    CHECK(error_key(Scenario::radiance_vs_drive, "axis1_points = 1\n") == "axis1_points");
    CHECK(error_key(Scenario::radiance_vs_drive, "axis1_min = 1.5\n") == "axis1_min");
    CHECK(error_key(Scenario::radiance_vs_drive, "axis1_min = 0\n") == "axis1_min");
    CHECK(error_key(Scenario::radiance_vs_drive, "axis1 = lambda\naxis1_min = 0\naxis1_max = 0.2\naxis1_points = 3\n") == "axis1");
    CHECK(error_key(Scenario::radiance_vs_drive, "axis1 = n_max\n") == "axis1");
    CHECK(error_key(Scenario::detuning_sweep, "axis2 = lambda\naxis2_values = 0.1\n") == "axis2");
    CHECK(error_key(Scenario::radiance_vs_drive, "bogus = 1\n") == "bogus");
    CHECK(error_key(Scenario::radiance_vs_drive, "axis1_step = 1\n") == "axis1_step");
    CHECK(error_key(Scenario::radiance_vs_drive, "kappa = -1\n") == "kappa");
    CHECK(error_key(Scenario::radiance_vs_drive, "thetas = 0\n") == "theta");
    CHECK(error_key(Scenario::radiance_vs_drive, "qubit_counts = 1, 3\n") == "qubit_counts");
    CHECK(error_key(Scenario::radiance_vs_drive, "harmonics = 0\n") == "harmonics");
    CHECK(error_key(Scenario::radiance_vs_drive, "n_max = 2.5\n") == "n_max");
    CHECK(error_key(Scenario::radiance_vs_drive, "level_cut = 5\n") == "level_cut");
    CHECK(error_key(Scenario::peak_map, "scan_points = 1\n") == "scan_points");

    CHECK_THROWS_AS(parse("[radiance]\n"), ConfigError);
    CHECK_THROWS_AS(parse("[radiance_vs_drive\n"), ConfigError);
    CHECK_THROWS_AS(parse("lambda 0.1\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}
