#pragma once

// Run configuration: flat `key = value` text. Keys before the first
// `[section]` apply to every scenario; keys inside `[radiance_vs_drive]` etc.
// apply only to that scenario and override the global ones.

#include "usc/model.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace usc {

enum class Scenario {
    energy_spectrum,
    radiance_vs_drive,
    detuning_sweep,
    peak_map,
    excitation_spectrum,
    parity_compare,
};

std::string_view to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view name);

/// One sweep axis: either an even grid [min, max] with `points` samples or an explicit value list.
struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    std::vector<double> values;

    std::vector<double> grid() const;
};

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct SweepSpec {
    Scenario scenario = Scenario::radiance_vs_drive;
    SystemParams base;
    Axis axis1;
    std::optional<Axis> axis2;
    std::vector<double> thetas;
    std::vector<int> qubit_counts{1, 2};
    std::string output_dir = "out";
    int harmonics = 3;
    int levels_reported = 8;       ///< energy_spectrum
    Axis scan;                     ///< omega_d grid used inside peak_map
    std::vector<Window> windows;   ///< detuning_sweep class-occupancy windows

    void validate() const;
};

/// Raw parsed file: global keys plus per-section keys, in file order.
struct ConfigFile {
    std::map<std::string, std::string> global;
    std::map<std::string, std::map<std::string, std::string>> sections;
};

ConfigFile parse_config(std::istream &in);
ConfigFile load_config(const std::string &path);

/// Scenario defaults overlaid with the file's global keys and its section.
SweepSpec make_spec(Scenario scenario, const ConfigFile &file);
SweepSpec default_spec(Scenario scenario);

/// Accepts plain numbers and pi expressions: "pi", "pi/6", "2*pi/3", "0.5*pi".
double parse_number(std::string_view key, std::string_view text);

/// True if `name` is a SystemParams field usable as a sweep axis.
bool is_param_name(std::string_view name);
void set_param(SystemParams &p, std::string_view name, double value);
double get_param(const SystemParams &p, std::string_view name);

} // namespace usc
