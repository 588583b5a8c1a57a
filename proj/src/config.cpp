#include "usc/config.hpp"

#include "usc/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <set>
#include <sstream>

namespace usc {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto end = pos == std::string_view::npos ? s.size() : pos;
        out.push_back(trim(s.substr(start, end - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_plain(std::string_view key, std::string_view text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto *begin = t.data();
    const auto *end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (t.empty() || ec != std::errc() || ptr != end) {
        throw ConfigError(std::string(key), "cannot parse number '" + t + "'");
    }
    return v;
}

int parse_int(std::string_view key, std::string_view text)
{
    const double v = parse_plain(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ConfigError(std::string(key), "expected an integer");
    }
    return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view text)
{
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(std::string(key), "expected true or false");
}

std::vector<double> parse_list(std::string_view key, std::string_view text)
{
    std::vector<double> out;
    for (const std::string &item : split(text, ',')) {
        out.push_back(parse_number(key, item));
    }
    return out;
}

const std::set<std::string> &param_names()
{
    static const std::set<std::string> names{"omega_c", "omega_sigma", "lambda",      "theta",
                                             "n_qubits", "Omega",      "omega_d",     "kappa",
                                             "gamma_sigma", "n_max",   "level_cut",   "drop_sigma_z_coupling"};
    return names;
}

const std::set<std::string> &axis_names()
{
    static const std::set<std::string> names{"omega_c", "lambda", "theta", "Omega", "omega_d", "kappa", "gamma_sigma"};
    return names;
}

void apply_key(SweepSpec &spec, const std::string &key, const std::string &value)
{
    SystemParams &p = spec.base;
    auto axis_field = [&](Axis &axis, std::string_view suffix) {
        // Keys arrive sorted, so the name is applied before range or values.
        // A new name drops the default grid; an explicit range drops a default list.
        if (suffix.empty()) {
            if (trim(value) != axis.name) axis = Axis{trim(value), 0.0, 0.0, 0, {}};
        } else if (suffix == "_min") {
            axis.min = parse_number(key, value);
            axis.values.clear();
        } else if (suffix == "_max") {
            axis.max = parse_number(key, value);
            axis.values.clear();
        } else if (suffix == "_points") {
            axis.points = parse_int(key, value);
            axis.values.clear();
        } else if (suffix == "_values") {
            axis.values = parse_list(key, value);
        } else {
            throw ConfigError(key, "unknown key");
        }
    };

    if (key == "level_cut") {
        p.level_cut = trim(value) == "all" ? kAllLevels : parse_int(key, value);
    } else if (key == "n_qubits") {
        p.n_qubits = parse_int(key, value);
    } else if (key == "n_max") {
        p.n_max = parse_int(key, value);
    } else if (key == "drop_sigma_z_coupling") {
        p.drop_sigma_z_coupling = parse_bool(key, value);
    } else if (param_names().count(key)) {
        set_param(p, key, parse_number(key, value));
    } else if (key.rfind("axis1", 0) == 0) {
        axis_field(spec.axis1, std::string_view(key).substr(5));
    } else if (key.rfind("axis2", 0) == 0) {
        if (!spec.axis2) spec.axis2 = Axis{};
        axis_field(*spec.axis2, std::string_view(key).substr(5));
    } else if (key.rfind("scan", 0) == 0) {
        axis_field(spec.scan, std::string_view(key).substr(4));
    } else if (key == "thetas") {
        spec.thetas = parse_list(key, value);
    } else if (key == "qubit_counts") {
        spec.qubit_counts.clear();
        for (double q : parse_list(key, value)) {
            spec.qubit_counts.push_back(static_cast<int>(q));
        }
    } else if (key == "output_dir") {
        spec.output_dir = trim(value);
    } else if (key == "harmonics") {
        spec.harmonics = parse_int(key, value);
    } else if (key == "levels") {
        spec.levels_reported = parse_int(key, value);
    } else if (key == "windows") {
        spec.windows.clear();
        for (const std::string &w : split(value, ',')) {
            const auto parts = split(w, ':');
            if (parts.size() != 2) {
                throw ConfigError(key, "windows are written lo:hi, comma separated");
            }
            spec.windows.push_back({parse_number(key, parts[0]), parse_number(key, parts[1])});
        }
    } else {
        throw ConfigError(key, "unknown key");
    }
}

void validate_axis(const Axis &axis, const std::string &prefix)
{
    if (!is_param_name(axis.name)) {
        throw ConfigError(prefix, "'" + axis.name + "' is not a sweepable parameter");
    }
    if (!axis.values.empty()) {
        return;
    }
    if (axis.points < 2) {
        throw ConfigError(prefix + "_points", "must be >= 2");
    }
    if (!(axis.min < axis.max)) {
        throw ConfigError(prefix + "_min", "must be < " + prefix + "_max");
    }
}

Axis make_axis(std::string name, double lo, double hi, int points)
{
    return Axis{std::move(name), lo, hi, points, {}};
}

} // namespace

std::string_view to_string(Scenario s)
{
    switch (s) {
    case Scenario::energy_spectrum: return "energy_spectrum";
    case Scenario::radiance_vs_drive: return "radiance_vs_drive";
    case Scenario::detuning_sweep: return "detuning_sweep";
    case Scenario::peak_map: return "peak_map";
    case Scenario::excitation_spectrum: return "excitation_spectrum";
    case Scenario::parity_compare: return "parity_compare";
    }
    return "unknown";
}

std::optional<Scenario> scenario_from_string(std::string_view name)
{
    for (Scenario s : {Scenario::energy_spectrum, Scenario::radiance_vs_drive, Scenario::detuning_sweep,
                       Scenario::peak_map, Scenario::excitation_spectrum, Scenario::parity_compare}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

std::vector<double> Axis::grid() const
{
    if (!values.empty()) {
        return values;
    }
    std::vector<double> g(static_cast<std::size_t>(std::max(points, 0)));
    for (int i = 0; i < points; ++i) {
        // Endpoints exact; interior points from min + i * step.
        g[static_cast<std::size_t>(i)] =
            i == points - 1 ? max : min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return g;
}

double parse_number(std::string_view key, std::string_view text)
{
    std::string t = trim(text);
    const auto pi_pos = t.find("pi");
    if (pi_pos == std::string::npos) {
        return parse_plain(key, t);
    }
    double value = std::numbers::pi;
    std::string before = trim(std::string_view(t).substr(0, pi_pos));
    std::string after = trim(std::string_view(t).substr(pi_pos + 2));
    if (!before.empty()) {
        if (before.back() != '*') {
            throw ConfigError(std::string(key), "cannot parse '" + t + "'");
        }
        before.pop_back();
        value *= parse_plain(key, before);
    }
    if (!after.empty()) {
        if (after.front() != '/') {
            throw ConfigError(std::string(key), "cannot parse '" + t + "'");
        }
        value /= parse_plain(key, std::string_view(after).substr(1));
    }
    return value;
}

bool is_param_name(std::string_view name)
{
    return axis_names().count(std::string(name)) > 0;
}

void set_param(SystemParams &p, std::string_view name, double value)
{
    if (name == "omega_c") p.omega_c = value;
    else if (name == "omega_sigma") p.omega_sigma = value;
    else if (name == "lambda") p.lambda = value;
    else if (name == "theta") p.theta = value;
    else if (name == "Omega") p.Omega = value;
    else if (name == "omega_d") p.omega_d = value;
    else if (name == "kappa") p.kappa = value;
    else if (name == "gamma_sigma") p.gamma_sigma = value;
    else throw ConfigError(std::string(name), "not a real-valued parameter");
}

double get_param(const SystemParams &p, std::string_view name)
{
    if (name == "omega_c") return p.omega_c;
    if (name == "omega_sigma") return p.omega_sigma;
    if (name == "lambda") return p.lambda;
    if (name == "theta") return p.theta;
    if (name == "Omega") return p.Omega;
    if (name == "omega_d") return p.omega_d;
    if (name == "kappa") return p.kappa;
    if (name == "gamma_sigma") return p.gamma_sigma;
    throw ConfigError(std::string(name), "not a real-valued parameter");
}

ConfigFile parse_config(std::istream &in)
{
    ConfigFile file;
    std::map<std::string, std::string> *current = &file.global;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        const std::string text = trim(std::string_view(line).substr(0, hash));
        if (text.empty()) {
            continue;
        }
        if (text.front() == '[') {
            if (text.back() != ']') {
                throw ConfigError("line " + std::to_string(line_no), "unterminated section header");
            }
            const std::string name = trim(std::string_view(text).substr(1, text.size() - 2));
            if (!scenario_from_string(name)) {
                throw ConfigError(name, "unknown scenario section");
            }
            current = &file.sections[name];
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no), "empty key");
        }
        (*current)[key] = value;
    }
    return file;
}

ConfigFile load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("--config", "cannot open '" + path + "'");
    }
    return parse_config(in);
}

SweepSpec default_spec(Scenario scenario)
{
    SweepSpec spec;
    spec.scenario = scenario;
    spec.base = SystemParams{};
    spec.scan = make_axis("omega_d", 0.5, 1.5, 201);
    switch (scenario) {
    case Scenario::energy_spectrum:
        spec.axis1 = make_axis("lambda", 0.0, 0.3, 61);
        spec.thetas = {std::numbers::pi / 2, std::numbers::pi / 6};
        break;
    case Scenario::radiance_vs_drive:
        spec.axis1 = make_axis("omega_d", 0.7, 1.4, 701);
        spec.axis2 = Axis{"lambda", 0, 0, 0, {0.05, 0.1, 0.2}};
        spec.thetas = {std::numbers::pi / 2};
        break;
    case Scenario::detuning_sweep:
        spec.axis1 = make_axis("omega_d", 0.7, 1.4, 701);
        spec.axis2 = Axis{"omega_c", 0, 0, 0, {0.95, 1.0, 1.05}};
        spec.thetas = {std::numbers::pi / 2};
        spec.windows = {{0.875, 0.917}, {1.12, 1.178}};
        break;
    case Scenario::peak_map:
        spec.axis1 = make_axis("lambda", 0.02, 0.3, 15);
        spec.thetas = {std::numbers::pi / 2, std::numbers::pi / 6};
        break;
    case Scenario::excitation_spectrum:
        spec.axis1 = make_axis("omega_d", 0.7, 1.4, 701);
        spec.axis2 = Axis{"lambda", 0, 0, 0, {0.05, 0.1, 0.15, 0.2}};
        spec.thetas = {std::numbers::pi / 2, std::numbers::pi / 6};
        break;
    case Scenario::parity_compare:
        spec.axis1 = make_axis("omega_d", 0.7, 1.4, 701);
        spec.axis2 = Axis{"lambda", 0, 0, 0, {0.02, 0.1, 0.2}};
        spec.thetas = {std::numbers::pi / 6};
        break;
    }
    return spec;
}

SweepSpec make_spec(Scenario scenario, const ConfigFile &file)
{
    SweepSpec spec = default_spec(scenario);
    for (const auto &[key, value] : file.global) {
        apply_key(spec, key, value);
    }
    if (const auto it = file.sections.find(std::string(to_string(scenario))); it != file.sections.end()) {
        for (const auto &[key, value] : it->second) {
            apply_key(spec, key, value);
        }
    }
    spec.validate();
    return spec;
}

void SweepSpec::validate() const
{
    validate_axis(axis1, "axis1");
    if (axis2) {
        validate_axis(*axis2, "axis2");
    }
    if (scenario == Scenario::peak_map) {
        validate_axis(scan, "scan");
    }
    if (harmonics < 1) {
        throw ConfigError("harmonics", "must be >= 1");
    }
    if (levels_reported < 1) {
        throw ConfigError("levels", "must be >= 1");
    }
    for (int q : qubit_counts) {
        if (q != 1 && q != 2) {
            throw ConfigError("qubit_counts", "entries must be 1 or 2");
        }
    }
    for (const Window &w : windows) {
        if (!(w.lo < w.hi)) {
            throw ConfigError("windows", "each window needs lo < hi");
        }
    }
    SystemParams probe = base;
    for (double theta : thetas) {
        probe.theta = theta;
        probe.validate();
    }
    if (thetas.empty()) {
        base.validate();
    }

    auto expect_axis = [&](const Axis &axis, std::string_view name, const char *key) {
        if (axis.name != name) {
            throw ConfigError(key, std::string(to_string(scenario)) + " sweeps " + std::string(name));
        }
    };
    switch (scenario) {
    case Scenario::energy_spectrum:
    case Scenario::peak_map:
        expect_axis(axis1, "lambda", "axis1");
        break;
    case Scenario::radiance_vs_drive:
    case Scenario::detuning_sweep:
    case Scenario::excitation_spectrum:
    case Scenario::parity_compare:
        expect_axis(axis1, "omega_d", "axis1");
        break;
    }
    if (scenario == Scenario::detuning_sweep && axis2) {
        expect_axis(*axis2, "omega_c", "axis2");
    }
    if (scenario == Scenario::peak_map && axis2) {
        expect_axis(*axis2, "Omega", "axis2");
    }
    if (axis1.name == "omega_d" && axis1.grid().front() <= 0.0) {
        throw ConfigError("axis1_min", "drive frequencies must be positive");
    }
}

} // namespace usc
