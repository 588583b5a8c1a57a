// Command-line front end: one subcommand per scenario plus `validate`.
//
// Exit codes: 0 success, 1 validation or --strict failure, 2 usage/config error.

#include "usc/config.hpp"
#include "usc/errors.hpp"
#include "usc/scenarios.hpp"
#include "usc/validation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

namespace {

struct Globals {
    std::string config;
    std::string out;
    int threads = 0;
    bool plot = false;
    int nmax_override = 0;
    bool strict = false;
    bool no_cache = false;
};

int run(usc::Scenario scenario, const Globals &g)
{
    const usc::ConfigFile file = g.config.empty() ? usc::ConfigFile{} : usc::load_config(g.config);
    usc::SweepSpec spec = usc::make_spec(scenario, file);
    if (!g.out.empty()) {
        spec.output_dir = g.out;
    }
    if (g.nmax_override > 0) {
        spec.base.n_max = g.nmax_override;
    }
    spec.validate();

    usc::RunOptions options;
    options.threads = g.threads > 0 ? g.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    options.use_cache = !g.no_cache;

    const usc::SweepResult result = usc::run_scenario(spec, options);
    for (const auto &path : usc::write_result(result, spec.output_dir, g.plot)) {
        std::cout << "wrote " << path.string() << '\n';
    }
    for (const auto &[key, value] : result.provenance) {
        if (key == "convergence" || key == "max_r_crossing") {
            std::cout << key << ": " << value << '\n';
        }
    }
    std::cout << "flagged points: " << result.flagged_points << ", max residual: " << result.max_residual << '\n';
    for (const std::string &f : result.failures) {
        std::cerr << "warning: " << f << '\n';
    }
    if (g.strict && (result.flagged_points > 0 || !result.failures.empty())) {
        std::cerr << "strict mode: flagged points or failed convergence checks\n";
        return 1;
    }
    return 0;
}

int validate(const Globals &g)
{
    usc::SystemParams base;
    if (!g.config.empty()) {
        base = usc::make_spec(usc::Scenario::radiance_vs_drive, usc::load_config(g.config)).base;
    }
    if (g.nmax_override > 0) {
        base.n_max = g.nmax_override;
    }
    base.validate();
    const auto checks = usc::run_validation(base, std::max(1, g.threads));
    bool ok = true;
    for (const auto &c : checks) {
        std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Driven two-qubit radiance in the ultrastrong coupling regime"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "Configuration file (key = value, [scenario] sections)");
    app.add_option("--out", g.out, "Output directory (overrides output_dir)");
    app.add_option("--threads", g.threads, "Worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);
    app.add_flag("--plot", g.plot, "Also write SVG plots");
    app.add_option("--nmax-override", g.nmax_override, "Photon truncation to use instead of n_max")
        ->check(CLI::PositiveNumber);
    app.add_flag("--strict", g.strict, "Exit 1 on any flagged point or failed convergence check");
    app.add_flag("--no-cache", g.no_cache, "Do not read or write the steady-state cache");

    const std::pair<const char *, usc::Scenario> commands[] = {
        {"spectrum", usc::Scenario::energy_spectrum},       {"radiance", usc::Scenario::radiance_vs_drive},
        {"detuning", usc::Scenario::detuning_sweep},        {"map", usc::Scenario::peak_map},
        {"excitation", usc::Scenario::excitation_spectrum}, {"parity", usc::Scenario::parity_compare},
    };
    const char *help[] = {"Dressed energies versus lambda", "R versus drive frequency",
                          "R versus drive frequency for several cavity detunings", "Peak values of R over lambda (and Omega)",
                          "<X-X+> versus drive frequency", "R with and without the sigma_z coupling"};
    std::vector<std::pair<CLI::App *, usc::Scenario>> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        subs.emplace_back(app.add_subcommand(commands[i].first, help[i])->fallthrough(), commands[i].second);
    }
    CLI::App *val = app.add_subcommand("validate", "Run the invariant suite")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        if (val->parsed()) {
            return validate(g);
        }
        for (const auto &[sub, scenario] : subs) {
            if (sub->parsed()) {
                return run(scenario, g);
            }
        }
    } catch (const usc::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
