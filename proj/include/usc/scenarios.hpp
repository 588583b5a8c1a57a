#pragma once

// Figure-level scenarios. Each run_* function evaluates its sweep and returns
// tables plus a provenance block; write_result turns them into CSV (and SVG).

#include "usc/config.hpp"
#include "usc/svg.hpp"
#include "usc/sweep.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace usc {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string name;   ///< file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

struct SweepResult {
    SweepSpec spec;
    std::vector<std::pair<std::string, std::string>> provenance;
    std::vector<Table> tables;
    std::vector<Plot> plots;
    int flagged_points = 0;              ///< failed solves or undefined witness
    double max_residual = 0.0;
    std::vector<std::string> failures;   ///< convergence checks that did not pass

    const Table &table(const std::string &name) const;
};

struct RunOptions {
    int threads = 1;
    bool use_cache = true;
    std::optional<std::filesystem::path> cache_dir;   ///< default_cache_dir(output_dir) when empty
    bool convergence_check = true;
};

SweepResult run_energy_spectrum(const SweepSpec &spec, const RunOptions &options = {});
SweepResult run_radiance_vs_drive(const SweepSpec &spec, const RunOptions &options = {});
SweepResult run_detuning_sweep(const SweepSpec &spec, const RunOptions &options = {});
SweepResult run_peak_map(const SweepSpec &spec, const RunOptions &options = {});
SweepResult run_excitation_spectrum(const SweepSpec &spec, const RunOptions &options = {});
SweepResult run_parity_compare(const SweepSpec &spec, const RunOptions &options = {});

SweepResult run_scenario(const SweepSpec &spec, const RunOptions &options = {});

/// Short CLI name: spectrum, radiance, detuning, map, excitation, parity.
std::string_view short_name(Scenario s);

/// Provenance lines, header row and rows. The "# generated:" line is the only
/// content that differs between identical runs.
void write_table(std::ostream &os, const SweepResult &result, const Table &table, bool timestamp = true);

/// Writes <dir>/<table>.csv for every table and, if `plots`, <dir>/<plot>.svg.
/// Returns the files written.
std::vector<std::filesystem::path> write_result(const SweepResult &result, const std::filesystem::path &dir,
                                                bool plots);

} // namespace usc
