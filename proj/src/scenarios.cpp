#include "usc/scenarios.hpp"

#include "usc/csv.hpp"
#include "usc/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace usc {

void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size()) {
        throw std::logic_error("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected "
                               + std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

const Table &SweepResult::table(const std::string &name) const
{
    for (const Table &t : tables) {
        if (t.name == name) return t;
    }
    throw std::out_of_range("no table named " + name);
}

std::string_view short_name(Scenario s)
{
    switch (s) {
    case Scenario::energy_spectrum: return "spectrum";
    case Scenario::radiance_vs_drive: return "radiance";
    case Scenario::detuning_sweep: return "detuning";
    case Scenario::peak_map: return "map";
    case Scenario::excitation_spectrum: return "excitation";
    case Scenario::parity_compare: return "parity";
    }
    return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v)
{
    return format_double(v);
}

std::string theta_label(double theta)
{
    for (int d : {2, 3, 4, 6, 8, 12}) {
        if (std::abs(theta - std::numbers::pi / d) < 1e-12) {
            return "pi/" + std::to_string(d);
        }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", theta);
    return buf;
}

std::string short_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void add_param_provenance(SweepResult &r, const SystemParams &p)
{
    auto &pv = r.provenance;
    pv.emplace_back("omega_c", num(p.omega_c));
    pv.emplace_back("omega_sigma", num(p.omega_sigma));
    pv.emplace_back("lambda", num(p.lambda));
    pv.emplace_back("theta", num(p.theta));
    pv.emplace_back("Omega", num(p.Omega));
    pv.emplace_back("omega_d", num(p.omega_d));
    pv.emplace_back("kappa", num(p.kappa));
    pv.emplace_back("gamma_sigma", num(p.gamma_sigma));
    pv.emplace_back("n_max", std::to_string(p.n_max));
    pv.emplace_back("level_cut", p.level_cut && *p.level_cut == kAllLevels ? "all" : std::to_string(p.levels()));
    pv.emplace_back("drop_sigma_z_coupling", p.drop_sigma_z_coupling ? "true" : "false");
}

std::string axis_text(const Axis &a)
{
    if (!a.values.empty()) {
        std::string s = a.name + " in {";
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            s += (i ? ", " : "") + num(a.values[i]);
        }
        return s + "}";
    }
    return a.name + " in [" + num(a.min) + ", " + num(a.max) + "], " + std::to_string(a.points) + " points";
}

SweepResult start(const SweepSpec &spec)
{
    SweepResult r;
    r.spec = spec;
    r.provenance.emplace_back("code_version", kCodeVersion);
    r.provenance.emplace_back("scenario", std::string(to_string(spec.scenario)));
    add_param_provenance(r, spec.base);
    r.provenance.emplace_back("axis1", axis_text(spec.axis1));
    if (spec.axis2) {
        r.provenance.emplace_back("axis2", axis_text(*spec.axis2));
    }
    std::string thetas;
    for (double t : spec.thetas) {
        thetas += (thetas.empty() ? "" : ", ") + num(t);
    }
    r.provenance.emplace_back("thetas", thetas);
    r.provenance.emplace_back("floquet_residual_tol", num(kFloquetResidualTol));
    r.provenance.emplace_back("harmonics", std::to_string(spec.harmonics) + " (escalated to 8 until <X-X+> moves <= 1e-8 relative)");
    r.provenance.emplace_back("flux_floor", num(kFluxFloor));
    r.provenance.emplace_back("class_tol", num(kClassTol));
    return r;
}

EvalOptions eval_options(const SweepSpec &spec, const RunOptions &options)
{
    EvalOptions e;
    e.harmonics = spec.harmonics;
    e.threads = options.threads;
    if (options.use_cache) {
        e.cache_dir = options.cache_dir ? *options.cache_dir : default_cache_dir(spec.output_dir);
    }
    return e;
}

std::vector<double> values_or(const std::optional<Axis> &axis, std::string_view name, double fallback)
{
    if (axis && axis->name == name) {
        return axis->grid();
    }
    return {fallback};
}

std::string status_of(const RadianceSample &s)
{
    if (!s.ok) return "failed";
    if (std::isnan(s.point.r)) return "undefined";
    return "ok";
}

void account(SweepResult &r, const RadianceSample &s, const std::string &where)
{
    if (!s.ok || std::isnan(s.point.r)) {
        ++r.flagged_points;
        if (!s.ok) {
            r.provenance.emplace_back("failed", where + " omega_d=" + num(s.point.omega_d) + ": " + s.error);
        }
        return;
    }
    r.max_residual = std::max(r.max_residual, s.residual);
}

void record_check(SweepResult &r, const ConvergenceCheck &c, const std::string &where)
{
    std::ostringstream s;
    s << where << ": n_max " << c.n_max << ", " << c.points << " points, max |dR| = " << num(c.max_delta) << ", "
      << (c.passed ? "pass" : "FAIL");
    r.provenance.emplace_back("convergence", s.str());
    if (!c.passed) {
        r.failures.push_back("truncation check failed for " + where);
    }
}

/// Extrema of a curve after dropping NaN samples.
PeakList finite_extrema(const std::vector<double> &xs, const std::vector<double> &ys)
{
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isfinite(ys[i])) {
            fx.push_back(xs[i]);
            fy.push_back(ys[i]);
        }
    }
    if (fx.size() < 3) {
        return {};
    }
    return find_extrema(fx, fy, default_prominence_floor(fy));
}

std::string class_text(const RadiancePoint &pt)
{
    return pt.cls ? std::string(to_string(*pt.cls)) : std::string("undefined");
}

Table radiance_table(std::string name, bool with_omega_c)
{
    Table t;
    t.name = std::move(name);
    t.columns = {"theta", "lambda"};
    if (with_omega_c) t.columns.push_back("omega_c");
    for (const char *c : {"omega_d", "n1", "n2", "R", "class", "residual", "status"}) {
        t.columns.push_back(c);
    }
    return t;
}

Table extrema_table(std::string name, bool with_omega_c)
{
    Table t;
    t.name = std::move(name);
    t.columns = {"theta", "lambda"};
    if (with_omega_c) t.columns.push_back("omega_c");
    for (const char *c : {"kind", "omega_d", "R", "prominence", "class"}) {
        t.columns.push_back(c);
    }
    return t;
}

struct CurveRun {
    std::vector<double> grid;
    std::vector<RadianceSample> samples;
    std::vector<double> r;
    PeakList extrema;
};

CurveRun radiance_curve(SweepResult &result, const SystemParams &p, const EvalOptions &eval,
                        const std::vector<double> &grid, bool check, const std::string &where)
{
    CurveRun c;
    c.grid = grid;
    const RadianceEvaluator evaluator(p, eval);
    c.samples = evaluator.curve(grid);
    for (const RadianceSample &s : c.samples) {
        account(result, s, where);
        c.r.push_back(s.point.r);
    }
    c.extrema = finite_extrema(grid, c.r);
    if (check) {
        record_check(result, check_truncation(p, eval, grid, c.samples), where);
    }
    return c;
}

void emit_curve(Table &rows, Table &extrema, const CurveRun &c, const SystemParams &p, bool with_omega_c)
{
    for (const RadianceSample &s : c.samples) {
        std::vector<Cell> row{p.theta, p.lambda};
        if (with_omega_c) row.emplace_back(p.omega_c);
        for (Cell v : std::vector<Cell>{s.point.omega_d, s.point.n1, s.point.n2, s.point.r, class_text(s.point),
                                        s.residual, status_of(s)}) {
            row.push_back(std::move(v));
        }
        rows.add(std::move(row));
    }
    for (const Extremum &e : c.extrema) {
        std::vector<Cell> row{p.theta, p.lambda};
        if (with_omega_c) row.emplace_back(p.omega_c);
        row.emplace_back(std::string(e.kind == ExtremumKind::peak ? "peak" : "deep"));
        row.emplace_back(e.x);
        row.emplace_back(e.value);
        row.emplace_back(e.prominence);
        row.emplace_back(std::string(to_string(classify(e.value))));
        extrema.add(std::move(row));
    }
}

Series series_of(std::string label, const std::vector<double> &x, const std::vector<double> &y)
{
    return Series{std::move(label), x, y};
}

} // namespace

SweepResult run_energy_spectrum(const SweepSpec &spec, const RunOptions &)
{
    SweepResult result = start(spec);
    result.provenance.emplace_back("levels_reported", std::to_string(spec.levels_reported));
    Table t{"spectrum", {"theta", "n_qubits", "lambda", "level", "energy"}, {}};
    const std::vector<double> grid = spec.axis1.grid();
    for (double theta : spec.thetas) {
        for (int nq : spec.qubit_counts) {
            SystemParams p = spec.base;
            p.theta = theta;
            p.n_qubits = nq;
            const int levels = static_cast<int>(std::min<Eigen::Index>(spec.levels_reported, p.hilbert_dim()));
            Plot plot{"spectrum_q" + std::to_string(nq) + "_" + std::to_string(result.plots.size()),
                      "Dressed energies, " + std::to_string(nq) + " qubit(s), theta = " + theta_label(theta),
                      "lambda", "E_n", {}};
            std::vector<std::vector<double>> curves(static_cast<std::size_t>(levels));
            for (double lambda : grid) {
                p.lambda = lambda;
                const EigenDecomposition eig = eig_hermitian(build_h0(p));
                for (int n = 0; n < levels; ++n) {
                    t.add({theta, static_cast<long long>(nq), lambda, static_cast<long long>(n), eig.values(n)});
                    curves[static_cast<std::size_t>(n)].push_back(eig.values(n));
                }
            }
            for (int n = 0; n < levels; ++n) {
                plot.series.push_back(series_of("E" + std::to_string(n), grid, curves[static_cast<std::size_t>(n)]));
            }
            result.plots.push_back(std::move(plot));
        }
    }
    if (!result.plots.empty()) {
        result.plots.front().name = "spectrum";
    }
    result.tables.push_back(std::move(t));
    return result;
}

SweepResult run_radiance_vs_drive(const SweepSpec &spec, const RunOptions &options)
{
    SweepResult result = start(spec);
    const EvalOptions eval = eval_options(spec, options);
    const std::vector<double> grid = spec.axis1.grid();
    const std::string second = spec.axis2 ? spec.axis2->name : "lambda";
    const std::vector<double> outer = spec.axis2 ? spec.axis2->grid() : std::vector<double>{spec.base.lambda};

    Table rows = radiance_table("radiance", false);
    Table extrema = extrema_table("radiance_extrema", false);
    if (second != "lambda") {
        // Keep the second axis visible in the rows when it is not lambda.
        rows.columns.insert(rows.columns.begin() + 2, second);
        extrema.columns.insert(extrema.columns.begin() + 2, second);
    }
    for (double theta : spec.thetas) {
        Plot plot{"radiance" + (result.plots.empty() ? std::string() : "_" + std::to_string(result.plots.size())),
                  "Radiance witness, theta = " + theta_label(theta), "omega_d", "R", {}};
        for (double v : outer) {
            SystemParams p = spec.base;
            p.theta = theta;
            set_param(p, second, v);
            const std::string where = "theta=" + theta_label(theta) + " " + second + "=" + short_num(v);
            const CurveRun c = radiance_curve(result, p, eval, grid, options.convergence_check, where);
            Table r2 = radiance_table("", false), e2 = extrema_table("", false);
            emit_curve(r2, e2, c, p, false);
            for (auto &row : r2.rows) {
                if (second != "lambda") row.insert(row.begin() + 2, v);
                rows.rows.push_back(std::move(row));
            }
            for (auto &row : e2.rows) {
                if (second != "lambda") row.insert(row.begin() + 2, v);
                extrema.rows.push_back(std::move(row));
            }
            plot.series.push_back(series_of(second + " = " + short_num(v), grid, c.r));
        }
        result.plots.push_back(std::move(plot));
    }
    result.tables.push_back(std::move(rows));
    result.tables.push_back(std::move(extrema));
    return result;
}

SweepResult run_detuning_sweep(const SweepSpec &spec, const RunOptions &options)
{
    SweepResult result = start(spec);
    const EvalOptions eval = eval_options(spec, options);
    const std::vector<double> grid = spec.axis1.grid();
    const std::vector<double> omega_cs = values_or(spec.axis2, "omega_c", spec.base.omega_c);

    Table rows = radiance_table("detuning", true);
    Table extrema = extrema_table("detuning_extrema", true);
    Table windows{"detuning_windows",
                  {"theta", "lambda", "omega_c", "detuning", "window_lo", "window_hi", "points", "subradiance",
                   "uncorrelated", "superradiance", "hyperradiance", "undefined"},
                  {}};
    for (const Window &w : spec.windows) {
        result.provenance.emplace_back("window", "(" + num(w.lo) + ", " + num(w.hi) + ")");
    }
    for (double theta : spec.thetas) {
        Plot plot{"detuning" + (result.plots.empty() ? std::string() : "_" + std::to_string(result.plots.size())),
                  "Radiance witness vs detuning, theta = " + theta_label(theta), "omega_d", "R", {}};
        for (double wc : omega_cs) {
            SystemParams p = spec.base;
            p.theta = theta;
            p.omega_c = wc;
            const std::string where = "theta=" + theta_label(theta) + " omega_c=" + short_num(wc);
            const CurveRun c = radiance_curve(result, p, eval, grid, options.convergence_check, where);
            emit_curve(rows, extrema, c, p, true);
            plot.series.push_back(series_of("Delta = " + short_num(wc - p.omega_sigma), grid, c.r));

            for (const Window &w : spec.windows) {
                long long counts[5] = {0, 0, 0, 0, 0};
                long long points = 0;
                for (const RadianceSample &s : c.samples) {
                    if (s.point.omega_d < w.lo || s.point.omega_d > w.hi) continue;
                    ++points;
                    if (s.point.cls) {
                        ++counts[static_cast<int>(*s.point.cls)];
                    } else {
                        ++counts[4];
                    }
                }
                windows.add({theta, p.lambda, wc, wc - p.omega_sigma, w.lo, w.hi, points, counts[0], counts[1],
                             counts[2], counts[3], counts[4]});
            }
        }
        result.plots.push_back(std::move(plot));
    }
    result.tables.push_back(std::move(rows));
    result.tables.push_back(std::move(extrema));
    result.tables.push_back(std::move(windows));
    return result;
}

SweepResult run_peak_map(const SweepSpec &spec, const RunOptions &options)
{
    SweepResult result = start(spec);
    result.provenance.emplace_back("scan", axis_text(spec.scan));
    result.provenance.emplace_back("peak_search",
                                   "LP/RP: max R within +-0.01 of E1-E0 / E3-E0 (2 qubits), golden-section to 1e-6");
    result.provenance.emplace_back("omega_inset_lambda",
                                   "Omega sweeps at fixed lambda default to 0.1 (theta = pi/2) and 0.2 (theta comparison)");
    const EvalOptions eval = eval_options(spec, options);
    const std::vector<double> lambdas = spec.axis1.grid();
    const std::vector<double> omegas = values_or(spec.axis2, "Omega", spec.base.Omega);
    const std::vector<double> scan = spec.scan.grid();

    Table t{"map", {"theta", "lambda", "Omega", "lp", "rp", "r_max", "omega_at_max", "lp_omega", "rp_omega"}, {}};
    for (double theta : spec.thetas) {
        for (double big_omega : omegas) {
            std::vector<double> lp_curve, rp_curve, max_curve;
            std::vector<double> check_lambdas;
            const std::vector<std::size_t> checked = subsample_indices(lambdas.size(), 5);
            for (std::size_t li = 0; li < lambdas.size(); ++li) {
                SystemParams p = spec.base;
                p.theta = theta;
                p.lambda = lambdas[li];
                p.Omega = big_omega;
                const std::string where = "theta=" + theta_label(theta) + " lambda=" + short_num(p.lambda)
                                          + " Omega=" + short_num(big_omega);
                const RadianceEvaluator ev(p, eval);
                PeakEstimate lp{kNaN, kNaN}, rp{kNaN, kNaN};
                try {
                    lp = ev.max_near(ev.gap(1));
                    rp = ev.max_near(ev.gap(3));
                } catch (const SolverError &e) {
                    ++result.flagged_points;
                    result.provenance.emplace_back("failed", where + ": " + e.what());
                }
                PeakEstimate best = lp.r >= rp.r ? lp : rp;
                if (std::isnan(best.r)) best = std::isnan(lp.r) ? rp : lp;
                for (const RadianceSample &s : ev.curve(scan)) {
                    account(result, s, where);
                    if (std::isfinite(s.point.r) && !(s.point.r <= best.r)) {
                        best = {s.point.omega_d, s.point.r};
                    }
                }
                t.add({theta, p.lambda, big_omega, lp.r, rp.r, best.r, best.omega_d, lp.omega_d, rp.omega_d});
                lp_curve.push_back(lp.r);
                rp_curve.push_back(rp.r);
                max_curve.push_back(best.r);
                if (options.convergence_check && std::find(checked.begin(), checked.end(), li) != checked.end()) {
                    record_check(result,
                                 check_truncation_at(p, eval, {lp.omega_d, rp.omega_d}, {lp.r, rp.r}), where);
                }
            }
            Plot plot{"map" + (result.plots.empty() ? std::string() : "_" + std::to_string(result.plots.size())),
                      "Peak values, theta = " + theta_label(theta) + ", Omega = " + short_num(big_omega), "lambda",
                      "R", {}};
            plot.series.push_back(series_of("LP", lambdas, lp_curve));
            plot.series.push_back(series_of("RP", lambdas, rp_curve));
            plot.series.push_back(series_of("max R", lambdas, max_curve));
            result.plots.push_back(std::move(plot));
        }
    }

    // Crossing of max R between the first two angles, reported only.
    if (spec.thetas.size() >= 2 && omegas.size() == 1 && lambdas.size() >= 2) {
        std::vector<double> diff;
        for (std::size_t li = 0; li < lambdas.size(); ++li) {
            const double a = std::get<double>(t.rows[li][5]);
            const double b = std::get<double>(t.rows[lambdas.size() + li][5]);
            diff.push_back(b - a);
        }
        for (std::size_t li = 0; li + 1 < diff.size(); ++li) {
            if (std::isfinite(diff[li]) && std::isfinite(diff[li + 1]) && (diff[li] < 0) != (diff[li + 1] < 0)) {
                const double x = lambdas[li] - diff[li] * (lambdas[li + 1] - lambdas[li]) / (diff[li + 1] - diff[li]);
                result.provenance.emplace_back("max_r_crossing",
                                               "theta " + theta_label(spec.thetas[1]) + " vs " + theta_label(spec.thetas[0])
                                                   + " at lambda ~ " + short_num(x));
            }
        }
    }
    result.tables.push_back(std::move(t));
    return result;
}

SweepResult run_excitation_spectrum(const SweepSpec &spec, const RunOptions &options)
{
    SweepResult result = start(spec);
    const EvalOptions eval = eval_options(spec, options);
    const std::vector<double> grid = spec.axis1.grid();
    const std::vector<double> lambdas = values_or(spec.axis2, "lambda", spec.base.lambda);

    Table rows{"excitation", {"theta", "n_qubits", "lambda", "omega_d", "flux", "residual", "status"}, {}};
    Table peaks{"excitation_peaks", {"theta", "n_qubits", "lambda", "peak_omega", "peak_value", "prominence"}, {}};
    for (double theta : spec.thetas) {
        for (int nq : spec.qubit_counts) {
            Plot plot{"excitation" + (result.plots.empty() ? std::string() : "_" + std::to_string(result.plots.size())),
                      "<X-X+>, " + std::to_string(nq) + " qubit(s), theta = " + theta_label(theta), "omega_d",
                      "<X-X+>", {}};
            for (double lambda : lambdas) {
                SystemParams p = spec.base;
                p.theta = theta;
                p.n_qubits = nq;
                p.lambda = lambda;
                const SystemSolver solver(p, eval);
                const std::vector<FluxSample> flux = solver.curve(grid);
                std::vector<double> ys;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    const FluxSample &s = flux[i];
                    if (!s.ok) {
                        ++result.flagged_points;
                        result.provenance.emplace_back("failed", "theta=" + theta_label(theta) + " n_qubits="
                                                                     + std::to_string(nq) + " lambda=" + short_num(lambda)
                                                                     + " omega_d=" + num(grid[i]) + ": " + s.error);
                    } else {
                        result.max_residual = std::max(result.max_residual, s.residual);
                    }
                    rows.add({theta, static_cast<long long>(nq), lambda, grid[i], s.value, s.residual,
                              std::string(s.ok ? "ok" : "failed")});
                    ys.push_back(s.value);
                }
                for (const Extremum &e : finite_extrema(grid, ys)) {
                    if (e.kind == ExtremumKind::peak) {
                        peaks.add({theta, static_cast<long long>(nq), lambda, e.x, e.value, e.prominence});
                    }
                }
                plot.series.push_back(series_of("lambda = " + short_num(lambda), grid, ys));
            }
            result.plots.push_back(std::move(plot));
        }
    }
    result.tables.push_back(std::move(rows));
    result.tables.push_back(std::move(peaks));
    return result;
}

SweepResult run_parity_compare(const SweepSpec &spec, const RunOptions &options)
{
    SweepResult result = start(spec);
    result.provenance.emplace_back("rel_diff", "|R_dropped - R_full| / max(|R_full|, 1)");
    const EvalOptions eval = eval_options(spec, options);
    const std::vector<double> grid = spec.axis1.grid();
    const std::vector<double> lambdas = values_or(spec.axis2, "lambda", spec.base.lambda);

    Table rows{"parity",
               {"theta", "lambda", "omega_d", "r_full", "r_dropped", "abs_diff", "rel_diff", "n1_full", "n2_full",
                "n1_dropped", "n2_dropped", "status"},
               {}};
    Table summary{"parity_summary", {"theta", "lambda", "max_abs_diff", "max_rel_diff", "omega_at_max_rel"}, {}};
    for (double theta : spec.thetas) {
        for (double lambda : lambdas) {
            SystemParams full = spec.base;
            full.theta = theta;
            full.lambda = lambda;
            full.drop_sigma_z_coupling = false;
            SystemParams dropped = full;
            dropped.drop_sigma_z_coupling = true;
            const std::string where = "theta=" + theta_label(theta) + " lambda=" + short_num(lambda);
            const CurveRun a = radiance_curve(result, full, eval, grid, options.convergence_check, where + " full");
            const CurveRun b =
                radiance_curve(result, dropped, eval, grid, options.convergence_check, where + " dropped");
            double max_abs = 0.0, max_rel = 0.0, at = kNaN;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const RadianceSample &x = a.samples[i];
                const RadianceSample &y = b.samples[i];
                const double diff = std::abs(y.point.r - x.point.r);
                const double rel = diff / std::max(std::abs(x.point.r), 1.0);
                const bool ok = x.ok && y.ok && std::isfinite(diff);
                if (ok) {
                    max_abs = std::max(max_abs, diff);
                    if (rel > max_rel) {
                        max_rel = rel;
                        at = grid[i];
                    }
                }
                rows.add({theta, lambda, grid[i], x.point.r, y.point.r, diff, rel, x.point.n1, x.point.n2, y.point.n1,
                          y.point.n2, std::string(ok ? "ok" : "flagged")});
            }
            summary.add({theta, lambda, max_abs, max_rel, at});
            Plot plot{"parity" + (result.plots.empty() ? std::string() : "_" + std::to_string(result.plots.size())),
                      "Full vs dropped sigma_z coupling, theta = " + theta_label(theta) + ", lambda = "
                          + short_num(lambda),
                      "omega_d", "R", {}};
            plot.series.push_back(series_of("full", grid, a.r));
            plot.series.push_back(series_of("dropped", grid, b.r));
            result.plots.push_back(std::move(plot));
        }
    }
    result.tables.push_back(std::move(rows));
    result.tables.push_back(std::move(summary));
    return result;
}

SweepResult run_scenario(const SweepSpec &spec, const RunOptions &options)
{
    spec.validate();
    switch (spec.scenario) {
    case Scenario::energy_spectrum: return run_energy_spectrum(spec, options);
    case Scenario::radiance_vs_drive: return run_radiance_vs_drive(spec, options);
    case Scenario::detuning_sweep: return run_detuning_sweep(spec, options);
    case Scenario::peak_map: return run_peak_map(spec, options);
    case Scenario::excitation_spectrum: return run_excitation_spectrum(spec, options);
    case Scenario::parity_compare: return run_parity_compare(spec, options);
    }
    throw std::logic_error("unknown scenario");
}

void write_table(std::ostream &os, const SweepResult &result, const Table &table, bool timestamp)
{
    if (timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        CsvWriter::comment(os, std::string("generated: ") + buf);
    }
    for (const auto &[key, value] : result.provenance) {
        CsvWriter::comment(os, key + ": " + value);
    }
    CsvWriter::comment(os, "max_residual: " + num(result.max_residual));
    CsvWriter::comment(os, "flagged_points: " + std::to_string(result.flagged_points));
    CsvWriter w(os, table.columns);
    for (const auto &row : table.rows) {
        for (const Cell &c : row) {
            std::visit([&](const auto &v) { w.cell(v); }, c);
        }
        w.end_row();
    }
}

std::vector<std::filesystem::path> write_result(const SweepResult &result, const std::filesystem::path &dir,
                                                bool plots)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const Table &t : result.tables) {
        const auto path = dir / (t.name + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        write_table(out, result, t);
        written.push_back(path);
    }
    if (plots) {
        for (const Plot &p : result.plots) {
            const auto path = dir / (p.name + ".svg");
            std::ofstream out(path, std::ios::binary);
            if (!out) {
                throw std::runtime_error("cannot write " + path.string());
            }
            write_svg(out, p);
            written.push_back(path);
        }
    }
    return written;
}

} // namespace usc
