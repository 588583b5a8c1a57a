#pragma once

// Sweep plumbing shared by the scenarios: per-system solvers that are set up
// once and reused across drive frequencies, an on-disk steady-state cache,
// and the one-/two-qubit radiance evaluator.

#include "usc/observables.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace usc {

inline constexpr const char *kCodeVersion = "usc_radiance 1.0.0";

/// Result of one steady-state solve, reduced to <X^- X^+>.
struct FluxSample {
    double value = 0.0;
    double residual = 0.0;
    int harmonics = 0;
    bool ok = true;
    bool cached = false;
    std::string error;
};

/// Cached steady-state fluxes for one parameter set (omega_d excluded). The
/// key hashes every SystemParams field, the harmonic settings, the solver
/// tolerances and kCodeVersion. Safe for concurrent lookup/insert.
class SteadyStateCache {
public:
    SteadyStateCache(std::filesystem::path dir, const SystemParams &p, int harmonics);

    std::optional<FluxSample> lookup(double omega_d) const;
    void insert(double omega_d, const FluxSample &s);
    const std::string &key() const noexcept { return key_; }
    std::filesystem::path file() const { return dir_ / (key_ + ".txt"); }

private:
    std::filesystem::path dir_;
    std::string key_;
    mutable std::mutex mutex_;
    std::map<double, FluxSample> entries_;
};

/// Hex key identifying (params without omega_d, harmonics, tolerances, version).
std::string cache_key(const SystemParams &p, int harmonics);

/// Cache directory: $USC_RADIANCE_CACHE_DIR if set, else <output_dir>/.cache.
std::filesystem::path default_cache_dir(const std::filesystem::path &output_dir);

struct EvalOptions {
    int harmonics = kDefaultHarmonics;
    bool escalate = true;
    int threads = 1;
    std::optional<std::filesystem::path> cache_dir;   ///< no cache when empty
    /// Recompute the first cache hit of every curve and require bitwise equality.
    bool spot_check = true;
};

/// Dressed basis, Liouvillian and Floquet solver for one parameter set.
class SystemSolver {
public:
    SystemSolver(const SystemParams &p, EvalOptions options);

    FluxSample flux(double omega_d) const;
    /// Solves without consulting the cache.
    FluxSample compute(double omega_d) const;
    std::vector<FluxSample> curve(const std::vector<double> &grid) const;

    const DressedBasis &basis() const noexcept { return basis_; }
    const SystemParams &params() const noexcept { return params_; }
    const LiouvillianSet &liouvillian() const noexcept { return liouvillian_; }
    const EvalOptions &options() const noexcept { return options_; }
    /// Number of cache hits that were recomputed and matched bitwise.
    int spot_checks() const noexcept { return spot_checks_; }

private:
    SystemParams params_;
    EvalOptions options_;
    DressedBasis basis_;
    LiouvillianSet liouvillian_;
    FloquetSolver solver_;
    Matrix emission_;
    std::unique_ptr<SteadyStateCache> cache_;
    mutable std::mutex check_mutex_;
    mutable int spot_checks_ = 0;
};

struct RadianceSample {
    RadiancePoint point;
    double residual = 0.0;   ///< max over the two solves
    bool ok = true;
    std::string error;
};

struct PeakEstimate {
    double omega_d = 0.0;
    double r = 0.0;
};

/// One-qubit and two-qubit systems sharing every other parameter.
class RadianceEvaluator {
public:
    RadianceEvaluator(const SystemParams &base, EvalOptions options);

    RadianceSample point(double omega_d) const;
    std::vector<RadianceSample> curve(const std::vector<double> &grid) const;

    /// Largest R within [center - half_width, center + half_width]: a 21-point
    /// scan followed by golden-section refinement around the best sample.
    PeakEstimate max_near(double center, double half_width = 0.01, double x_tol = 1e-6) const;
    /// Same for the smallest R.
    PeakEstimate min_near(double center, double half_width = 0.01, double x_tol = 1e-6) const;

    const SystemSolver &one() const noexcept { return *one_; }
    const SystemSolver &two() const noexcept { return *two_; }
    /// E1 - E0 and E3 - E0 of the two-qubit system.
    double gap(int level) const;
    double one_qubit_gap(int level) const;

private:
    PeakEstimate extremum_near(double center, double half_width, double x_tol, double sign) const;

    std::unique_ptr<SystemSolver> one_;
    std::unique_ptr<SystemSolver> two_;
};

/// Reruns `grid` (subsampled to `samples` points) with n_max + 4 and reports
/// the largest absolute change of R among points defined in both runs.
struct ConvergenceCheck {
    int points = 0;
    int n_max = 0;
    double max_delta = 0.0;
    bool passed = true;
};

inline constexpr double kConvergenceTol = 1e-4;

ConvergenceCheck check_truncation(const SystemParams &base, const EvalOptions &options,
                                  const std::vector<double> &grid, const std::vector<RadianceSample> &reference,
                                  int samples = 5);

/// Same check at explicit drive frequencies against reference R values.
ConvergenceCheck check_truncation_at(const SystemParams &base, const EvalOptions &options,
                                     const std::vector<double> &omegas, const std::vector<double> &reference_r);

/// Evenly spread indices into a vector of length n, at least min(count, n) of them.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t count);

} // namespace usc
