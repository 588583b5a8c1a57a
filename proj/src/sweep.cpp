#include "usc/sweep.hpp"

#include "usc/errors.hpp"
#include "usc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace usc {

namespace {

std::string hexfloat(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

} // namespace

std::string cache_key(const SystemParams &p, int harmonics)
{
    std::ostringstream s;
    s << kCodeVersion << '|' << hexfloat(p.omega_c) << '|' << hexfloat(p.omega_sigma) << '|' << hexfloat(p.lambda)
      << '|' << hexfloat(p.theta) << '|' << p.n_qubits << '|' << hexfloat(p.Omega) << '|' << hexfloat(p.kappa)
      << '|' << hexfloat(p.gamma_sigma) << '|' << p.n_max << '|' << p.levels() << '|' << p.drop_sigma_z_coupling
      << "|K=" << harmonics << "|res=" << hexfloat(kFloquetResidualTol) << "|esc=" << hexfloat(1e-8)
      << "|deg=" << hexfloat(kDefaultDegeneracyTol);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s.str())));
    return buf;
}

std::filesystem::path default_cache_dir(const std::filesystem::path &output_dir)
{
    if (const char *env = std::getenv("USC_RADIANCE_CACHE_DIR"); env && *env) {
        return env;
    }
    return output_dir / ".cache";
}

SteadyStateCache::SteadyStateCache(std::filesystem::path dir, const SystemParams &p, int harmonics)
    : dir_(std::move(dir)), key_(cache_key(p, harmonics))
{
    std::ifstream in(file());
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string w, v, r;
        int k = 0;
        if (!(fields >> w >> v >> r >> k)) {
            continue;   // a torn trailing line from an interrupted run
        }
        FluxSample s;
        s.value = std::strtod(v.c_str(), nullptr);
        s.residual = std::strtod(r.c_str(), nullptr);
        s.harmonics = k;
        s.cached = true;
        entries_[std::strtod(w.c_str(), nullptr)] = s;
    }
}

std::optional<FluxSample> SteadyStateCache::lookup(double omega_d) const
{
    std::lock_guard lock(mutex_);
    if (const auto it = entries_.find(omega_d); it != entries_.end()) {
        return it->second;
    }
    return std::nullopt;
}

void SteadyStateCache::insert(double omega_d, const FluxSample &s)
{
    if (!s.ok) {
        return;
    }
    std::lock_guard lock(mutex_);
    if (!entries_.emplace(omega_d, FluxSample{s.value, s.residual, s.harmonics, true, true, {}}).second) {
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::ofstream out(file(), std::ios::app);
    if (out) {
        out << hexfloat(omega_d) << ' ' << hexfloat(s.value) << ' ' << hexfloat(s.residual) << ' ' << s.harmonics
            << '\n';
    }
}

SystemSolver::SystemSolver(const SystemParams &p, EvalOptions options)
    : params_(p),
      options_(std::move(options)),
      basis_(diagonalize(p)),
      liouvillian_(build_liouvillian(basis_, p)),
      solver_(liouvillian_),
      emission_(emission_operator(basis_))
{
    if (options_.cache_dir) {
        cache_ = std::make_unique<SteadyStateCache>(*options_.cache_dir, p, options_.harmonics);
    }
}

FluxSample SystemSolver::compute(double omega_d) const
{
    FluxSample out;
    try {
        const FloquetSteadyState s =
            options_.escalate ? solver_.solve_converged(omega_d, params_.Omega, options_.harmonics, emission_)
                              : solver_.solve(omega_d, params_.Omega, options_.harmonics);
        out.value = photon_flux(s.average(), basis_, params_.kappa).mean;
        out.residual = s.residual;
        out.harmonics = s.K;
    } catch (const SolverError &e) {
        out.ok = false;
        out.value = std::numeric_limits<double>::quiet_NaN();
        out.residual = std::numeric_limits<double>::quiet_NaN();
        out.error = e.what();
    }
    return out;
}

FluxSample SystemSolver::flux(double omega_d) const
{
    if (cache_) {
        if (auto hit = cache_->lookup(omega_d)) {
            bool check = false;
            if (options_.spot_check) {
                std::lock_guard lock(check_mutex_);
                check = spot_checks_ == 0;
                if (check) ++spot_checks_;
            }
            if (check) {
                const FluxSample fresh = compute(omega_d);
                if (!fresh.ok || !same_bits(fresh.value, hit->value) || !same_bits(fresh.residual, hit->residual)) {
                    throw SolverError("steady-state cache " + cache_->key()
                                      + " disagrees with a fresh solve; delete " + cache_->file().string());
                }
            }
            return *hit;
        }
    }
    FluxSample s = compute(omega_d);
    if (cache_) {
        cache_->insert(omega_d, s);
    }
    return s;
}

std::vector<FluxSample> SystemSolver::curve(const std::vector<double> &grid) const
{
    std::vector<FluxSample> out(grid.size());
    parallel_for(grid.size(), options_.threads, [&](std::size_t i) { out[i] = flux(grid[i]); });
    return out;
}

namespace {

RadianceSample combine(double omega_d, const FluxSample &one, const FluxSample &two)
{
    RadianceSample s;
    s.ok = one.ok && two.ok;
    s.residual = std::max(one.residual, two.residual);
    if (!s.ok) {
        s.error = !one.ok ? one.error : two.error;
        s.point = RadiancePoint{omega_d, one.value, two.value, std::numeric_limits<double>::quiet_NaN(), std::nullopt};
        return s;
    }
    s.point = make_radiance_point(omega_d, one.value, two.value);
    return s;
}

SystemParams with_qubits(SystemParams p, int n)
{
    p.n_qubits = n;
    return p;
}

} // namespace

RadianceEvaluator::RadianceEvaluator(const SystemParams &base, EvalOptions options)
    : one_(std::make_unique<SystemSolver>(with_qubits(base, 1), options)),
      two_(std::make_unique<SystemSolver>(with_qubits(base, 2), options))
{
}

RadianceSample RadianceEvaluator::point(double omega_d) const
{
    return combine(omega_d, one_->flux(omega_d), two_->flux(omega_d));
}

std::vector<RadianceSample> RadianceEvaluator::curve(const std::vector<double> &grid) const
{
    const std::vector<FluxSample> a = one_->curve(grid);
    const std::vector<FluxSample> b = two_->curve(grid);
    std::vector<RadianceSample> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = combine(grid[i], a[i], b[i]);
    }
    return out;
}

double RadianceEvaluator::gap(int level) const
{
    return two_->basis().energies(level) - two_->basis().energies(0);
}

double RadianceEvaluator::one_qubit_gap(int level) const
{
    return one_->basis().energies(level) - one_->basis().energies(0);
}

PeakEstimate RadianceEvaluator::max_near(double center, double half_width, double x_tol) const
{
    return extremum_near(center, half_width, x_tol, 1.0);
}

PeakEstimate RadianceEvaluator::min_near(double center, double half_width, double x_tol) const
{
    return extremum_near(center, half_width, x_tol, -1.0);
}

PeakEstimate RadianceEvaluator::extremum_near(double center, double half_width, double x_tol, double sign) const
{
    // Maximizes sign * R; undefined points count as -inf.
    auto score = [&](double w) {
        const RadianceSample s = point(w);
        if (!s.ok) {
            throw SolverError("radiance refinement failed at omega_d = " + std::to_string(w) + ": " + s.error);
        }
        return std::isnan(s.point.r) ? -std::numeric_limits<double>::infinity() : sign * s.point.r;
    };

    constexpr int kScan = 21;
    const double lo = std::max(center - half_width, 1e-6);
    const double hi = center + half_width;
    const double step = (hi - lo) / (kScan - 1);
    std::vector<double> xs(kScan), ys(kScan);
    for (int i = 0; i < kScan; ++i) {
        xs[static_cast<std::size_t>(i)] = i == kScan - 1 ? hi : lo + step * i;
    }
    std::vector<RadianceSample> samples = curve(xs);
    for (int i = 0; i < kScan; ++i) {
        const RadianceSample &s = samples[static_cast<std::size_t>(i)];
        if (!s.ok) {
            throw SolverError("radiance scan failed: " + s.error);
        }
        ys[static_cast<std::size_t>(i)] =
            std::isnan(s.point.r) ? -std::numeric_limits<double>::infinity() : sign * s.point.r;
    }
    const auto best = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[std::min<std::size_t>(best + 1, kScan - 1)];

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = score(c);
    double fd = score(d);
    while (b - a > x_tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(d);
        }
    }
    PeakEstimate out{xs[best], ys[best]};
    const double f_inner = std::max(fc, fd);
    if (f_inner > out.r) {
        out = fc >= fd ? PeakEstimate{c, fc} : PeakEstimate{d, fd};
    }
    out.r *= sign;
    return out;
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t count)
{
    std::vector<std::size_t> out;
    if (n == 0 || count == 0) {
        return out;
    }
    count = std::min(count, n);
    for (std::size_t j = 0; j < count; ++j) {
        out.push_back(count == 1 ? 0 : j * (n - 1) / (count - 1));
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ConvergenceCheck check_truncation(const SystemParams &base, const EvalOptions &options,
                                  const std::vector<double> &grid, const std::vector<RadianceSample> &reference,
                                  int samples)
{
    if (grid.size() != reference.size()) {
        throw std::invalid_argument("check_truncation: grid and reference differ in length");
    }
    std::vector<std::size_t> idx = subsample_indices(grid.size(), static_cast<std::size_t>(std::max(samples, 1)));
    // Always include the extremal points of the reference curve: that is where
    // truncation errors would show first.
    std::size_t hi = 0, lo = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double r = reference[i].point.r;
        if (std::isnan(r)) continue;
        if (std::isnan(reference[hi].point.r) || r > reference[hi].point.r) hi = i;
        if (std::isnan(reference[lo].point.r) || r < reference[lo].point.r) lo = i;
    }
    idx.push_back(hi);
    idx.push_back(lo);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

    std::vector<double> xs, refs;
    for (std::size_t i : idx) {
        xs.push_back(grid[i]);
        refs.push_back(reference[i].point.r);
    }
    return check_truncation_at(base, options, xs, refs);
}

ConvergenceCheck check_truncation_at(const SystemParams &base, const EvalOptions &options,
                                     const std::vector<double> &omegas, const std::vector<double> &reference_r)
{
    if (omegas.size() != reference_r.size()) {
        throw std::invalid_argument("check_truncation_at: omegas and reference differ in length");
    }
    SystemParams bigger = base;
    bigger.n_max = base.n_max + 4;
    const RadianceEvaluator eval(bigger, options);
    const std::vector<RadianceSample> rerun = eval.curve(omegas);

    ConvergenceCheck out;
    out.n_max = bigger.n_max;
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        const double a = reference_r[j];
        const double b = rerun[j].point.r;
        if (std::isnan(a) && std::isnan(b)) {
            continue;
        }
        ++out.points;
        const double delta = std::abs(a - b);
        if (!(delta <= kConvergenceTol)) {
            out.passed = false;
        }
        out.max_delta = std::isnan(delta) ? std::numeric_limits<double>::infinity() : std::max(out.max_delta, delta);
    }
    return out;
}

} // namespace usc
