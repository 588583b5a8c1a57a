#include "usc/observables.hpp"

#include "usc/errors.hpp"
#include "usc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace usc {

Matrix emission_operator(const DressedBasis &basis)
{
    return basis.x_plus.adjoint() * basis.x_plus;
}

PhotonFlux photon_flux(const Matrix &rho, const DressedBasis &basis, double kappa)
{
    if (rho.rows() != basis.level_cut || rho.cols() != basis.level_cut) {
        throw std::invalid_argument("photon_flux: density matrix does not match the retained levels");
    }
    if (std::abs(rho.trace() - 1.0) > 1e-8) {
        throw std::invalid_argument("photon_flux: density matrix is not normalized");
    }
    PhotonFlux out;
    out.mean = (emission_operator(basis) * rho).trace().real();
    if (out.mean < 0.0) {
        if (out.mean < -1e-10) {
            throw SolverError("photon_flux: negative <X^- X^+> = " + std::to_string(out.mean));
        }
        out.mean = 0.0;
        out.clamped = true;
    }
    out.rate = kappa * out.mean;
    return out;
}

double radiance_witness(double n2, double n1, double flux_floor)
{
    if (!(n1 > flux_floor)) {
        throw UndefinedWitness("radiance witness undefined: one-qubit flux " + std::to_string(n1)
                               + " is below the floor");
    }
    return (n2 - 2.0 * n1) / (2.0 * n1);
}

RadianceClass classify(double r, double tol)
{
    if (r < -tol) return RadianceClass::subradiance;
    if (r <= tol) return RadianceClass::uncorrelated;
    if (r <= 1.0) return RadianceClass::superradiance;
    return RadianceClass::hyperradiance;
}

std::string_view to_string(RadianceClass c)
{
    switch (c) {
    case RadianceClass::subradiance: return "subradiance";
    case RadianceClass::uncorrelated: return "uncorrelated";
    case RadianceClass::superradiance: return "superradiance";
    case RadianceClass::hyperradiance: return "hyperradiance";
    }
    return "unknown";
}

RadiancePoint make_radiance_point(double omega_d, double n1, double n2, double flux_floor)
{
    RadiancePoint pt{omega_d, n1, n2, std::numeric_limits<double>::quiet_NaN(), std::nullopt};
    if (n1 > flux_floor) {
        pt.r = radiance_witness(n2, n1, flux_floor);
        pt.cls = classify(pt.r);
    }
    return pt;
}

std::vector<SpectrumPoint> excitation_spectrum(const SystemParams &p, std::span<const double> grid,
                                               const SpectrumOptions &options)
{
    if (grid.empty()) {
        throw std::invalid_argument("excitation_spectrum: empty frequency grid");
    }
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw std::invalid_argument("excitation_spectrum: grid must be ascending");
    }
    const DressedBasis basis = diagonalize(p);
    const LiouvillianSet L = build_liouvillian(basis, p);
    const FloquetSolver solver(L);
    const Matrix emission = emission_operator(basis);

    std::vector<SpectrumPoint> out(grid.size());
    parallel_for(grid.size(), options.threads, [&](std::size_t i) {
        SpectrumPoint &pt = out[i];
        pt.omega_d = grid[i];
        try {
            const FloquetSteadyState s =
                options.escalate_harmonics
                    ? solver.solve_converged(grid[i], p.Omega, options.harmonics, emission)
                    : solver.solve(grid[i], p.Omega, options.harmonics);
            pt.value = photon_flux(s.average(), basis, p.kappa).mean;
            pt.residual = s.residual;
        } catch (const SolverError &e) {
            pt.ok = false;
            pt.value = std::numeric_limits<double>::quiet_NaN();
            pt.error = e.what();
        }
    });
    return out;
}

namespace {

/// Topographic prominence of a strict local maximum at i.
double prominence_of_max(std::span<const double> ys, std::size_t i)
{
    const double top = ys[i];
    double left_min = top;
    for (std::size_t j = i; j-- > 0;) {
        if (ys[j] > top) break;
        left_min = std::min(left_min, ys[j]);
    }
    double right_min = top;
    for (std::size_t j = i + 1; j < ys.size(); ++j) {
        if (ys[j] > top) break;
        right_min = std::min(right_min, ys[j]);
    }
    return top - std::max(left_min, right_min);
}

/// Vertex of the parabola through three points; falls back to the middle sample.
std::pair<double, double> refine(double x0, double y0, double x1, double y1, double x2, double y2)
{
    const double d10 = x1 - x0;
    const double d12 = x1 - x2;
    const double denom = d10 * (y1 - y2) - d12 * (y1 - y0);
    if (denom == 0.0) {
        return {x1, y1};
    }
    const double xv = x1 - 0.5 * (d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0)) / denom;
    if (!(xv > x0 && xv < x2)) {
        return {x1, y1};
    }
    const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    return {xv, l0 * y0 + l1 * y1 + l2 * y2};
}

} // namespace

double default_prominence_floor(std::span<const double> ys)
{
    if (ys.empty()) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
    return 1e-3 * (*hi - *lo);
}

PeakList find_extrema(std::span<const double> xs, std::span<const double> ys, double prominence_floor)
{
    if (xs.empty() || xs.size() != ys.size()) {
        throw std::invalid_argument("find_extrema: empty or mismatched curve");
    }
    std::vector<double> negated(ys.size());
    std::transform(ys.begin(), ys.end(), negated.begin(), [](double v) { return -v; });

    PeakList out;
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        const bool is_peak = ys[i] > ys[i - 1] && ys[i] > ys[i + 1];
        const bool is_deep = ys[i] < ys[i - 1] && ys[i] < ys[i + 1];
        if (!is_peak && !is_deep) {
            continue;
        }
        const double prom = is_peak ? prominence_of_max(ys, i) : prominence_of_max(negated, i);
        if (prom < prominence_floor) {
            continue;
        }
        const auto [x, y] = refine(xs[i - 1], ys[i - 1], xs[i], ys[i], xs[i + 1], ys[i + 1]);
        out.push_back({x, y, is_peak ? ExtremumKind::peak : ExtremumKind::deep, prom, i});
    }
    return out;
}

} // namespace usc
