#pragma once

// Output photon flux, the two-qubit radiance witness and spectrum extrema.

#include "usc/master_equation.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace usc {

inline constexpr double kFluxFloor = 1e-14;
inline constexpr double kClassTol = 1e-6;
inline constexpr int kDefaultHarmonics = 3;

struct PhotonFlux {
    double mean = 0.0;   ///< <X^- X^+>
    double rate = 0.0;   ///< kappa <X^- X^+>
    bool clamped = false;
};

/// kappa tr(X^- X^+ rho). Values in [-1e-10, 0) are clamped to 0 and flagged;
/// anything lower throws SolverError.
PhotonFlux photon_flux(const Matrix &rho, const DressedBasis &basis, double kappa);

/// X^- X^+ for the retained levels.
Matrix emission_operator(const DressedBasis &basis);

class UndefinedWitness : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// R = (n2 - 2 n1) / (2 n1). Throws UndefinedWitness when n1 <= flux_floor.
double radiance_witness(double n2, double n1, double flux_floor = kFluxFloor);

enum class RadianceClass { subradiance, uncorrelated, superradiance, hyperradiance };

/// r < -tol: sub; |r| <= tol: uncorrelated; tol < r <= 1: super; r > 1: hyper.
RadianceClass classify(double r, double tol = kClassTol);

std::string_view to_string(RadianceClass c);

struct RadiancePoint {
    double omega_d = 0.0;
    double n1 = 0.0;
    double n2 = 0.0;
    double r = 0.0;                     ///< NaN when the witness is undefined
    std::optional<RadianceClass> cls;   ///< empty when r is NaN
};

/// Builds a point from stored fluxes, flagging (r = NaN) when n1 is below the floor.
RadiancePoint make_radiance_point(double omega_d, double n1, double n2, double flux_floor = kFluxFloor);

struct SpectrumPoint {
    double omega_d = 0.0;
    double value = 0.0;     ///< <X^- X^+>
    double residual = 0.0;
    bool ok = true;
    std::string error;
};

struct SpectrumOptions {
    int harmonics = kDefaultHarmonics;
    bool escalate_harmonics = true;
    int threads = 1;
};

/// Steady-state <X^- X^+> per drive frequency. Failed points stay in place with ok = false.
std::vector<SpectrumPoint> excitation_spectrum(const SystemParams &p, std::span<const double> grid,
                                               const SpectrumOptions &options = {});

enum class ExtremumKind { peak, deep };

struct Extremum {
    double x = 0.0;
    double value = 0.0;
    ExtremumKind kind = ExtremumKind::peak;
    double prominence = 0.0;
    std::size_t index = 0;   ///< grid index of the sampled extremum
};

using PeakList = std::vector<Extremum>;

/// Strict 3-point local extrema refined by a parabola through the extremal
/// triple, keeping those with topographic prominence >= prominence_floor.
/// Throws std::invalid_argument for empty or mismatched input.
PeakList find_extrema(std::span<const double> xs, std::span<const double> ys, double prominence_floor);

/// Default floor: 1e-3 of the curve's value range.
double default_prominence_floor(std::span<const double> ys);

} // namespace usc
