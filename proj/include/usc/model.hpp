#pragma once

// Physical model: resonator coupled to one or two qubits with mixed
// longitudinal/transverse coupling, plus a classical drive on the qubits.
// Frequencies and rates are in units of the qubit frequency (omega_sigma = 1).

#include "usc/operator_algebra.hpp"

#include <numbers>
#include <optional>

namespace usc {

inline constexpr int kDefaultLevelCut = 16;
inline constexpr int kAllLevels = -1;
inline constexpr int kMinLevelCut = 12;

struct SystemParams {
    double omega_c = 1.0;
    double omega_sigma = 1.0;
    double lambda = 0.1;
    double theta = std::numbers::pi / 2;
    int n_qubits = 2;
    double Omega = 0.001;
    double omega_d = 1.0;
    double kappa = 0.01;
    double gamma_sigma = 0.01;
    int n_max = 10;
    /// Dressed levels kept in the master equation; nullopt selects the
    /// default, kAllLevels keeps the whole truncated space.
    std::optional<int> level_cut;
    /// Builds H0 without the lambda cos(theta) (a + a^dag) sigma_z term.
    bool drop_sigma_z_coupling = false;

    Dims dims() const;
    Eigen::Index hilbert_dim() const;
    /// Resolved level count: explicit cut, else min(kDefaultLevelCut, hilbert_dim()).
    int levels() const;
    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Bare-basis operators of the composite space.
struct BareOperators {
    QuantumOperator a;
    QuantumOperator position;                  ///< a + a^dag
    std::vector<QuantumOperator> lowering;     ///< sigma^-_j
    std::vector<QuantumOperator> qubit_x;      ///< sigma^-_j + sigma^+_j
    std::vector<QuantumOperator> qubit_z;      ///< sigma^z_j
};

BareOperators bare_operators(const SystemParams &p);

/// H0 = w_c a^dag a + w_s sum_j s+_j s-_j + lambda (a + a^dag) sum_j (cos(theta) s^z_j - sin(theta) s^x_j)
QuantumOperator build_h0(const SystemParams &p);

/// V = sum_j (s-_j + s+_j); the drive is Omega cos(omega_d t) V.
QuantumOperator build_drive_operator(const SystemParams &p);

/// exp(i pi (a^dag a + sum_j s+_j s-_j)): diagonal, entries +-1.
QuantumOperator parity_operator(const SystemParams &p);

/// ||[H0, Pi]||_max / ||H0||_max.
double parity_defect(const SystemParams &p);

} // namespace usc
