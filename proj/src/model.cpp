#include "usc/model.hpp"

#include "usc/errors.hpp"

#include <cmath>
#include <string>

namespace usc {

Dims SystemParams::dims() const
{
    Dims d{n_max + 1};
    for (int j = 0; j < n_qubits; ++j) {
        d.push_back(2);
    }
    return d;
}

Eigen::Index SystemParams::hilbert_dim() const
{
    return static_cast<Eigen::Index>(n_max + 1) << n_qubits;
}

int SystemParams::levels() const
{
    if (level_cut) {
        return *level_cut == kAllLevels ? static_cast<int>(hilbert_dim()) : *level_cut;
    }
    return static_cast<int>(std::min<Eigen::Index>(kDefaultLevelCut, hilbert_dim()));
}

void SystemParams::validate() const
{
    auto finite = [](const char *key, double v) {
        if (!std::isfinite(v)) {
            throw ConfigError(key, "must be finite");
        }
    };
    finite("omega_c", omega_c);
    finite("omega_sigma", omega_sigma);
    finite("lambda", lambda);
    finite("theta", theta);
    finite("Omega", Omega);
    finite("omega_d", omega_d);
    finite("kappa", kappa);
    finite("gamma_sigma", gamma_sigma);

    if (omega_sigma != 1.0) {
        throw ConfigError("omega_sigma", "fixes the unit and must equal 1");
    }
    if (omega_c < 0.0) throw ConfigError("omega_c", "must be >= 0");
    if (lambda < 0.0) throw ConfigError("lambda", "must be >= 0");
    if (Omega < 0.0) throw ConfigError("Omega", "must be >= 0");
    if (kappa < 0.0) throw ConfigError("kappa", "must be >= 0");
    if (gamma_sigma < 0.0) throw ConfigError("gamma_sigma", "must be >= 0");
    if (Omega > 0.0 && !(omega_d > 0.0)) {
        throw ConfigError("omega_d", "must be > 0 when Omega > 0");
    }
    if (!(theta > 0.0 && theta <= std::numbers::pi / 2 + 1e-15)) {
        throw ConfigError("theta", "must lie in (0, pi/2]");
    }
    if (n_qubits != 1 && n_qubits != 2) {
        throw ConfigError("n_qubits", "only 1 or 2 qubits are supported");
    }
    if (n_max < 4) {
        throw ConfigError("n_max", "photon truncation must be >= 4");
    }
    if (level_cut && *level_cut != kAllLevels) {
        if (*level_cut > hilbert_dim()) {
            throw ConfigError("level_cut", "exceeds the Hilbert-space dimension "
                                               + std::to_string(hilbert_dim()));
        }
        if (*level_cut < std::min<Eigen::Index>(kMinLevelCut, hilbert_dim())) {
            throw ConfigError("level_cut", "must keep at least " + std::to_string(kMinLevelCut) + " levels");
        }
    }
}

BareOperators bare_operators(const SystemParams &p)
{
    const Dims dims = p.dims();
    BareOperators ops;
    ops.a = embed(annihilation(p.n_max), 0, dims);
    ops.position = ops.a + ops.a.adjoint();
    for (int j = 0; j < p.n_qubits; ++j) {
        const auto slot = static_cast<std::size_t>(j + 1);
        ops.lowering.push_back(embed(qubit_lowering(), slot, dims));
        ops.qubit_x.push_back(embed(sigma_x(), slot, dims));
        ops.qubit_z.push_back(embed(sigma_z(), slot, dims));
    }
    return ops;
}

QuantumOperator build_h0(const SystemParams &p)
{
    const BareOperators ops = bare_operators(p);
    QuantumOperator h = Complex(p.omega_c) * (ops.a.adjoint() * ops.a);
    const double cz = p.drop_sigma_z_coupling ? 0.0 : std::cos(p.theta);
    const double sx = std::sin(p.theta);
    for (int j = 0; j < p.n_qubits; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        h += Complex(p.omega_sigma) * (ops.lowering[jj].adjoint() * ops.lowering[jj]);
        const QuantumOperator coupling = Complex(cz) * ops.qubit_z[jj] - Complex(sx) * ops.qubit_x[jj];
        h += Complex(p.lambda) * (ops.position * coupling);
    }
    return h;
}

QuantumOperator build_drive_operator(const SystemParams &p)
{
    const Dims dims = p.dims();
    QuantumOperator v(Matrix::Zero(p.hilbert_dim(), p.hilbert_dim()), dims);
    for (int j = 0; j < p.n_qubits; ++j) {
        v += embed(sigma_x(), static_cast<std::size_t>(j + 1), dims);
    }
    return v;
}

QuantumOperator parity_operator(const SystemParams &p)
{
    const Dims dims = p.dims();
    const Eigen::Index n = p.hilbert_dim();
    Matrix pi = Matrix::Zero(n, n);
    // Index = (photons * 2 + q1) * 2 + q2, so the excitation count is the
    // photon number plus the popcount of the qubit bits.
    for (Eigen::Index idx = 0; idx < n; ++idx) {
        const Eigen::Index photons = idx >> p.n_qubits;
        int excitations = static_cast<int>(photons);
        for (int j = 0; j < p.n_qubits; ++j) {
            excitations += static_cast<int>((idx >> j) & 1);
        }
        pi(idx, idx) = (excitations % 2 == 0) ? 1.0 : -1.0;
    }
    return {std::move(pi), dims};
}

double parity_defect(const SystemParams &p)
{
    const QuantumOperator h = build_h0(p);
    const QuantumOperator pi = parity_operator(p);
    const double scale = h.max_norm();
    if (scale == 0.0) {
        return 0.0;
    }
    return (h * pi - pi * h).max_norm() / scale;
}

} // namespace usc
