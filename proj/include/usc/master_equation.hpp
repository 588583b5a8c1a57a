#pragma once

// Dressed-basis Lindblad master equation and its driven periodic steady state.
//
// Vectorization is column-stacking: vec(rho)[i + M * j] = rho(i, j), which is
// exactly the memory layout of a column-major M x M Eigen matrix. Under it
// vec(A rho B) = (B^T (x) A) vec(rho).

#include "usc/dressed.hpp"

#include <Eigen/Eigenvalues>

#include <vector>

namespace usc {

Vector vectorize(const Matrix &rho);
Matrix unvectorize(const Vector &v, Eigen::Index m);

/// Superoperator of rho -> (2 O rho O^dag - rho O^dag O - O^dag O rho) / 2.
Matrix dissipator_matrix(const Matrix &op);

/// Superoperator of rho -> -i [h, rho].
Matrix commutator_matrix(const Matrix &h);

struct JumpChannel {
    double rate = 0.0;
    Matrix op;
};

/// Generator of d rho/dt = L0 rho + Omega cos(omega_d t) LV rho, kept both as
/// superoperator matrices and as the operators they were assembled from.
struct LiouvillianSet {
    Matrix l0;
    Matrix lv;
    double omega_d = 0.0;
    double Omega = 0.0;

    RealVector energies;               ///< diagonal of the retained H0
    std::vector<JumpChannel> jumps;    ///< kappa X+, gamma D+_j
    Matrix drive;                      ///< V in the dressed basis

    Eigen::Index levels() const noexcept { return energies.size(); }
};

/// Assembles the superoperators from explicit operators (any basis).
LiouvillianSet make_liouvillian(const RealVector &energies, std::vector<JumpChannel> jumps, const Matrix &drive,
                                double omega_d, double Omega);

/// L0 = -i[H0, .] + kappa D[X+] + gamma_sigma sum_j D[D+_j]; LV = -i[V, .].
LiouvillianSet build_liouvillian(const DressedBasis &basis, const SystemParams &p);

/// Harmonics rho_k, k = -K..K, of the periodic steady state.
struct FloquetSteadyState {
    std::vector<Matrix> harmonics;
    int K = 0;
    double residual = 0.0;
    int iterations = 0;

    const Matrix &harmonic(int k) const { return harmonics.at(static_cast<std::size_t>(k + K)); }
    /// Period average, rho_0.
    const Matrix &average() const { return harmonic(0); }
};

inline constexpr double kFloquetResidualTol = 1e-8;

/// Harmonic balance by direct block elimination over the tridiagonal-in-k chain
/// (dense LU per block). Reference implementation; cost grows as (levels^2)^3.
FloquetSteadyState floquet_steady_state(const LiouvillianSet &L, int K);

/// Fast harmonic-balance solver for sweeps over omega_d at fixed L0, LV.
///
/// The trace constraint is folded in as A0 = L0 + vec(|0><0|) tr(.), which is
/// invertible whenever L0 has a unique fixed point and leaves the solution
/// unchanged. A0 is Schur-factorized once; each solve then runs GMRES on the
/// harmonic chain preconditioned by the exact block-diagonal inverse, i.e.
/// shifted triangular solves with (T - i k omega_d).
class FloquetSolver {
public:
    explicit FloquetSolver(const LiouvillianSet &L);

    FloquetSteadyState solve(double omega_d, double Omega, int K) const;
    FloquetSteadyState solve(double omega_d, double Omega, int K, const FloquetSteadyState &warm_start) const;

    /// Raises K from `K` until tr(observable rho_0) moves by <= rel_tol
    /// (relative) between consecutive cutoffs, up to K_max.
    FloquetSteadyState solve_converged(double omega_d, double Omega, int K, const Matrix &observable,
                                       double rel_tol = 1e-8, int K_max = 8) const;

    Eigen::Index levels() const noexcept { return m_; }

private:
    Vector solve_chain(double omega_d, double Omega, int K, const Vector *warm, int &iterations) const;
    double residual(const std::vector<Matrix> &harmonics, double omega_d, double Omega) const;

    Eigen::Index m_ = 0;
    Matrix l0_;
    Matrix lv_;
    Matrix schur_q_;
    Matrix schur_t_;
    Matrix lv_schur_;
    Vector anchor_schur_;
};

struct TimeDomainOptions {
    double t_end = 20000.0;
    /// Requested step; 0 selects min(2 pi / omega_d, 2 pi / dE_max) / points_per_period.
    double dt = 0.0;
    double points_per_period = 40.0;
    /// Relative change of the period-averaged observable that counts as steady.
    double rel_tol = 1e-8;
    /// The criterion must hold for every consecutive pair over this long a time.
    double confirm_time = 200.0;
    /// Record (t, <observable>) every `sample_stride` steps when > 0.
    int sample_stride = 0;
};

struct TrajectorySample {
    double t = 0.0;
    Complex value;
};

struct TimeDomainResult {
    Matrix average;         ///< period-averaged rho over the last period
    double observable = 0.0;
    double time = 0.0;
    double dt = 0.0;
    double last_delta = 0.0;
    long long periods = 0;
    std::vector<TrajectorySample> samples;
};

/// Fixed-step RK4 integration of the driven master equation from |0><0|
/// (the dressed ground state), applied in operator form. Steps are aligned
/// so an integer number of them spans one drive period.
TimeDomainResult evolve_time_domain(const LiouvillianSet &L, const Matrix &observable,
                                    const TimeDomainOptions &options = {});

/// Largest real part among the eigenvalues of l0.
double spectral_abscissa(const Matrix &l0);

} // namespace usc
