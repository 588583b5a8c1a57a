#include "usc/master_equation.hpp"

#include "usc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace usc {

namespace {

/// Index of vec(|0><0|), the anchor used for the trace augmentation.
constexpr Eigen::Index kAnchor = 0;

/// A0 = L0 + vec(|0><0|) tr(.)
Matrix trace_augmented(const Matrix &l0, Eigen::Index m)
{
    Matrix a0 = l0;
    for (Eigen::Index i = 0; i < m; ++i) {
        a0(kAnchor, i + m * i) += 1.0;
    }
    return a0;
}

/// Solves (T - shift I) x = b for upper-triangular T, column-oriented.
Vector shifted_triangular_solve(const Matrix &t, Complex shift, Vector x)
{
    for (Eigen::Index j = t.rows() - 1; j >= 0; --j) {
        x(j) /= (t(j, j) - shift);
        if (j > 0) {
            x.head(j).noalias() -= x(j) * t.col(j).head(j);
        }
    }
    return x;
}

Eigen::Index side_from_superoperator(const Matrix &l)
{
    const auto m = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(l.rows()))));
    if (m * m != l.rows() || l.rows() != l.cols()) {
        throw std::invalid_argument("superoperator is not square in a vectorized space");
    }
    return m;
}

} // namespace

Vector vectorize(const Matrix &rho)
{
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector &v, Eigen::Index m)
{
    if (v.size() != m * m) {
        throw std::invalid_argument("unvectorize: size mismatch");
    }
    return Eigen::Map<const Matrix>(v.data(), m, m);
}

Matrix dissipator_matrix(const Matrix &op)
{
    if (op.rows() != op.cols()) {
        throw std::invalid_argument("dissipator_matrix: operator must be square");
    }
    const Eigen::Index m = op.rows();
    const Matrix id = Matrix::Identity(m, m);
    const Matrix odo = op.adjoint() * op;
    return kron(op.conjugate(), op) - 0.5 * kron(odo.transpose(), id) - 0.5 * kron(id, odo);
}

Matrix commutator_matrix(const Matrix &h)
{
    const Eigen::Index m = h.rows();
    const Matrix id = Matrix::Identity(m, m);
    return -kI * (kron(id, h) - kron(h.transpose(), id));
}

LiouvillianSet make_liouvillian(const RealVector &energies, std::vector<JumpChannel> jumps, const Matrix &drive,
                                double omega_d, double Omega)
{
    const Eigen::Index m = energies.size();
    if (drive.rows() != m || drive.cols() != m) {
        throw std::invalid_argument("make_liouvillian: drive operator has the wrong size");
    }
    LiouvillianSet L;
    L.energies = energies;
    L.drive = drive;
    L.omega_d = omega_d;
    L.Omega = Omega;
    L.l0 = commutator_matrix(energies.cast<Complex>().asDiagonal().toDenseMatrix());
    for (const JumpChannel &j : jumps) {
        if (j.op.rows() != m || j.op.cols() != m) {
            throw std::invalid_argument("make_liouvillian: jump operator has the wrong size");
        }
        if (j.rate != 0.0) {
            L.l0 += j.rate * dissipator_matrix(j.op);
        }
    }
    L.jumps = std::move(jumps);
    L.lv = commutator_matrix(drive);
    return L;
}

LiouvillianSet build_liouvillian(const DressedBasis &basis, const SystemParams &p)
{
    if (basis.params.n_qubits != p.n_qubits || basis.params.n_max != p.n_max
        || basis.level_cut != p.levels()) {
        throw std::invalid_argument("build_liouvillian: basis and parameters disagree on the truncation");
    }
    std::vector<JumpChannel> jumps;
    jumps.push_back({p.kappa, basis.x_plus});
    for (const Matrix &d : basis.d_plus) {
        jumps.push_back({p.gamma_sigma, d});
    }
    return make_liouvillian(basis.energies.head(basis.level_cut), std::move(jumps), basis.drive, p.omega_d,
                            p.Omega);
}

FloquetSteadyState floquet_steady_state(const LiouvillianSet &L, int K)
{
    if (K < 1) {
        throw std::invalid_argument("floquet_steady_state: harmonic cutoff must be >= 1");
    }
    if (L.Omega < 0.0) {
        throw std::invalid_argument("floquet_steady_state: Omega must be >= 0");
    }
    const Eigen::Index m = side_from_superoperator(L.l0);
    const Eigen::Index n = m * m;
    const Matrix a0 = trace_augmented(L.l0, m);
    const Matrix b = 0.5 * L.Omega * L.lv;
    const Matrix id = Matrix::Identity(n, n);

    auto factor = [&](const Matrix &block) {
        Eigen::PartialPivLU<Matrix> lu(block);
        if (!(lu.rcond() > 1e-14)) {
            throw SolverError("floquet_steady_state: singular block (rcond ~ " + std::to_string(lu.rcond())
                              + "); the undriven problem has no unique fixed point");
        }
        return lu;
    };

    // rho_{+-k} = S_{+-k} rho_{+-(k-1)} with S_{+-K} = -(A0 -+ i K w)^-1 B.
    std::vector<Matrix> up(static_cast<std::size_t>(K + 1));
    std::vector<Matrix> down(static_cast<std::size_t>(K + 1));
    for (int sign : {+1, -1}) {
        auto &chain = sign > 0 ? up : down;
        for (int k = K; k >= 1; --k) {
            Matrix block = a0 - Complex(0.0, sign * k * L.omega_d) * id;
            if (k < K) {
                block += b * chain[static_cast<std::size_t>(k + 1)];
            }
            chain[static_cast<std::size_t>(k)] = -factor(block).solve(b);
        }
    }
    const Matrix centre = a0 + b * (up[1] + down[1]);
    Vector rhs = Vector::Zero(n);
    rhs(kAnchor) = 1.0;
    const Vector x0 = factor(centre).solve(rhs);

    FloquetSteadyState out;
    out.K = K;
    out.harmonics.assign(static_cast<std::size_t>(2 * K + 1), Matrix());
    std::vector<Vector> xs(static_cast<std::size_t>(2 * K + 1));
    xs[static_cast<std::size_t>(K)] = x0;
    for (int k = 1; k <= K; ++k) {
        xs[static_cast<std::size_t>(K + k)] = up[static_cast<std::size_t>(k)] * xs[static_cast<std::size_t>(K + k - 1)];
        xs[static_cast<std::size_t>(K - k)] = down[static_cast<std::size_t>(k)] * xs[static_cast<std::size_t>(K - k + 1)];
    }
    double res = 0.0;
    for (int k = -K; k <= K; ++k) {
        const auto idx = static_cast<std::size_t>(k + K);
        Vector r = (L.l0 - Complex(0.0, k * L.omega_d) * id) * xs[idx];
        if (k > -K) r += b * xs[idx - 1];
        if (k < K) r += b * xs[idx + 1];
        res = std::max(res, r.lpNorm<Eigen::Infinity>());
        out.harmonics[idx] = unvectorize(xs[idx], m);
    }
    res = std::max(res, std::abs(out.average().trace() - 1.0));
    out.residual = res;
    if (!(res <= kFloquetResidualTol)) {
        throw SolverError("floquet_steady_state: residual " + std::to_string(res) + " above tolerance");
    }
    return out;
}

FloquetSolver::FloquetSolver(const LiouvillianSet &L)
    : m_(side_from_superoperator(L.l0)), l0_(L.l0), lv_(L.lv)
{
    const Matrix a0 = trace_augmented(l0_, m_);
    Eigen::ComplexSchur<Matrix> schur(a0);
    if (schur.info() != Eigen::Success) {
        throw SolverError("FloquetSolver: Schur factorization did not converge");
    }
    schur_q_ = schur.matrixU();
    schur_t_ = schur.matrixT();
    const double scale = max_norm(schur_t_);
    const double smallest = schur_t_.diagonal().cwiseAbs().minCoeff();
    if (!(smallest > 1e-13 * std::max(scale, 1.0))) {
        throw SolverError("FloquetSolver: singular undriven block (min |T_ii| = " + std::to_string(smallest)
                          + "); the undriven problem has no unique fixed point");
    }
    lv_schur_ = schur_q_.adjoint() * lv_ * schur_q_;
    anchor_schur_ = schur_q_.row(kAnchor).adjoint();
}

Vector FloquetSolver::solve_chain(double omega_d, double Omega, int K, const Vector *warm, int &iterations) const
{
    const Eigen::Index n = m_ * m_;
    const int blocks = 2 * K + 1;
    const Complex half_drive = 0.5 * Omega;

    Vector rhs = Vector::Zero(n * blocks);
    rhs.segment(K * n, n) = shifted_triangular_solve(schur_t_, 0.0, anchor_schur_);
    iterations = 0;
    if (Omega == 0.0) {
        return rhs;
    }

    auto apply = [&](const Vector &z) {
        std::vector<Vector> coupled(static_cast<std::size_t>(blocks));
        for (int b = 0; b < blocks; ++b) {
            coupled[static_cast<std::size_t>(b)] = lv_schur_ * z.segment(b * n, n);
        }
        Vector out = z;
        for (int b = 0; b < blocks; ++b) {
            Vector s = Vector::Zero(n);
            if (b > 0) s += coupled[static_cast<std::size_t>(b - 1)];
            if (b + 1 < blocks) s += coupled[static_cast<std::size_t>(b + 1)];
            const Complex shift(0.0, (b - K) * omega_d);
            out.segment(b * n, n) += shifted_triangular_solve(schur_t_, shift, half_drive * s);
        }
        return out;
    };

    Vector start = warm ? *warm : rhs;
    GmresResult res = gmres(apply, rhs, std::move(start), 1e-13, 60, 600);
    iterations = res.iterations;
    return res.x;
}

double FloquetSolver::residual(const std::vector<Matrix> &harmonics, double omega_d, double Omega) const
{
    const int K = static_cast<int>(harmonics.size() / 2);
    std::vector<Vector> xs;
    xs.reserve(harmonics.size());
    for (const Matrix &h : harmonics) {
        xs.push_back(vectorize(h));
    }
    std::vector<Vector> coupled;
    coupled.reserve(harmonics.size());
    for (const Vector &x : xs) {
        coupled.push_back(0.5 * Omega * (lv_ * x));
    }
    double res = 0.0;
    for (int k = -K; k <= K; ++k) {
        const auto idx = static_cast<std::size_t>(k + K);
        Vector r = l0_ * xs[idx] - Complex(0.0, k * omega_d) * xs[idx];
        if (k > -K) r += coupled[idx - 1];
        if (k < K) r += coupled[idx + 1];
        res = std::max(res, r.lpNorm<Eigen::Infinity>());
    }
    return std::max(res, std::abs(harmonics[static_cast<std::size_t>(K)].trace() - 1.0));
}

FloquetSteadyState FloquetSolver::solve(double omega_d, double Omega, int K) const
{
    return solve(omega_d, Omega, K, FloquetSteadyState{});
}

FloquetSteadyState FloquetSolver::solve(double omega_d, double Omega, int K,
                                        const FloquetSteadyState &warm_start) const
{
    if (K < 1) {
        throw std::invalid_argument("FloquetSolver: harmonic cutoff must be >= 1");
    }
    if (Omega < 0.0 || (Omega > 0.0 && !(omega_d > 0.0))) {
        throw std::invalid_argument("FloquetSolver: need Omega >= 0 and omega_d > 0 when driven");
    }
    const Eigen::Index n = m_ * m_;
    Vector warm;
    if (!warm_start.harmonics.empty()) {
        warm = Vector::Zero(n * (2 * K + 1));
        for (int k = -std::min(K, warm_start.K); k <= std::min(K, warm_start.K); ++k) {
            warm.segment((k + K) * n, n) = schur_q_.adjoint() * vectorize(warm_start.harmonic(k));
        }
    }
    FloquetSteadyState out;
    out.K = K;
    const Vector z = solve_chain(omega_d, Omega, K, warm.size() ? &warm : nullptr, out.iterations);
    out.harmonics.reserve(static_cast<std::size_t>(2 * K + 1));
    for (int b = 0; b < 2 * K + 1; ++b) {
        out.harmonics.push_back(unvectorize(schur_q_ * z.segment(b * n, n), m_));
    }
    out.residual = residual(out.harmonics, omega_d, Omega);
    if (!(out.residual <= kFloquetResidualTol)) {
        throw SolverError("FloquetSolver: residual " + std::to_string(out.residual) + " above tolerance at omega_d = "
                          + std::to_string(omega_d));
    }
    return out;
}

FloquetSteadyState FloquetSolver::solve_converged(double omega_d, double Omega, int K, const Matrix &observable,
                                                  double rel_tol, int K_max) const
{
    FloquetSteadyState current = solve(omega_d, Omega, K);
    if (Omega == 0.0) {
        return current;
    }
    auto expect = [&](const FloquetSteadyState &s) { return (observable * s.average()).trace().real(); };
    for (int k = K; k < K_max; ++k) {
        FloquetSteadyState next = solve(omega_d, Omega, k + 1, current);
        const double a = expect(current);
        const double b = expect(next);
        if (std::abs(b - a) <= rel_tol * std::abs(b) + 1e-300) {
            return current;
        }
        current = std::move(next);
    }
    throw SolverError("FloquetSolver: harmonic expansion not converged at K = " + std::to_string(K_max));
}

TimeDomainResult evolve_time_domain(const LiouvillianSet &L, const Matrix &observable,
                                    const TimeDomainOptions &options)
{
    const Eigen::Index m = L.levels();
    if (m == 0 || L.drive.rows() != m) {
        throw std::invalid_argument("evolve_time_domain: empty or inconsistent Liouvillian");
    }
    const double spread = L.energies.maxCoeff() - L.energies.minCoeff();
    const double fastest = spread > 0.0 ? 2.0 * std::numbers::pi / spread : 2.0 * std::numbers::pi;
    const double period = L.omega_d > 0.0 ? 2.0 * std::numbers::pi / L.omega_d : fastest;
    const double dt_limit = std::min(period, fastest) / options.points_per_period;
    if (options.dt > dt_limit * (1.0 + 1e-12)) {
        throw std::invalid_argument("evolve_time_domain: dt = " + std::to_string(options.dt)
                                    + " does not resolve the fastest period (need <= " + std::to_string(dt_limit) + ")");
    }
    const double dt_req = options.dt > 0.0 ? options.dt : dt_limit;
    const long long steps_per_period = static_cast<long long>(std::ceil(period / dt_req - 1e-9));
    const double dt = period / static_cast<double>(steps_per_period);
    const long long confirm = std::max<long long>(1, static_cast<long long>(std::ceil(options.confirm_time / period)));

    Matrix h_eff = L.energies.cast<Complex>().asDiagonal().toDenseMatrix();
    for (const JumpChannel &j : L.jumps) {
        h_eff -= Complex(0.0, 0.5 * j.rate) * (j.op.adjoint() * j.op);
    }
    const Matrix h_eff_adj = h_eff.adjoint();
    std::vector<Matrix> jump_adj;
    for (const JumpChannel &j : L.jumps) {
        jump_adj.push_back(j.op.adjoint());
    }

    auto rhs = [&](double t, const Matrix &rho) {
        Matrix out = -kI * (h_eff * rho - rho * h_eff_adj);
        for (std::size_t j = 0; j < L.jumps.size(); ++j) {
            if (L.jumps[j].rate != 0.0) {
                out.noalias() += L.jumps[j].rate * (L.jumps[j].op * rho * jump_adj[j]);
            }
        }
        if (L.Omega != 0.0) {
            const double c = L.Omega * std::cos(L.omega_d * t);
            out.noalias() -= Complex(0.0, c) * (L.drive * rho - rho * L.drive);
        }
        return out;
    };

    TimeDomainResult result;
    result.dt = dt;
    Matrix rho = Matrix::Zero(m, m);
    rho(0, 0) = 1.0;
    Matrix accum = Matrix::Zero(m, m);
    double previous = 0.0;
    bool have_previous = false;
    long long passes = 0;
    double t = 0.0;
    long long step = 0;

    while (t < options.t_end) {
        for (long long s = 0; s < steps_per_period; ++s, ++step) {
            t = static_cast<double>(step) * dt;
            accum += rho;
            if (options.sample_stride > 0 && step % options.sample_stride == 0) {
                result.samples.push_back({t, (observable * rho).trace()});
            }
            const Matrix k1 = rhs(t, rho);
            const Matrix k2 = rhs(t + 0.5 * dt, rho + (0.5 * dt) * k1);
            const Matrix k3 = rhs(t + 0.5 * dt, rho + (0.5 * dt) * k2);
            const Matrix k4 = rhs(t + dt, rho + dt * k3);
            rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        t = static_cast<double>(step) * dt;
        ++result.periods;
        result.average = accum / static_cast<double>(steps_per_period);
        accum.setZero();
        const double value = (observable * result.average).trace().real();
        if (have_previous) {
            result.last_delta = std::abs(value - previous);
            const bool steady = result.last_delta <= options.rel_tol * std::abs(value) + 1e-18;
            passes = steady ? passes + 1 : 0;
        }
        previous = value;
        have_previous = true;
        result.observable = value;
        result.time = t;
        if (passes >= confirm) {
            break;
        }
    }
    if (passes < confirm) {
        throw SolverError("evolve_time_domain: no steady state before t_end = " + std::to_string(options.t_end)
                          + " (last period-to-period change " + std::to_string(result.last_delta) + ")");
    }
    const double drift = std::abs(result.average.trace() - 1.0);
    if (drift > 1e-8) {
        throw SolverError("evolve_time_domain: trace drift " + std::to_string(drift));
    }
    const Matrix herm = 0.5 * (result.average + result.average.adjoint());
    const double lowest = Eigen::SelfAdjointEigenSolver<Matrix>(herm, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lowest < -1e-6) {
        throw SolverError("evolve_time_domain: density matrix negativity " + std::to_string(lowest));
    }
    return result;
}

double spectral_abscissa(const Matrix &l0)
{
    Eigen::ComplexEigenSolver<Matrix> solver(l0, false);
    if (solver.info() != Eigen::Success) {
        throw SolverError("spectral_abscissa: eigensolver failed");
    }
    return solver.eigenvalues().real().maxCoeff();
}

} // namespace usc
