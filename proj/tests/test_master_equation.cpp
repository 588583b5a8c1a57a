#include "usc/errors.hpp"
#include "usc/master_equation.hpp"
#include "usc/observables.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

using namespace usc;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix random_matrix(Eigen::Index n, std::mt19937 &rng)
{
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

SystemParams small_system(int n_qubits, double theta = kPi / 2, double lambda = 0.1)
{
    SystemParams p;
    p.n_qubits = n_qubits;
    p.theta = theta;
    p.lambda = lambda;
    p.n_max = 6;
    p.level_cut = 12;
    return p;
}

struct System {
    SystemParams params;
    DressedBasis basis;
    LiouvillianSet L;
};

System make_system(const SystemParams &p)
{
    System s{p, diagonalize(p), {}};
    s.L = build_liouvillian(s.basis, p);
    return s;
}

Vector trace_row(Eigen::Index m)
{
    return vectorize(Matrix::Identity(m, m));
}

// Damped cavity with energies n * omega_c, decay kappa a, drive a + a^dag.
LiouvillianSet toy_cavity(int n_max, double omega_c, double kappa, double omega_d, double Omega)
{
    const Matrix a = annihilation(n_max).data();
    RealVector e(n_max + 1);
    for (int n = 0; n <= n_max; ++n) e(n) = omega_c * n;
    return make_liouvillian(e, {{kappa, a}}, a + a.adjoint(), omega_d, Omega);
}

} // namespace

TEST_CASE("vectorization convention")
{
    std::mt19937 rng(1);
    const Matrix rho = random_matrix(4, rng), a = random_matrix(4, rng), b = random_matrix(4, rng);
    const Vector v = vectorize(rho);
    CHECK(v(1 + 4 * 2) == rho(1, 2));
    CHECK(max_norm(unvectorize(v, 4) - rho) == 0.0);
    CHECK((vectorize(a * rho * b) - kron(b.transpose(), a) * v).norm() <= 1e-12 * v.norm() * max_norm(a) * max_norm(b) * 16);
    CHECK_THROWS_AS(unvectorize(v, 3), std::invalid_argument);
}

TEST_CASE("dissipator superoperator")
{
    CHECK(max_norm(dissipator_matrix(Matrix::Zero(3, 3))) == 0.0);
    const Matrix sm = qubit_lowering().data();
    Matrix ground = Matrix::Zero(2, 2);
    ground(0, 0) = 1.0;
    CHECK(max_norm(dissipator_matrix(sm) * vectorize(ground)) == 0.0);

    // kappa D[a] empties |1><1| as exp(-kappa t).
    const int n_max = 4;
    const double kappa = 0.3, t = 2.5;
    const Matrix a = annihilation(n_max).data();
    Matrix one = Matrix::Zero(n_max + 1, n_max + 1);
    one(1, 1) = 1.0;
    const Matrix gen = kappa * t * dissipator_matrix(a);
    const Matrix rho_t = unvectorize(gen.exp() * vectorize(one), n_max + 1);
    CHECK(rho_t(1, 1).real() == doctest::Approx(std::exp(-kappa * t)).epsilon(1e-12));
    CHECK(rho_t(0, 0).real() == doctest::Approx(1 - std::exp(-kappa * t)).epsilon(1e-12));
    CHECK(std::abs(rho_t.trace() - Complex(1.0)) <= 1e-13);
}

TEST_CASE("undamped generator is diagonal with the Bohr frequencies")
{
    SystemParams p = small_system(2);
    p.kappa = 0.0;
    p.gamma_sigma = 0.0;
    const System s = make_system(p);
    const Eigen::Index m = s.L.levels();
    Matrix expected = Matrix::Zero(m * m, m * m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < m; ++i) expected(i + m * j, i + m * j) = -kI * (s.L.energies(i) - s.L.energies(j));
    CHECK(max_norm(s.L.l0 - expected) <= 1e-12);
}

TEST_CASE("undriven generator: trace, fixed point and spectrum")
{
    for (int nq : {1, 2})
        for (double theta : {kPi / 2, kPi / 6}) {
            const System s = make_system(small_system(nq, theta, 0.2));
            const Eigen::Index m = s.L.levels();
            const Vector t = trace_row(m);
            CHECK((t.transpose() * s.L.l0).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((t.transpose() * s.L.lv).cwiseAbs().maxCoeff() <= 1e-12);
            Matrix ground = Matrix::Zero(m, m);
            ground(0, 0) = 1.0;
            CHECK((s.L.l0 * vectorize(ground)).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(spectral_abscissa(s.L.l0) <= 1e-10);

            const Eigen::JacobiSVD<Matrix> svd(s.L.l0);
            const RealVector sv = svd.singularValues();
            CHECK(sv(sv.size() - 1) <= 1e-10 * sv(0));
            CHECK(sv(sv.size() - 2) > 1e-6 * sv(0));
        }
}

TEST_CASE("undriven Floquet state is the dressed vacuum")
{
    const System s = make_system(small_system(2));
    const FloquetSolver solver(s.L);
    const FloquetSteadyState st = solver.solve(1.0, 0.0, 2);
    const Eigen::Index m = s.L.levels();
    Matrix ground = Matrix::Zero(m, m);
    ground(0, 0) = 1.0;
    CHECK(max_norm(st.average() - ground) <= 1e-10);
    for (int k : {-2, -1, 1, 2}) CHECK(max_norm(st.harmonic(k)) <= 1e-10);
}

TEST_CASE("harmonic expansion: cutoff convergence, solver agreement and invariants")
{
    for (int nq : {1, 2}) {
        System s = make_system(small_system(nq, kPi / 6));
        const double omega_d = s.basis.gaps()(1);
        s.L.omega_d = omega_d;
        s.L.Omega = s.params.Omega;
        const FloquetSolver solver(s.L);
        const Matrix obs = emission_operator(s.basis);

        const FloquetSteadyState k3 = solver.solve(omega_d, s.params.Omega, 3);
        const FloquetSteadyState k4 = solver.solve(omega_d, s.params.Omega, 4);
        CHECK(k3.residual <= kFloquetResidualTol);
        CHECK(max_norm(k3.average() - k4.average()) <= 1e-10);

        const FloquetSteadyState direct = floquet_steady_state(s.L, 3);
        for (int k = -3; k <= 3; ++k) CHECK(max_norm(direct.harmonic(k) - k3.harmonic(k)) <= 1e-10);

        CHECK(std::abs(k3.average().trace() - Complex(1.0)) <= 1e-10);
        CHECK(max_norm(k3.average() - k3.average().adjoint()) <= 1e-10);
        for (int k = 1; k <= 3; ++k) {
            CHECK(std::abs(k3.harmonic(k).trace()) <= 1e-10);
            CHECK(max_norm(k3.harmonic(-k) - k3.harmonic(k).adjoint()) <= 1e-10);
        }
        // rho(t) stays positive over the period.
        for (int phase = 0; phase < 8; ++phase) {
            const double wt = 2 * kPi * phase / 8;
            Matrix rho = k3.average();
            for (int k = 1; k <= 3; ++k) {
                const Complex e = std::exp(Complex(0, -k * wt));
                rho += e * k3.harmonic(k) + std::conj(e) * k3.harmonic(-k);
            }
            const Matrix h = 0.5 * (rho + rho.adjoint());
            CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues()(0) >= -1e-6);
        }
        const FloquetSteadyState conv = solver.solve_converged(omega_d, s.params.Omega, 3, obs);
        CHECK(conv.K >= 3);
    }
}

TEST_CASE("harmonic solvers reject bad arguments")
{
    const System s = make_system(small_system(1));
    const FloquetSolver solver(s.L);
    CHECK_THROWS_AS(solver.solve(1.0, 0.001, 0), std::invalid_argument);
    CHECK_THROWS_AS(solver.solve(0.0, 0.001, 3), std::invalid_argument);
    CHECK_THROWS_AS(solver.solve(1.0, -0.001, 3), std::invalid_argument);
    CHECK_THROWS_AS(floquet_steady_state(s.L, 0), std::invalid_argument);
}

TEST_CASE("driven damped cavity matches the coherent-state solution")
{
    const double omega_c = 1.0, kappa = 0.1, omega_d = 0.8, Omega = 0.01;
    const LiouvillianSet L = toy_cavity(5, omega_c, kappa, omega_d, Omega);
    const Matrix a = annihilation(5).data();
    const Matrix n = a.adjoint() * a;
    const double hk = 0.5 * kappa;
    const double exact = 0.25 * Omega * Omega
                         * (1.0 / (hk * hk + (omega_c - omega_d) * (omega_c - omega_d))
                            + 1.0 / (hk * hk + (omega_c + omega_d) * (omega_c + omega_d)));

    TimeDomainOptions opt;
    opt.points_per_period = 200;
    const TimeDomainResult td = evolve_time_domain(L, n, opt);
    CHECK(std::abs(td.observable - exact) <= 1e-6 * exact);

    const FloquetSteadyState fl = FloquetSolver(L).solve_converged(omega_d, Omega, 3, n);
    CHECK(std::abs((n * fl.average()).trace().real() - exact) <= 1e-6 * exact);
}

TEST_CASE("time-domain integration agrees with the harmonic solution at resonance")
{
    System s = make_system(small_system(1));
    const double omega_d = s.basis.gaps()(1);
    s.L.omega_d = omega_d;
    s.L.Omega = s.params.Omega;
    const Matrix obs = emission_operator(s.basis);
    const FloquetSteadyState fl = FloquetSolver(s.L).solve_converged(omega_d, s.L.Omega, 3, obs);
    const double f = (obs * fl.average()).trace().real();
    const TimeDomainResult td = evolve_time_domain(s.L, obs);
    CHECK(std::abs(td.observable - f) <= 1e-4 * f);
    CHECK(std::abs(td.average.trace() - Complex(1.0)) <= 1e-8);

    TimeDomainOptions coarse;
    coarse.dt = 10.0;
    CHECK_THROWS_AS(evolve_time_domain(s.L, obs, coarse), std::invalid_argument);
    TimeDomainOptions short_run;
    short_run.t_end = 50.0;
    CHECK_THROWS_AS(evolve_time_domain(s.L, obs, short_run), SolverError);
}

TEST_CASE("weak-drive response: quadratic off resonance, saturating on resonance")
{
    System s = make_system(small_system(1));
    const FloquetSolver solver(s.L);
    const Matrix obs = emission_operator(s.basis);
    auto flux = [&](double omega_d, double Omega) {
        return (obs * solver.solve_converged(omega_d, Omega, 3, obs).average()).trace().real();
    };
    // Off resonance the flux is Omega^2 to high accuracy.
    const double off = flux(0.8, 1e-3) / (4 * flux(0.8, 5e-4));
    CHECK(std::abs(off - 1.0) <= 1e-4);

    // On a narrow line the two-level saturation correction is O(Omega^2),
    // so the deviation from the Omega^2 law drops about fourfold per halving.
    const double g1 = s.basis.gaps()(1);
    const double d1 = 1.0 - flux(g1, 2e-3) / (4 * flux(g1, 1e-3));
    const double d2 = 1.0 - flux(g1, 1e-3) / (4 * flux(g1, 5e-4));
    CHECK(d1 > 0.0);
    CHECK(d2 > 0.0);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.2));
}
