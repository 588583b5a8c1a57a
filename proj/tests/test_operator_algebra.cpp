#include "usc/errors.hpp"
#include "usc/operator_algebra.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

using namespace usc;

namespace {

Matrix random_matrix(Eigen::Index n, std::mt19937 &rng)
{
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

Matrix random_hermitian(Eigen::Index n, std::mt19937 &rng)
{
    const Matrix m = random_matrix(n, rng);
    return 0.5 * (m + m.adjoint());
}

} // namespace

TEST_CASE("annihilation operator entries")
{
    const QuantumOperator a1 = annihilation(1);
    CHECK(a1.size() == 2);
    CHECK(a1.data()(0, 1) == Complex(1.0));
    CHECK(a1.data()(0, 0) == Complex(0.0));
    CHECK(a1.data()(1, 0) == Complex(0.0));
    CHECK(a1.data()(1, 1) == Complex(0.0));

    const QuantumOperator a2 = annihilation(2);
    CHECK(a2.data()(1, 2).real() == doctest::Approx(1.41421356).epsilon(1e-8));
    CHECK(a2.dims() == Dims{3});

    const QuantumOperator a3 = annihilation(3);
    const Matrix n = (a3.adjoint() * a3).data();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(n(i, j) - Complex(i == j ? i : 0)) < 1e-15);
        }
    }
    CHECK_THROWS_AS(annihilation(0), ConfigError);
}

TEST_CASE("qubit operators follow the Pauli algebra")
{
    const Matrix sm = qubit_lowering().data();
    const Matrix sp = qubit_raising().data();
    CHECK(sm(0, 1) == Complex(1.0));   // sigma^- = |g><e| with |g> first
    CHECK(max_norm(sm * sp + sp * sm - Matrix::Identity(2, 2)) == 0.0);
    CHECK(max_norm(sigma_x().data() * sigma_x().data() - Matrix::Identity(2, 2)) == 0.0);
    const EigenDecomposition ez = eig_hermitian(sigma_z());
    CHECK(ez.values(0) == doctest::Approx(-1.0));
    CHECK(ez.values(1) == doctest::Approx(1.0));
    CHECK(sigma_z().data()(0, 0) == Complex(-1.0));
}

TEST_CASE("embed into a composite space")
{
    const Dims dims{3, 2};
    const QuantumOperator a = annihilation(2);
    const QuantumOperator z = embed(sigma_z(), 1, dims);
    const QuantumOperator n = embed(a.adjoint() * a, 0, dims);
    CHECK(max_norm((z * n - n * z).data()) == 0.0);
    CHECK(max_norm(embed(identity({2}), 1, dims).data() - Matrix::Identity(6, 6)) == 0.0);
    CHECK(std::abs(z.trace()) == 0.0);
    CHECK(z.dims() == dims);

    CHECK_THROWS(embed(sigma_z(), 2, dims));
    CHECK_THROWS(embed(annihilation(3), 0, dims));
}

TEST_CASE("embedded operators on disjoint slots commute exactly")
{
    std::mt19937 rng(7);
    const Dims dims{4, 2, 2};
    const QuantumOperator a(random_matrix(4, rng), {4});
    const QuantumOperator b(random_matrix(2, rng), {2});
    const QuantumOperator c(random_matrix(2, rng), {2});
    const QuantumOperator ea = embed(a, 0, dims), eb = embed(b, 1, dims), ec = embed(c, 2, dims);
    CHECK(max_norm((ea * eb).data() - (eb * ea).data()) == 0.0);
    CHECK(max_norm((eb * ec).data() - (ec * eb).data()) == 0.0);
    // Product of embeddings equals the Kronecker product in declared order.
    CHECK(max_norm((ea * eb * ec).data() - kron(kron(a.data(), b.data()), c.data())) == 0.0);
}

TEST_CASE("operator construction rejects inconsistent dims")
{
    CHECK_THROWS(QuantumOperator(Matrix::Zero(3, 3), {2}));
    CHECK_THROWS(QuantumOperator(Matrix::Zero(2, 3), {2}));
    CHECK_THROWS(QuantumOperator(Matrix::Zero(2, 2), {2}) * QuantumOperator(Matrix::Zero(3, 3), {3}));
}

TEST_CASE("eig_hermitian on small inputs")
{
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 2.0;
    d(2, 2) = 1.0;
    const EigenDecomposition e = eig_hermitian(QuantumOperator(d, {3}));
    CHECK(e.values(0) == doctest::Approx(0.0));
    CHECK(e.values(1) == doctest::Approx(1.0));
    CHECK(e.values(2) == doctest::Approx(2.0));

    const EigenDecomposition x = eig_hermitian(sigma_x());
    CHECK(x.values(0) == doctest::Approx(-1.0));
    CHECK(x.values(1) == doctest::Approx(1.0));
    const double s = 1.0 / std::sqrt(2.0);
    // Phase convention: first largest-magnitude component real and positive.
    CHECK(std::abs(x.vectors(0, 0) - Complex(s)) < 1e-12);
    CHECK(std::abs(x.vectors(1, 0) - Complex(-s)) < 1e-12);
    CHECK(std::abs(x.vectors(0, 1) - Complex(s)) < 1e-12);
    CHECK(std::abs(x.vectors(1, 1) - Complex(s)) < 1e-12);
}

TEST_CASE("eig_hermitian invariants on random Hermitian matrices")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::Index n = 20 + 7 * trial;
        const QuantumOperator h(random_hermitian(n, rng), {static_cast<int>(n)});
        const EigenDecomposition e = eig_hermitian(h);
        const Matrix &v = e.vectors;
        for (Eigen::Index k = 1; k < n; ++k) CHECK(e.values(k) >= e.values(k - 1));
        CHECK(max_norm(v.adjoint() * v - Matrix::Identity(n, n)) <= 1e-10);
        const double scale = std::max(1.0, h.max_norm());
        CHECK(max_norm(h.data() * v - v * e.values.cast<Complex>().asDiagonal()) <= 1e-10 * scale);
        CHECK(max_norm(v * e.values.cast<Complex>().asDiagonal() * v.adjoint() - h.data()) <= 1e-10 * scale);
        // Trace is basis independent.
        const Matrix a = random_matrix(n, rng);
        CHECK(std::abs((v.adjoint() * a * v).trace() - a.trace()) <= 1e-10 * max_norm(a) * static_cast<double>(n));

        const EigenDecomposition again = eig_hermitian(h);
        CHECK((again.values.array() == e.values.array()).all());
        CHECK((again.vectors.array() == e.vectors.array()).all());
    }
}

TEST_CASE("eig_hermitian handles degenerate clusters")
{
    // diag(1, 1, 3) rotated by a fixed unitary: the degenerate pair must come
    // back orthonormal and reproduce the matrix.
    std::mt19937 rng(3);
    const Eigen::HouseholderQR<Matrix> qr(random_matrix(3, rng));
    const Matrix q = qr.householderQ();
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1.0;
    d(2, 2) = 3.0;
    const Matrix h = q * d * q.adjoint();
    const EigenDecomposition e = eig_hermitian(QuantumOperator(0.5 * (h + h.adjoint()), {3}));
    CHECK(max_norm(e.vectors.adjoint() * e.vectors - Matrix::Identity(3, 3)) <= 1e-12);
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.values(1) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian rejects non-Hermitian input")
{
    CHECK_THROWS_AS(eig_hermitian(qubit_lowering()), SolverError);
}

TEST_CASE("Rabi spectrum at weak coupling matches second-order perturbation theory")
{
    // H = a^dag a + s+ s- - lambda (a + a^dag) sigma_x, built directly with kron.
    // Resonant degenerate perturbation theory: E0 = -l^2/2, E(1,+-) = 1 - l^2/2 +- l.
    const int n_max = 10;
    const double lambda = 0.02;
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix sm = Matrix::Zero(2, 2);
    sm(0, 1) = 1.0;
    const Matrix i2 = Matrix::Identity(2, 2);
    const Matrix ip = Matrix::Identity(n_max + 1, n_max + 1);
    const Matrix h = kron(a.adjoint() * a, i2) + kron(ip, sm.adjoint() * sm)
                     - lambda * kron(a + a.adjoint(), sm + sm.adjoint());
    const EigenDecomposition e = eig_hermitian(QuantumOperator(h, {n_max + 1, 2}));
    const double l2 = lambda * lambda;
    CHECK(std::abs(e.values(0) - (-l2 / 2)) < 1e-4);
    CHECK(std::abs(e.values(1) - (1 - l2 / 2 - lambda)) < 1e-4);
    CHECK(std::abs(e.values(2) - (1 - l2 / 2 + lambda)) < 1e-4);
    // Split symmetric about 1 with splitting ~ 2 lambda.
    const double g1 = e.values(1) - e.values(0), g2 = e.values(2) - e.values(0);
    CHECK(std::abs(0.5 * (g1 + g2) - 1.0) < 1e-4);
    CHECK(std::abs((g2 - g1) - 2 * lambda) < 1e-4);
}

TEST_CASE("solve_linear")
{
    Vector b(3);
    b << Complex(1, 2), Complex(-3, 0.5), Complex(0, 4);
    CHECK(max_norm(solve_linear(Matrix::Identity(3, 3), b) - b) == 0.0);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 4.0;
    Vector r(2);
    r << 2.0, 8.0;
    const Vector x = solve_linear(d, r);
    CHECK(std::abs(x(0) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(x(1) - Complex(2.0)) < 1e-15);

    std::mt19937 rng(5);
    const Matrix big = random_matrix(50, rng) + 20.0 * Matrix::Identity(50, 50);
    Vector rhs = random_matrix(50, rng).col(0);
    const Vector sol = solve_linear(big, rhs);
    CHECK((big * sol - rhs).norm() <= 1e-10 * (big.norm() * sol.norm() + rhs.norm()));

    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(solve_linear(singular, r), SolverError);
}

TEST_CASE("gmres agrees with a direct solve")
{
    std::mt19937 rng(9);
    const Matrix a = random_matrix(60, rng) + 15.0 * Matrix::Identity(60, 60);
    const Vector b = random_matrix(60, rng).col(0);
    const GmresResult g = gmres([&](const Vector &v) { return Vector(a * v); }, b, Vector::Zero(60), 1e-13, 20, 500);
    CHECK(g.converged);
    CHECK((g.x - solve_linear(a, b)).norm() <= 1e-10 * g.x.norm());
}

TEST_CASE("ket labels map qubit-first notation onto the internal order")
{
    const Dims dims{3, 2, 2};
    const std::array<int, 3> egz{0, 1, 0};
    const Vector k = ket_from_label(dims, "eg", 0);
    CHECK(std::abs(k(basis_index(dims, egz)) - Complex(1.0)) == 0.0);
    CHECK(basis_index(dims, egz) == (0 * 2 + 1) * 2 + 0);
    const std::array<int, 3> gg1{1, 0, 0};
    CHECK(max_norm(ket_from_label(dims, "gg", 1) - product_ket(dims, gg1)) == 0.0);
}
