#include "usc/dressed.hpp"
#include "usc/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <algorithm>
#include <sstream>

using namespace usc;

namespace {

constexpr double kPi = std::numbers::pi;

SystemParams params(double lambda, double theta, int n_qubits = 2, int n_max = 10)
{
    SystemParams p;
    p.lambda = lambda;
    p.theta = theta;
    p.n_qubits = n_qubits;
    p.n_max = n_max;
    return p;
}

} // namespace

TEST_CASE("without coupling the dressed operators are the bare ladder operators")
{
    SystemParams p = params(0.0, kPi / 2, 2, 6);
    p.omega_c = 0.8;
    p.level_cut = kAllLevels;
    const DressedBasis b = diagonalize(p);
    const Matrix &u = b.states;
    const BareOperators ops = bare_operators(p);
    CHECK(max_norm(b.x_plus - u.adjoint() * ops.a.data() * u) <= 1e-12);
    for (int j = 0; j < 2; ++j) CHECK(max_norm(b.d_plus[j] - u.adjoint() * ops.lowering[j].data() * u) <= 1e-12);
}

TEST_CASE("cascade element phi1 <-> phi3 follows parity")
{
    const DressedBasis even = diagonalize(params(0.2, kPi / 2));
    const DressedBasis mixed = diagonalize(params(0.2, kPi / 6));
    CHECK(std::abs(even.position(1, 3)) <= 1e-10);
    CHECK(std::abs(mixed.position(1, 3)) >= 1e-3);
    // At the transverse point phi1 and phi3 share odd parity.
    CHECK(even.parity_expectation(1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(even.parity_expectation(3) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(even.parity_expectation(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bright doublet overlaps")
{
    const BrightDoubletOverlap mid = bright_doublet_overlaps(diagonalize(params(0.1, kPi / 2)));
    CHECK_FALSE(mid.degenerate);
    CHECK(mid.phi1 >= 0.99);
    CHECK(mid.phi3 >= 0.99);
    const BrightDoubletOverlap weak = bright_doublet_overlaps(diagonalize(params(0.01, kPi / 2)));
    CHECK(weak.phi1 >= 0.999);
    CHECK(weak.phi3 >= 0.999);
    CHECK(bright_doublet_overlaps(diagonalize(params(0.0, kPi / 2))).degenerate);
    CHECK_THROWS_AS(bright_doublet_overlaps(diagonalize(params(0.1, kPi / 2, 1))), std::invalid_argument);
}

TEST_CASE("transition table")
{
    const DressedBasis b = diagonalize(params(0.1, kPi / 2));
    const TransitionTable t = transition_table(b);
    int expected = 0;
    for (int i = 0; i < b.level_cut; ++i)
        for (int j = i + 1; j < b.level_cut; ++j) expected += b.energies(j) - b.energies(i) > b.deg_tol ? 1 : 0;
    CHECK(static_cast<int>(t.size()) == expected);
    for (const Transition &tr : t) {
        CHECK(tr.upper > tr.lower);
        CHECK(tr.frequency > 0.0);
        // Parity selection rule: X only links opposite parities.
        const double pp = b.parity_expectation(tr.lower) * b.parity_expectation(tr.upper);
        if (pp > 0.5) {
            CHECK(tr.abs_x <= 1e-10);
            CHECK(tr.abs_d1 <= 1e-10);
        }
        if (tr.lower == 1 && tr.upper == 3) CHECK(tr.abs_x <= 1e-10);
    }
    std::ostringstream os;
    write_transition_csv(os, t);
    const std::string csv = os.str();
    CHECK(csv.substr(0, csv.find('\n')) == "n,m,freq,abs_x,abs_d1,abs_d2");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == expected + 1);
}

TEST_CASE("jump operators only lower the dressed energy")
{
    for (double theta : {kPi / 2, kPi / 6}) {
        const DressedBasis b = diagonalize(params(0.3, theta));
        const Eigen::Index m = b.level_cut;
        for (Eigen::Index c = 0; c < m; ++c)
            for (Eigen::Index r = c; r < m; ++r) {
                CHECK(b.x_plus(r, c) == Complex(0.0));
                CHECK(b.d_plus[0](r, c) == Complex(0.0));
                CHECK(b.d_plus[1](r, c) == Complex(0.0));
            }
        // The dressed vacuum is dark for the output field despite holding photons.
        CHECK(b.x_plus.col(0).norm() == 0.0);
        const BareOperators ops = bare_operators(b.params);
        const Vector g = b.states.col(0);
        CHECK(g.dot(ops.a.adjoint().data() * ops.a.data() * g).real() > 1e-3);
    }
}

TEST_CASE("positive and negative frequency parts rebuild the dressed operator")
{
    for (double theta : {kPi / 2, kPi / 6}) {
        const DressedBasis b = diagonalize(params(0.2, theta));
        Matrix full = b.x_plus + b.x_plus.adjoint();
        Matrix ref = b.position;
        for (Eigen::Index i = 0; i < b.level_cut; ++i)
            for (Eigen::Index j = 0; j < b.level_cut; ++j)
                if (std::abs(b.energies(i) - b.energies(j)) <= b.deg_tol) ref(i, j) = full(i, j) = 0.0;
        CHECK(max_norm(full - ref) <= 1e-10);
    }
}

TEST_CASE("positive_frequency_part respects the degeneracy tolerance")
{
    RealVector e(3);
    e << 0.0, 1e-12, 1.0;
    Matrix op = Matrix::Ones(3, 3);
    const Matrix p = positive_frequency_part(op, e, 1e-9);
    CHECK(p(0, 1) == Complex(0.0));
    CHECK(p(0, 2) == Complex(1.0));
    CHECK(p(1, 2) == Complex(1.0));
    CHECK(p(1, 0) == Complex(0.0));
}

TEST_CASE("dressed energies vary continuously with lambda")
{
    for (double lambda : {0.05, 0.15, 0.25}) {
        const DressedBasis a = diagonalize(params(lambda, kPi / 6));
        const DressedBasis b = diagonalize(params(lambda + 1e-4, kPi / 6));
        CHECK((a.gaps() - b.gaps()).cwiseAbs().maxCoeff() <= 1e-2);
    }
}

TEST_CASE("spectrum is symmetric under lambda -> -lambda")
{
    // a -> -a maps H0(lambda) onto H0(-lambda).
    const SystemParams p = params(0.25, kPi / 6);
    SystemParams q = p;
    q.lambda = -p.lambda;
    const EigenDecomposition ep = eig_hermitian(build_h0(p));
    const EigenDecomposition eq = eig_hermitian(build_h0(q));
    CHECK((ep.values - eq.values).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("level cut larger than the space is rejected")
{
    SystemParams p = params(0.1, kPi / 2, 1, 5);
    p.level_cut = 13;
    CHECK_THROWS_AS(diagonalize(p), ConfigError);
    p.level_cut = 12;
    CHECK(diagonalize(p).level_cut == 12);
}
