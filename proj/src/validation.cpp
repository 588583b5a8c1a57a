#include "usc/validation.hpp"

#include "usc/csv.hpp"
#include "usc/sweep.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace usc {

namespace {

std::string show(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

Matrix at_time(const FloquetSteadyState &s, double phase)
{
    Matrix rho = Matrix::Zero(s.average().rows(), s.average().cols());
    for (int k = -s.K; k <= s.K; ++k) {
        rho += std::exp(Complex(0.0, k * phase)) * s.harmonic(k);
    }
    return rho;
}

} // namespace

std::vector<ValidationCheck> run_validation(const SystemParams &base, int threads)
{
    std::vector<ValidationCheck> out;
    auto add = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };

    for (double theta : {std::numbers::pi / 2, std::numbers::pi / 6}) {
        SystemParams p = base;
        p.theta = theta;
        p.n_qubits = 2;
        const std::string tag = theta == std::numbers::pi / 2 ? " [theta=pi/2]" : " [theta=pi/6]";
        const DressedBasis basis = diagonalize(p);
        const LiouvillianSet L = build_liouvillian(basis, p);
        const FloquetSolver solver(L);
        const double omega_d = basis.energies(1) - basis.energies(0);
        const FloquetSteadyState s = solver.solve(omega_d, p.Omega, kDefaultHarmonics);

        // Trace: generator columns and every harmonic.
        const Eigen::Index m = basis.level_cut;
        Vector tr = Vector::Zero(m * m);
        for (Eigen::Index i = 0; i < m; ++i) tr(i + m * i) = 1.0;
        double trace_err = (tr.transpose() * L.l0).cwiseAbs().maxCoeff();
        trace_err = std::max(trace_err, (tr.transpose() * L.lv).cwiseAbs().maxCoeff());
        trace_err = std::max(trace_err, std::abs(s.average().trace() - 1.0));
        for (int k = 1; k <= s.K; ++k) {
            trace_err = std::max({trace_err, std::abs(s.harmonic(k).trace()), std::abs(s.harmonic(-k).trace())});
        }
        add("trace preservation" + tag, trace_err <= 1e-8, "max deviation " + show(trace_err));

        double herm = (s.average() - s.average().adjoint()).cwiseAbs().maxCoeff();
        for (int k = 1; k <= s.K; ++k) {
            herm = std::max(herm, (s.harmonic(-k) - s.harmonic(k).adjoint()).cwiseAbs().maxCoeff());
        }
        add("hermiticity" + tag, herm <= 1e-10, "max |rho - rho^dag| " + show(herm));

        double lowest = 1.0;
        for (int j = 0; j < 16; ++j) {
            const Matrix rho = at_time(s, 2.0 * std::numbers::pi * j / 16.0);
            const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
            lowest = std::min(lowest, es.eigenvalues().minCoeff());
        }
        add("positivity" + tag, lowest >= -1e-6, "min eigenvalue over one period " + show(lowest));

        double ground = basis.x_plus.col(0).norm();
        for (const Matrix &d : basis.d_plus) ground = std::max(ground, d.col(0).norm());
        add("jump operators annihilate |phi_0>" + tag, ground <= 1e-12, "|X+ phi_0| " + show(ground));

        const FloquetSteadyState still = solver.solve(omega_d, 0.0, 1);
        Matrix target = Matrix::Zero(m, m);
        target(0, 0) = 1.0;
        const double fixed = (still.average() - target).cwiseAbs().maxCoeff();
        add("Omega = 0 fixed point is |phi_0><phi_0|" + tag, fixed <= 1e-10, "max deviation " + show(fixed));

        const Matrix emission = emission_operator(basis);
        double worst = 0.0;
        for (double w : {omega_d, basis.energies(3) - basis.energies(0), 0.8, 1.0, 1.2}) {
            const double full = (emission * solver.solve(w, p.Omega, 3).average()).trace().real();
            const double half = (emission * solver.solve(w, p.Omega / 2, 3).average()).trace().real();
            worst = std::max(worst, std::abs(full / half / 4.0 - 1.0));
        }
        add("Omega^2 linear response" + tag, worst <= 0.01, "max |n(Omega)/(4 n(Omega/2)) - 1| " + show(worst));
    }

    SystemParams sym = base;
    sym.theta = std::numbers::pi / 2;
    const double defect = parity_defect(sym);
    add("parity commutes with H0 at theta=pi/2", defect <= 1e-12, "defect " + show(defect));
    SystemParams broken = base;
    broken.theta = std::numbers::pi / 6;
    const double broken_defect = parity_defect(broken);
    add("parity broken at theta=pi/6", broken_defect > 1e-6, "defect " + show(broken_defect));

    EvalOptions eval;
    eval.threads = threads;
    const RadianceEvaluator ev(base, eval);
    const std::vector<double> ws{ev.gap(1), ev.gap(3), ev.one_qubit_gap(1), ev.one_qubit_gap(2), 1.0};
    std::vector<double> rs;
    for (const RadianceSample &smp : ev.curve(ws)) rs.push_back(smp.point.r);
    const ConvergenceCheck c = check_truncation_at(base, eval, ws, rs);
    add("n_max -> n_max + 4 stability of R", c.passed,
        "max |dR| " + show(c.max_delta) + " over " + std::to_string(c.points) + " points");
    return out;
}

} // namespace usc
