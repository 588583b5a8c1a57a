#include "usc/dressed.hpp"

#include "usc/csv.hpp"
#include "usc/errors.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace usc {

RealVector DressedBasis::gaps() const
{
    RealVector g = energies.head(level_cut);
    g.array() -= energies(0);
    return g;
}

double DressedBasis::parity_expectation(int n) const
{
    const QuantumOperator pi = parity_operator(params);
    return pi.data().diagonal().real().dot(states.col(n).cwiseAbs2());
}

Matrix positive_frequency_part(const Matrix &dressed_op, const RealVector &energies, double deg_tol)
{
    const Eigen::Index m = dressed_op.rows();
    Matrix out = Matrix::Zero(m, m);
    for (Eigen::Index col = 0; col < m; ++col) {
        for (Eigen::Index row = 0; row < col; ++row) {
            if (energies(col) > energies(row) + deg_tol) {
                out(row, col) = dressed_op(row, col);
            }
        }
    }
    return out;
}

DressedBasis diagonalize(const SystemParams &p, double deg_tol)
{
    p.validate();
    const int cut = p.levels();
    if (cut > p.hilbert_dim()) {
        throw ConfigError("level_cut", "exceeds the Hilbert-space dimension");
    }

    const EigenDecomposition eig = eig_hermitian(build_h0(p));
    const BareOperators ops = bare_operators(p);

    DressedBasis basis;
    basis.params = p;
    basis.energies = eig.values;
    basis.states = eig.vectors;
    basis.level_cut = cut;
    basis.deg_tol = deg_tol;

    const auto kept = eig.vectors.leftCols(cut);
    auto project = [&](const QuantumOperator &op) -> Matrix { return kept.adjoint() * op.data() * kept; };
    const RealVector energies = eig.values.head(cut);

    basis.position = project(ops.position);
    basis.x_plus = positive_frequency_part(basis.position, energies, deg_tol);
    for (const QuantumOperator &sx : ops.qubit_x) {
        basis.qubit_x.push_back(project(sx));
        basis.d_plus.push_back(positive_frequency_part(basis.qubit_x.back(), energies, deg_tol));
    }
    basis.drive = project(build_drive_operator(p));
    return basis;
}

BrightDoubletOverlap bright_doublet_overlaps(const DressedBasis &basis)
{
    if (basis.params.n_qubits != 2) {
        throw std::invalid_argument("bright_doublet_overlaps: requires two qubits");
    }
    BrightDoubletOverlap out;
    if (std::abs(basis.energies(3) - basis.energies(1)) <= basis.deg_tol) {
        out.degenerate = true;
        return out;
    }
    const Dims dims = basis.params.dims();
    const Vector symmetric = 0.5 * (ket_from_label(dims, "eg", 0) + ket_from_label(dims, "ge", 0));
    const Vector photon = ket_from_label(dims, "gg", 1) / std::sqrt(2.0);
    out.phi1 = std::norm((symmetric + photon).dot(basis.states.col(1)));
    out.phi3 = std::norm((symmetric - photon).dot(basis.states.col(3)));
    return out;
}

TransitionTable transition_table(const DressedBasis &basis)
{
    TransitionTable table;
    const int m = basis.level_cut;
    for (int lower = 0; lower < m; ++lower) {
        for (int upper = lower + 1; upper < m; ++upper) {
            const double freq = basis.energies(upper) - basis.energies(lower);
            if (freq <= basis.deg_tol) {
                continue;
            }
            Transition t;
            t.lower = lower;
            t.upper = upper;
            t.frequency = freq;
            t.abs_x = std::abs(basis.position(lower, upper));
            if (!basis.qubit_x.empty()) {
                t.abs_d1 = std::abs(basis.qubit_x[0](lower, upper));
            }
            if (basis.qubit_x.size() > 1) {
                t.abs_d2 = std::abs(basis.qubit_x[1](lower, upper));
            }
            table.push_back(t);
        }
    }
    return table;
}

void write_transition_csv(std::ostream &os, const TransitionTable &table)
{
    os << "n,m,freq,abs_x,abs_d1,abs_d2\n";
    for (const Transition &t : table) {
        os << t.lower << ',' << t.upper << ',' << format_double(t.frequency) << ','
           << format_double(t.abs_x) << ',' << format_double(t.abs_d1) << ',' << format_double(t.abs_d2)
           << '\n';
    }
}

} // namespace usc
