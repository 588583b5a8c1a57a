#pragma once

// Dressed (H0 eigen-) basis and the positive-frequency jump operators built in it.

#include "usc/model.hpp"

#include <iosfwd>
#include <vector>

namespace usc {

inline constexpr double kDefaultDegeneracyTol = 1e-9;

/// Energy-ordered eigenbasis of H0 plus the dressed operators restricted to
/// the lowest `level_cut` levels. All M x M matrices are expressed in the
/// dressed basis (row/column n <-> |phi_n>).
struct DressedBasis {
    SystemParams params;
    RealVector energies;              ///< all eigenvalues, ascending
    Matrix states;                    ///< columns |phi_n> in the bare basis
    int level_cut = 0;                ///< M
    double deg_tol = kDefaultDegeneracyTol;
    Matrix x_plus;                    ///< sum_{E_m > E_n} <phi_n|a + a^dag|phi_m> |phi_n><phi_m|
    std::vector<Matrix> d_plus;       ///< same construction from sigma^x_j, one per qubit
    Matrix position;                  ///< full <phi_n|a + a^dag|phi_m>, M x M
    std::vector<Matrix> qubit_x;      ///< full <phi_n|sigma^x_j|phi_m>, M x M
    Matrix drive;                     ///< <phi_n|V|phi_m>, M x M

    /// E_n - E_0 for the retained levels.
    RealVector gaps() const;
    /// <phi_n|Pi|phi_n>; +-1 when parity is a good quantum number.
    double parity_expectation(int n) const;
};

/// Diagonalizes H0 and builds x_plus, d_plus and the dressed drive.
DressedBasis diagonalize(const SystemParams &p, double deg_tol = kDefaultDegeneracyTol);

/// Keeps only transitions with E_m > E_n + deg_tol (strictly upper triangular).
Matrix positive_frequency_part(const Matrix &dressed_op, const RealVector &energies, double deg_tol);

struct BrightDoubletOverlap {
    bool degenerate = false;   ///< E1..E3 coincide; overlaps are not meaningful
    double phi1 = 0.0;         ///< |<approx phi_1|phi_1>|^2
    double phi3 = 0.0;         ///< |<approx phi_3|phi_3>|^2
};

/// Overlap of levels 1 and 3 with the resonant Tavis-Cummings doublet
/// (|e,g,0> + |g,e,0>)/2 +- |g,g,1>/sqrt(2). Requires two qubits.
BrightDoubletOverlap bright_doublet_overlaps(const DressedBasis &basis);

struct Transition {
    int lower = 0;
    int upper = 0;
    double frequency = 0.0;
    double abs_x = 0.0;
    double abs_d1 = 0.0;
    double abs_d2 = 0.0;
};

using TransitionTable = std::vector<Transition>;

/// All retained pairs upper > lower with E_upper - E_lower > deg_tol, in index order.
TransitionTable transition_table(const DressedBasis &basis);

/// CSV with header n,m,freq,abs_x,abs_d1,abs_d2.
void write_transition_csv(std::ostream &os, const TransitionTable &table);

} // namespace usc
