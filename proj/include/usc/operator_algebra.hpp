#pragma once

// Dense complex operator algebra for the resonator + qubits composite space.
//
// Storage: Eigen column-major dense matrices throughout.
// Subsystem order: photon (dim n_max+1) first, then one dim-2 factor per qubit.
// Qubit basis order: (|g>, |e>), so sigma^- = |g><e| has its single 1 at (0, 1).
// Composite index of |n, q1, q2> is (n * 2 + q1) * 2 + q2.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace usc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

inline constexpr Complex kI{0.0, 1.0};

/// Largest absolute entry; 0 for empty matrices.
double max_norm(const Matrix &m);

/// Kronecker product a (x) b, with b the fastest-varying factor.
Matrix kron(const Matrix &a, const Matrix &b);

/// Square dense operator tagged with the subsystem dimensions it acts on.
class QuantumOperator {
public:
    QuantumOperator() = default;
    QuantumOperator(Matrix data, Dims dims);

    const Matrix &data() const noexcept { return data_; }
    const Dims &dims() const noexcept { return dims_; }
    Eigen::Index size() const noexcept { return data_.rows(); }

    QuantumOperator adjoint() const { return {data_.adjoint(), dims_}; }
    double max_norm() const { return usc::max_norm(data_); }
    /// ||A - A^dag||_max <= tol * max(||A||_max, tiny).
    bool is_hermitian(double tol = 1e-12) const;
    Complex trace() const { return data_.trace(); }

    QuantumOperator &operator+=(const QuantumOperator &rhs);
    QuantumOperator &operator-=(const QuantumOperator &rhs);
    QuantumOperator &operator*=(Complex s);

    friend QuantumOperator operator+(QuantumOperator lhs, const QuantumOperator &rhs) { return lhs += rhs; }
    friend QuantumOperator operator-(QuantumOperator lhs, const QuantumOperator &rhs) { return lhs -= rhs; }
    friend QuantumOperator operator*(QuantumOperator lhs, Complex s) { return lhs *= s; }
    friend QuantumOperator operator*(Complex s, QuantumOperator rhs) { return rhs *= s; }
    friend QuantumOperator operator*(const QuantumOperator &lhs, const QuantumOperator &rhs);

private:
    Matrix data_;
    Dims dims_;
};

/// Eigenpairs of a Hermitian operator: values ascending, column k of `vectors` pairs with values[k].
struct EigenDecomposition {
    RealVector values;
    Matrix vectors;
};

QuantumOperator identity(const Dims &dims);

/// Truncated bosonic lowering operator on |0>..|n_max>. Throws ConfigError for n_max < 1.
QuantumOperator annihilation(int n_max);

/// sigma^- = |g><e| in the (|g>, |e>) basis.
QuantumOperator qubit_lowering();
QuantumOperator qubit_raising();
/// sigma^- + sigma^+
QuantumOperator sigma_x();
/// sigma^+ sigma^- - sigma^- sigma^+ ; -1 on |g>, +1 on |e>.
QuantumOperator sigma_z();

/// Lifts `op` into slot `slot` of the composite space `dims` (identity elsewhere).
QuantumOperator embed(const QuantumOperator &op, std::size_t slot, const Dims &dims);

/// Hermitian eigendecomposition with deterministic ordering and phases.
///
/// Values ascend; ties keep the backend column order. Vectors inside a
/// degenerate cluster (gap <= degeneracy_tol * max(1, ||H||)) are
/// re-orthonormalized, and each vector is rotated so its largest-magnitude
/// component (first one, within a relative 1e-8) is real and positive.
EigenDecomposition eig_hermitian(const QuantumOperator &h, double degeneracy_tol = 1e-10);

/// Solves a x = b with partial-pivot LU. Throws SolverError on (numerically)
/// singular `a`, reporting the reciprocal condition estimate.
Vector solve_linear(const Matrix &a, const Vector &b);

struct GmresResult {
    Vector x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
/// Stops when ||b - A x|| <= tol * ||b||.
GmresResult gmres(const std::function<Vector(const Vector &)> &apply, const Vector &b, Vector x0,
                  double tol, int restart = 40, int max_iterations = 400);

/// Flat index of the product state with the given per-subsystem levels.
Eigen::Index basis_index(const Dims &dims, std::span<const int> levels);

/// |levels> as a unit vector in the composite space.
Vector product_ket(const Dims &dims, std::span<const int> levels);

/// Converts a ket written qubits-first, photon-last (e.g. |e,g,0>) into the
/// internal photon-first basis. `qubits` holds one 'g'/'e' per qubit.
Vector ket_from_label(const Dims &dims, std::string_view qubits, int photons);

} // namespace usc
