#include "usc/operator_algebra.hpp"

#include "usc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace usc {

namespace {

Eigen::Index product(const Dims &dims)
{
    return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1},
                           [](Eigen::Index acc, int d) { return acc * d; });
}

void require_same_dims(const QuantumOperator &a, const QuantumOperator &b)
{
    if (a.dims() != b.dims()) {
        throw std::invalid_argument("QuantumOperator: mismatched subsystem dimensions");
    }
}

} // namespace

double max_norm(const Matrix &m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix kron(const Matrix &a, const Matrix &b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

QuantumOperator::QuantumOperator(Matrix data, Dims dims)
    : data_(std::move(data)), dims_(std::move(dims))
{
    if (data_.rows() != data_.cols()) {
        throw std::invalid_argument("QuantumOperator: matrix is not square");
    }
    if (dims_.empty() || std::any_of(dims_.begin(), dims_.end(), [](int d) { return d < 1; })) {
        throw std::invalid_argument("QuantumOperator: subsystem dimensions must be positive");
    }
    if (product(dims_) != data_.rows()) {
        throw std::invalid_argument("QuantumOperator: product of dims (" + std::to_string(product(dims_))
                                    + ") does not match side length " + std::to_string(data_.rows()));
    }
}

bool QuantumOperator::is_hermitian(double tol) const
{
    const double scale = std::max(max_norm(), 1e-300);
    return usc::max_norm(data_ - data_.adjoint()) <= tol * scale;
}

QuantumOperator &QuantumOperator::operator+=(const QuantumOperator &rhs)
{
    require_same_dims(*this, rhs);
    data_ += rhs.data_;
    return *this;
}

QuantumOperator &QuantumOperator::operator-=(const QuantumOperator &rhs)
{
    require_same_dims(*this, rhs);
    data_ -= rhs.data_;
    return *this;
}

QuantumOperator &QuantumOperator::operator*=(Complex s)
{
    data_ *= s;
    return *this;
}

QuantumOperator operator*(const QuantumOperator &lhs, const QuantumOperator &rhs)
{
    require_same_dims(lhs, rhs);
    return {lhs.data_ * rhs.data_, lhs.dims_};
}

QuantumOperator identity(const Dims &dims)
{
    const Eigen::Index n = product(dims);
    return {Matrix::Identity(n, n), dims};
}

QuantumOperator annihilation(int n_max)
{
    if (n_max < 1) {
        throw ConfigError("n_max", "photon truncation must be >= 1");
    }
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return {std::move(a), Dims{n_max + 1}};
}

QuantumOperator qubit_lowering()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return {std::move(s), Dims{2}};
}

QuantumOperator qubit_raising()
{
    return qubit_lowering().adjoint();
}

QuantumOperator sigma_x()
{
    return qubit_lowering() + qubit_raising();
}

QuantumOperator sigma_z()
{
    const QuantumOperator lo = qubit_lowering();
    const QuantumOperator up = qubit_raising();
    return up * lo - lo * up;
}

QuantumOperator embed(const QuantumOperator &op, std::size_t slot, const Dims &dims)
{
    if (slot >= dims.size()) {
        throw std::out_of_range("embed: slot " + std::to_string(slot) + " out of range for "
                                + std::to_string(dims.size()) + " subsystems");
    }
    if (op.size() != dims[slot]) {
        throw std::invalid_argument("embed: operator dimension " + std::to_string(op.size())
                                    + " does not match subsystem dimension " + std::to_string(dims[slot]));
    }
    Eigen::Index before = 1;
    for (std::size_t i = 0; i < slot; ++i) {
        before *= dims[i];
    }
    Eigen::Index after = 1;
    for (std::size_t i = slot + 1; i < dims.size(); ++i) {
        after *= dims[i];
    }
    Matrix out = kron(kron(Matrix::Identity(before, before), op.data()), Matrix::Identity(after, after));
    return {std::move(out), dims};
}

EigenDecomposition eig_hermitian(const QuantumOperator &h, double degeneracy_tol)
{
    if (!h.is_hermitian(1e-12)) {
        throw SolverError("eig_hermitian: input is not Hermitian within 1e-12");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.data());
    if (solver.info() != Eigen::Success) {
        throw SolverError("eig_hermitian: eigensolver failed to converge");
    }
    const Eigen::Index n = h.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const RealVector &raw = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return raw(a) < raw(b); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = raw(order[static_cast<std::size_t>(k)]);
        out.vectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    }

    // Modified Gram-Schmidt inside each degenerate cluster.
    const double gap_tol = degeneracy_tol * std::max(1.0, h.max_norm());
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index stop = start + 1;
        while (stop < n && out.values(stop) - out.values(stop - 1) <= gap_tol) {
            ++stop;
        }
        for (Eigen::Index k = start; k < stop; ++k) {
            for (Eigen::Index j = start; j < k; ++j) {
                const Complex proj = out.vectors.col(j).dot(out.vectors.col(k));
                out.vectors.col(k) -= proj * out.vectors.col(j);
            }
            out.vectors.col(k).normalize();
        }
        start = stop;
    }

    for (Eigen::Index k = 0; k < n; ++k) {
        auto v = out.vectors.col(k);
        const double largest = v.cwiseAbs().maxCoeff();
        Eigen::Index pivot = 0;
        while (std::abs(v(pivot)) < largest * (1.0 - 1e-8)) {
            ++pivot;
        }
        const Complex phase = std::conj(v(pivot)) / std::abs(v(pivot));
        v *= phase;
        v(pivot) = Complex(v(pivot).real(), 0.0);
    }
    return out;
}

Vector solve_linear(const Matrix &a, const Vector &b)
{
    if (a.rows() != a.cols() || a.rows() != b.size()) {
        throw std::invalid_argument("solve_linear: non-conformable system");
    }
    Eigen::PartialPivLU<Matrix> lu(a);
    // rcond() reports 1 for an exactly zero pivot, so check the diagonal too.
    const double rcond = lu.rcond();
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(rcond > 1e-15) || !(min_pivot > 0.0)) {
        throw SolverError("solve_linear: matrix is singular or numerically rank-deficient (rcond ~ "
                          + std::to_string(rcond) + ")");
    }
    Vector x = lu.solve(b);
    const double opnorm = a.cwiseAbs().rowwise().sum().maxCoeff();
    const double residual = (a * x - b).lpNorm<Eigen::Infinity>();
    if (!x.allFinite() || !(residual <= 1e-10 * (opnorm * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>()))) {
        throw SolverError("solve_linear: residual " + std::to_string(residual)
                          + " above tolerance (rcond ~ " + std::to_string(rcond) + ")");
    }
    return x;
}

GmresResult gmres(const std::function<Vector(const Vector &)> &apply, const Vector &b, Vector x0,
                  double tol, int restart, int max_iterations)
{
    GmresResult out;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        out.x = Vector::Zero(b.size());
        out.converged = true;
        return out;
    }
    out.x = x0.size() == b.size() ? std::move(x0) : Vector::Zero(b.size());
    const Eigen::Index n = b.size();
    const int m = std::max(1, restart);

    while (out.iterations < max_iterations) {
        Vector r = b - apply(out.x);
        double beta = r.norm();
        out.relative_residual = beta / bnorm;
        if (out.relative_residual <= tol) {
            out.converged = true;
            return out;
        }
        Matrix basis(n, m + 1);
        Matrix hess = Matrix::Zero(m + 1, m);
        std::vector<double> cs(static_cast<std::size_t>(m));
        std::vector<Complex> sn(static_cast<std::size_t>(m));
        Vector g = Vector::Zero(m + 1);
        g(0) = beta;
        basis.col(0) = r / beta;

        int j = 0;
        for (; j < m && out.iterations < max_iterations; ++j) {
            ++out.iterations;
            Vector w = apply(basis.col(j));
            for (int i = 0; i <= j; ++i) {
                hess(i, j) = basis.col(i).dot(w);
                w -= hess(i, j) * basis.col(i);
            }
            hess(j + 1, j) = w.norm();
            if (std::abs(hess(j + 1, j)) > 0.0) {
                basis.col(j + 1) = w / hess(j + 1, j);
            }
            for (int i = 0; i < j; ++i) {
                const Complex t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
                hess(i + 1, j) = -std::conj(sn[i]) * hess(i, j) + cs[i] * hess(i + 1, j);
                hess(i, j) = t;
            }
            const double a = std::abs(hess(j, j));
            const double c = std::abs(hess(j + 1, j));
            const double rr = std::hypot(a, c);
            if (rr == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else if (a == 0.0) {
                cs[j] = 0.0;
                sn[j] = std::conj(hess(j + 1, j)) / c;
            } else {
                cs[j] = a / rr;
                sn[j] = (hess(j, j) / a) * std::conj(hess(j + 1, j)) / rr;
            }
            hess(j, j) = cs[j] * hess(j, j) + sn[j] * hess(j + 1, j);
            hess(j + 1, j) = 0.0;
            g(j + 1) = -std::conj(sn[j]) * g(j);
            g(j) = cs[j] * g(j);
            out.relative_residual = std::abs(g(j + 1)) / bnorm;
            if (out.relative_residual <= tol || c == 0.0) {
                ++j;
                break;
            }
        }
        Vector y = hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        out.x += basis.leftCols(j) * y;
    }
    const double final_res = (b - apply(out.x)).norm() / bnorm;
    out.relative_residual = final_res;
    out.converged = final_res <= tol;
    return out;
}

Eigen::Index basis_index(const Dims &dims, std::span<const int> levels)
{
    if (levels.size() != dims.size()) {
        throw std::invalid_argument("basis_index: expected one level per subsystem");
    }
    Eigen::Index index = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (levels[i] < 0 || levels[i] >= dims[i]) {
            throw std::out_of_range("basis_index: level out of range for subsystem " + std::to_string(i));
        }
        index = index * dims[i] + levels[i];
    }
    return index;
}

Vector product_ket(const Dims &dims, std::span<const int> levels)
{
    Vector ket = Vector::Zero(product(dims));
    ket(basis_index(dims, levels)) = 1.0;
    return ket;
}

Vector ket_from_label(const Dims &dims, std::string_view qubits, int photons)
{
    if (qubits.size() + 1 != dims.size()) {
        throw std::invalid_argument("ket_from_label: qubit label length does not match the space");
    }
    std::vector<int> levels{photons};
    for (char q : qubits) {
        if (q != 'g' && q != 'e') {
            throw std::invalid_argument("ket_from_label: qubit labels must be 'g' or 'e'");
        }
        levels.push_back(q == 'e' ? 1 : 0);
    }
    return product_ket(dims, levels);
}

} // namespace usc
