// linalg.cpp: Dense complex matrix utilities and spin operators

#include "qme/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace qme {

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    if (a.size() == 0) return true;
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

double hermiticity_defect(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return 0.5 * (a + a.adjoint());
}

ComplexMatrix identity(Index d) {
    return ComplexMatrix::Identity(d, d);
}

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, -kI,
         kI, 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

namespace {

void require_spins(int n_spins, const char* who) {
    if (n_spins < 1) {
        throw std::invalid_argument(std::string(who) + ": number of spins must be >= 1, got " +
                                    std::to_string(n_spins));
    }
}

// S+ in the m = s..-s basis: <m+1|S+|m> = sqrt(s(s+1) - m(m+1)).
ComplexMatrix spin_raising(int n_spins) {
    const double s = 0.5 * n_spins;
    const Index d = n_spins + 1;
    ComplexMatrix sp = ComplexMatrix::Zero(d, d);
    for (Index col = 1; col < d; ++col) {
        const double m = s - static_cast<double>(col);
        sp(col - 1, col) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    return sp;
}

} // namespace

ComplexMatrix spin_z(int n_spins) {
    require_spins(n_spins, "spin_z");
    const double s = 0.5 * n_spins;
    const Index d = n_spins + 1;
    ComplexMatrix sz = ComplexMatrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) sz(i, i) = s - static_cast<double>(i);
    return sz;
}

ComplexMatrix spin_x(int n_spins) {
    require_spins(n_spins, "spin_x");
    const ComplexMatrix sp = spin_raising(n_spins);
    return 0.5 * (sp + sp.adjoint());
}

ComplexMatrix spin_y(int n_spins) {
    require_spins(n_spins, "spin_y");
    const ComplexMatrix sp = spin_raising(n_spins);
    return (sp - sp.adjoint()) / (2.0 * kI);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix k = Eigen::kroneckerProduct(a, b);
    return k;
}

ComplexVector vectorize(const ComplexMatrix& a) {
    // Eigen storage is column-major, so the raw buffer is already column-stacked.
    return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix devectorize(const ComplexVector& v) {
    const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n <= 0 || n * n != v.size()) {
        throw std::invalid_argument("devectorize: length " + std::to_string(v.size()) +
                                    " is not a nonzero perfect square");
    }
    return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, Index d1, Index d2, Subsystem which) {
    if (d1 <= 0 || d2 <= 0 || rho.rows() != rho.cols() || rho.rows() != d1 * d2) {
        throw std::invalid_argument("partial_transpose: matrix of dim " + std::to_string(rho.rows()) +
                                    " does not factor as " + std::to_string(d1) + " x " +
                                    std::to_string(d2));
    }
    ComplexMatrix out(rho.rows(), rho.cols());
    for (Index i = 0; i < d1; ++i)
        for (Index j = 0; j < d1; ++j)
            for (Index k = 0; k < d2; ++k)
                for (Index l = 0; l < d2; ++l) {
                    const cplx v = rho(i * d2 + k, j * d2 + l);
                    if (which == Subsystem::A)
                        out(j * d2 + k, i * d2 + l) = v;
                    else
                        out(i * d2 + l, j * d2 + k) = v;
                }
    return out;
}

double trace_norm(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("trace_norm: matrix must be square");
    if (a.size() == 0) return 0.0;
    const double scale = a.cwiseAbs().maxCoeff();
    if (hermiticity_defect(a) <= 1e-14 * std::max(1.0, scale)) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    return svd.singularValues().sum();
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const Tolerances& tol) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
        throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
    }
    const double herm = hermiticity_defect(m_);
    if (herm > tol.hermiticity) {
        throw std::invalid_argument("DensityMatrix: not Hermitian (defect " + std::to_string(herm) + ")");
    }
    const cplx tr = m_.trace();
    if (std::abs(tr - 1.0) > tol.trace) {
        throw std::invalid_argument("DensityMatrix: trace is " + std::to_string(tr.real()) + "+" +
                                    std::to_string(tr.imag()) + "i, expected 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m_), Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -tol.positivity) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
    const double n = psi.norm();
    if (psi.size() == 0 || n == 0.0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
    const ComplexVector u = psi / n;
    return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::conjugated(const ComplexMatrix& u) const {
    if (u.rows() != dim() || u.cols() != dim()) {
        throw std::invalid_argument("DensityMatrix::conjugated: unitary dimension mismatch");
    }
    return DensityMatrix(hermitian_part(u * m_ * u.adjoint()));
}

double BlochVector::norm() const {
    return std::sqrt(x * x + y * y + z * z);
}

DensityMatrix bloch_state(const BlochVector& b) {
    const double n2 = b.x * b.x + b.y * b.y + b.z * b.z;
    if (!(n2 <= 1.0 + 1e-12)) {
        throw std::invalid_argument("bloch_state: Bloch vector norm " + std::to_string(std::sqrt(n2)) +
                                    " exceeds 1");
    }
    ComplexMatrix m = 0.5 * (identity(2) + b.x * pauli_x() + b.y * pauli_y() + b.z * pauli_z());
    // Pure states on the sphere can pick up -1e-17 eigenvalues; allow the ball tolerance.
    DensityMatrix::Tolerances tol;
    tol.positivity = 1e-12;
    return DensityMatrix(std::move(m), tol);
}

} // namespace qme
