// linalg.hpp: Dense complex matrices plus the collective spin operators
//
// Conventions used throughout the library:
//   * hbar = 1, times are the dimensionless product t * Omega.
//   * Spin-sector basis is ordered m = +s, s-1, ..., -s with s = N/2.
//   * Vectorisation stacks columns, so vec(A X B) = (B^T kron A) vec(X).

#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace qme {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kDefaultTol = 1e-12;

// Max-entry comparison with an explicit absolute tolerance.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTol);

// max |A - A^dagger|
double hermiticity_defect(const ComplexMatrix& a);

ComplexMatrix hermitian_part(const ComplexMatrix& a);

ComplexMatrix identity(Index d);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Collective spin operators in the s = N/2 sector, dimension N+1.
ComplexMatrix spin_z(int n_spins);
ComplexMatrix spin_x(int n_spins);
ComplexMatrix spin_y(int n_spins);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexVector vectorize(const ComplexMatrix& a);
ComplexMatrix devectorize(const ComplexVector& v);

enum class Subsystem { A, B };

// Partial transpose of an operator on C^{d1} (x) C^{d2} with respect to one factor.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, Index d1, Index d2, Subsystem which);

// Sum of singular values. Hermitian inputs take an eigenvalue path.
double trace_norm(const ComplexMatrix& a);

/// Unit-trace, Hermitian, positive semidefinite matrix.
///
/// Construction validates the invariants against `Tolerances`; a violated
/// invariant throws std::invalid_argument. Instances are immutable.
class DensityMatrix {
public:
    struct Tolerances {
        double hermiticity = 1e-10;
        double trace = 1e-10;
        double positivity = 1e-10;
    };

    explicit DensityMatrix(ComplexMatrix m) : DensityMatrix(std::move(m), Tolerances{}) {}
    DensityMatrix(ComplexMatrix m, const Tolerances& tol);

    // |psi><psi| for a (not necessarily normalised) nonzero vector.
    static DensityMatrix pure(const ComplexVector& psi);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    Index dim() const noexcept { return m_.rows(); }
    cplx operator()(Index i, Index j) const { return m_(i, j); }

    // Conjugation by a unitary: U rho U^dagger.
    DensityMatrix conjugated(const ComplexMatrix& u) const;

private:
    ComplexMatrix m_;
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
};

// rho = (I + r . sigma) / 2
DensityMatrix bloch_state(const BlochVector& b);

} // namespace qme
