// test_util.hpp: Small helpers shared by the unit tests

#pragma once

#include <random>

#include "qme/linalg.hpp"

namespace testutil {

inline qme::ComplexMatrix random_matrix(std::mt19937_64& rng, qme::Index d) {
    std::normal_distribution<double> n;
    qme::ComplexMatrix m(d, d);
    for (qme::Index j = 0; j < d; ++j)
        for (qme::Index i = 0; i < d; ++i) m(i, j) = qme::cplx(n(rng), n(rng));
    return m;
}

inline qme::ComplexMatrix random_hermitian(std::mt19937_64& rng, qme::Index d) {
    return qme::hermitian_part(random_matrix(rng, d));
}

// Full-rank random density matrix A A^dag / Tr.
inline qme::DensityMatrix random_state(std::mt19937_64& rng, qme::Index d) {
    const qme::ComplexMatrix a = random_matrix(rng, d);
    qme::ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return qme::DensityMatrix(qme::hermitian_part(rho));
}

inline qme::ComplexMatrix random_unitary(std::mt19937_64& rng, qme::Index d) {
    Eigen::HouseholderQR<qme::ComplexMatrix> qr(random_matrix(rng, d));
    return qr.householderQ() * qme::ComplexMatrix::Identity(d, d);
}

inline double max_abs(const qme::ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace testutil
