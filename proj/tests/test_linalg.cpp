#include <doctest.h>

#include <cmath>

#include "qme/linalg.hpp"
#include "test_util.hpp"

using namespace qme;
using testutil::max_abs;

TEST_SUITE("linalg") {

TEST_CASE("spin_z is diag(s, ..., -s)") {
    CHECK(approx_equal(spin_z(1), 0.5 * pauli_z()));
    const ComplexMatrix z2 = spin_z(2);
    CHECK(z2(0, 0).real() == doctest::Approx(1.0));
    CHECK(std::abs(z2(1, 1)) < 1e-15);
    CHECK(z2(2, 2).real() == doctest::Approx(-1.0));
    const ComplexMatrix z3 = spin_z(3);
    for (int i = 0; i < 4; ++i) CHECK(z3(i, i).real() == doctest::Approx(1.5 - i));
    CHECK_THROWS_AS(spin_z(0), std::invalid_argument);
    CHECK_THROWS_AS(spin_x(-1), std::invalid_argument);
    CHECK_THROWS_AS(spin_y(0), std::invalid_argument);
}

TEST_CASE("spin_x and spin_y small cases") {
    CHECK(approx_equal(spin_x(1), 0.5 * pauli_x()));
    CHECK(approx_equal(spin_y(1), 0.5 * pauli_y()));
    const ComplexMatrix x2 = spin_x(2);
    const ComplexMatrix y2 = spin_y(2);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(x2(0, 1) - r) < 1e-15);
    CHECK(std::abs(x2(1, 2) - r) < 1e-15);
    CHECK(std::abs(x2(0, 2)) < 1e-15);
    CHECK(std::abs(y2(0, 1) - cplx(0, -r)) < 1e-15);
    CHECK(std::abs(y2(1, 0) - cplx(0, r)) < 1e-15);
    CHECK(x2.diagonal().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("collective spins are Hermitian and satisfy the Casimir identity") {
    for (int n = 1; n <= 40; ++n) {
        CHECK(hermiticity_defect(spin_x(n)) < 1e-12);
        CHECK(hermiticity_defect(spin_y(n)) < 1e-12);
        CHECK(hermiticity_defect(spin_z(n)) < 1e-12);
    }
    for (int n = 1; n <= 30; ++n) {
        const ComplexMatrix sx = spin_x(n), sy = spin_y(n), sz = spin_z(n);
        const ComplexMatrix c = sx * sx + sy * sy + sz * sz;
        CHECK(max_abs(c - 0.25 * n * (n + 2) * identity(n + 1)) < 1e-10);
        // [S_x, S_y] = i S_z
        CHECK(max_abs(sx * sy - sy * sx - kI * sz) < 1e-10);
    }
}

TEST_CASE("kron product indexing and mixed product") {
    CHECK(approx_equal(kron(identity(2), identity(2)), identity(4)));
    const ComplexMatrix xi = kron(pauli_x(), identity(2));
    CHECK(approx_equal(xi.topLeftCorner(2, 2), ComplexMatrix::Zero(2, 2)));
    CHECK(approx_equal(xi.topRightCorner(2, 2), identity(2)));
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const ComplexMatrix a = testutil::random_matrix(rng, 2), b = testutil::random_matrix(rng, 2);
        const ComplexMatrix c = testutil::random_matrix(rng, 2), d = testutil::random_matrix(rng, 2);
        CHECK(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)) < 1e-12);
        CHECK(std::abs(kron(a, b)(1 * 2 + 0, 0 * 2 + 1) - a(1, 0) * b(0, 1)) < 1e-15);
    }
}

TEST_CASE("vectorize stacks columns and satisfies vec(AXB) = (B^T kron A) vec(X)") {
    const ComplexVector v = vectorize(identity(2));
    CHECK(std::abs(v(0) - 1.0) < 1e-15);
    CHECK(std::abs(v(1)) < 1e-15);
    CHECK(std::abs(v(2)) < 1e-15);
    CHECK(std::abs(v(3) - 1.0) < 1e-15);
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    CHECK(std::abs(vectorize(m)(1) - 3.0) < 1e-15);
    CHECK(approx_equal(devectorize(vectorize(m)), m));
    CHECK_THROWS_AS(devectorize(ComplexVector::Zero(3)), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        const ComplexMatrix a = testutil::random_matrix(rng, 2), x = testutil::random_matrix(rng, 2),
                            b = testutil::random_matrix(rng, 2);
        CHECK((vectorize(a * x * b) - kron(b.transpose(), a) * vectorize(x)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("partial transpose") {
    std::mt19937_64 rng(3);
    const DensityMatrix ra = testutil::random_state(rng, 2);
    const DensityMatrix rb = testutil::random_state(rng, 3);
    const ComplexMatrix prod = kron(ra.matrix(), rb.matrix());
    CHECK(max_abs(partial_transpose(prod, 2, 3, Subsystem::A) - kron(ra.matrix().transpose(), rb.matrix())) < 1e-14);
    CHECK(max_abs(partial_transpose(prod, 2, 3, Subsystem::B) - kron(ra.matrix(), rb.matrix().transpose())) < 1e-14);

    const DensityMatrix rho = testutil::random_state(rng, 6);
    CHECK(max_abs(partial_transpose(partial_transpose(rho.matrix(), 2, 3, Subsystem::A), 2, 3, Subsystem::A) -
                  rho.matrix()) < 1e-15);
    CHECK(hermiticity_defect(partial_transpose(rho.matrix(), 2, 3, Subsystem::A)) < 1e-14);
    CHECK_THROWS_AS(partial_transpose(rho.matrix(), 2, 2, Subsystem::A), std::invalid_argument);

    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix pt = partial_transpose(DensityMatrix::pure(bell).matrix(), 2, 2, Subsystem::A);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pt);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5));
    for (int i = 1; i < 4; ++i) CHECK(es.eigenvalues()(i) == doctest::Approx(0.5));
}

TEST_CASE("trace norm") {
    CHECK(trace_norm(identity(5)) == doctest::Approx(5.0));
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    CHECK(trace_norm(d) == doctest::Approx(3.0));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const ComplexMatrix a = testutil::random_matrix(rng, 4);
        Eigen::JacobiSVD<ComplexMatrix> svd(a);
        CHECK(std::abs(trace_norm(a) - svd.singularValues().sum()) < 1e-10);
        const ComplexMatrix u = testutil::random_unitary(rng, 4), v = testutil::random_unitary(rng, 4);
        CHECK(std::abs(trace_norm(u * a * v) - trace_norm(a)) < 1e-10);
    }
}

TEST_CASE("density matrix invariants") {
    CHECK_THROWS_AS(DensityMatrix(2.0 * identity(2)), std::invalid_argument);
    ComplexMatrix nh = 0.5 * identity(2);
    nh(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{nh}, std::invalid_argument);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
    CHECK_NOTHROW(DensityMatrix(0.5 * identity(2)));
}

TEST_CASE("bloch_state") {
    CHECK(approx_equal(bloch_state({0, 0, 1}).matrix(), DensityMatrix::pure(ComplexVector::Unit(2, 0)).matrix()));
    CHECK(approx_equal(bloch_state({0, 0, 0}).matrix(), 0.5 * identity(2)));
    const DensityMatrix r = bloch_state({0.4, 0.4, std::sqrt(0.68)});
    CHECK(std::abs(r(0, 1) - cplx(0.2, -0.2)) < 1e-15);
    CHECK_THROWS_AS(bloch_state({1.0, 0.1, 0.0}), std::invalid_argument);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int built = 0;
    while (built < 1000) {
        const BlochVector b{u(rng), u(rng), u(rng)};
        if (b.norm() > 1.0) continue;
        CHECK_NOTHROW(bloch_state(b));
        ++built;
    }
}

}
