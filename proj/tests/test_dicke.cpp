#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/oracle_values.hpp"
#include "qme/dicke.hpp"
#include "test_util.hpp"

using namespace qme;
using namespace qme::dicke;
using testutil::max_abs;

TEST_SUITE("dicke") {

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((DickeParams{0.0, 1, 1, 1, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((DickeParams{1, -0.1, 1, 1, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((DickeParams{1, 1, 1, 0.0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((DickeParams{1, 1, 1, 1, 0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((DickeParams{1, 0.0, -2, 1, 3}.validate()));
    CHECK(adiabatic_advisory({1, 1, 3, 1, 1}).has_value());
    CHECK_FALSE(adiabatic_advisory({1, 1, 3, 10, 1}).has_value());
}

TEST_CASE("effective Hamiltonian, qubit at Omega = omega = kappa = 1, g = 3") {
    // For N = 1, S_x^2 = I/4: the coupling term only shifts the energy origin.
    const ComplexMatrix h = effective_hamiltonian({1, 1, 3, 1, 1});
    const double shift = -9.0 / std::sqrt(5.0);
    CHECK(std::abs(h(0, 0) - (0.5 + shift)) < 1e-12);
    CHECK(std::abs(h(1, 1) - (-0.5 + shift)) < 1e-12);
    CHECK(std::abs(h(0, 1)) < 1e-12);
    // Traceless part equals that of diag(-1.3, -2.3).
    CHECK(std::abs((h(0, 0) - h(1, 1)) - 1.0) < 1e-12);
    CHECK(approx_equal(effective_hamiltonian({2, 0.0, 5, 1, 4}), 2.0 * spin_z(4)));
    CHECK(approx_equal(effective_hamiltonian({2, 1.5, 0.0, 1, 4}), 2.0 * spin_z(4)));
}

TEST_CASE("effective jump operator") {
    for (double g : {1.0, 3.0, 4.5}) {
        const ComplexMatrix l = effective_jump({1, 1, g, 1, 1});
        const cplx expect = -cplx(2, 1) * g / 5.0;
        CHECK(std::abs(l(0, 1) - expect) < 1e-12);
        CHECK(std::abs(l(1, 0) - expect) < 1e-12);
        CHECK(std::abs(l(0, 0)) < 1e-15);
    }
    CHECK(max_abs(effective_jump({1, 1, 0.0, 1, 3})) == 0.0);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int k = 0; k < 50; ++k) {
        const DickeParams p{u(rng), u(rng), u(rng), u(rng), 1 + static_cast<int>(u(rng))};
        const cplx a = adiabatic_a_coefficient(p);
        CHECK(std::norm(std::sqrt(p.kappa) * a) ==
              doctest::Approx(4.0 * p.g * p.g * p.kappa / (p.N * (4 * p.omega * p.omega + p.kappa * p.kappa))));
        CHECK(max_abs(effective_jump(p) - std::sqrt(p.kappa) * a * spin_x(p.N)) < 1e-12);
        CHECK(hermiticity_defect(effective_hamiltonian(p)) < 1e-12);
        const ComplexMatrix l = effective_jump(p);
        CHECK(max_abs(l - l.transpose()) < 1e-15);
    }
    CHECK(std::abs(adiabatic_a_coefficient({1, 1, 1, 1, 1}) - cplx(-0.8, -0.4)) < 1e-15);
    CHECK(std::abs(adiabatic_a_coefficient({1, 1, 0, 1, 1})) == 0.0);
}

TEST_CASE("bipartite model") {
    const BipartiteModel m0 = bipartite_model({{1.5, 1, 0, 1, 1}, {0.5, 1, 0, 1, 1}});
    CHECK(m0.H.rows() == 4);
    CHECK(std::abs(m0.H(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(m0.H(1, 1) - 0.5) < 1e-15);
    CHECK(std::abs(m0.H(2, 2) + 0.5) < 1e-15);
    CHECK(std::abs(m0.H(3, 3) + 1.0) < 1e-15);

    const DickeParams a{3, 1, 1, 1, 3}, b{2.5, 8.88, 3.5, 3, 3};
    const BipartiteModel m = bipartite_model({a, b});
    REQUIRE(m.H.rows() == 16);
    REQUIRE(m.jumps.size() == 2);
    CHECK(m.jumps[0].rows() == 16);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.H, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) == doctest::Approx(oracle::kHabMin_bipartite).epsilon(1e-12));
    CHECK(es.eigenvalues()(15) == doctest::Approx(oracle::kHabMax_bipartite).epsilon(1e-12));

    // Spectrum is the sum set of the factors' spectra.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ea(effective_hamiltonian(a)), eb(effective_hamiltonian(b));
    std::vector<double> sums;
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j) sums.push_back(ea.eigenvalues()(i) + eb.eigenvalues()(j));
    std::sort(sums.begin(), sums.end());
    for (Index i = 0; i < 16; ++i) CHECK(std::abs(sums[static_cast<std::size_t>(i)] - es.eigenvalues()(i)) < 1e-10);

    const ComplexMatrix ha = kron(effective_hamiltonian(a), identity(4));
    CHECK(max_abs(ha * m.jumps[1] - m.jumps[1] * ha) < 1e-12);
}

}
