#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/oracle_values.hpp"
#include "qme/analytic_qubit.hpp"
#include "qme/errors.hpp"
#include "qme/mpemba.hpp"
#include "test_util.hpp"

using namespace qme;
using namespace qme::mpemba;
using namespace qme::liouville;
using measures::MeasureKind;
using std::numbers::pi;
using testutil::max_abs;

namespace {

LiouvilleSpectrum spectrum_of(const dicke::DickeParams& p) {
    return spectral_decompose(build_liouvillian(LindbladGenerator::from_dicke(p)));
}

Trajectory synthetic(const std::vector<double>& t, double (*f)(double)) {
    Trajectory tr;
    tr.times = t;
    for (double x : t) tr.values.push_back(f(x));
    return tr;
}

} // namespace

TEST_SUITE("mpemba") {

TEST_CASE("coherence-preserving unitary and rotated Bloch states") {
    CHECK(approx_equal(coherence_preserving_unitary(0.0), identity(2)));
    ComplexMatrix half = ComplexMatrix::Zero(2, 2);
    half(0, 0) = kI;
    half(1, 1) = -kI;
    CHECK(approx_equal(coherence_preserving_unitary(pi / 2), half));
    CHECK(approx_equal(coherence_preserving_unitary(pi / 2 + 2 * pi), half, 1e-12));

    const BlochVector b{0.3, -0.2, 0.5};
    CHECK(approx_equal(rotated_bloch_state(b, 0.0).matrix(), bloch_state(b).matrix()));
    CHECK(approx_equal(rotated_bloch_state(b, pi / 2).matrix(), bloch_state({-0.3, 0.2, 0.5}).matrix()));
    for (double beta = 0.0; beta < 2 * pi; beta += 0.2) {
        const ComplexMatrix u = coherence_preserving_unitary(beta);
        const DensityMatrix r = rotated_bloch_state(b, beta);
        CHECK(approx_equal(r.matrix(), bloch_state(b).conjugated(u).matrix()));
        CHECK((r.matrix() * pauli_z()).trace().real() == doctest::Approx(0.5));
    }
}

TEST_CASE("seeded random unitaries and states") {
    const ComplexMatrix u = random_local_unitary(42, 4, 4);
    CHECK(max_abs(u.adjoint() * u - identity(16)) < 1e-12);
    CHECK(random_local_unitary(42, 4, 4) == u);
    CHECK(random_local_unitary(43, 4, 4) != u);
    const ComplexVector psi = haar_random_state(5, 26);
    CHECK(psi.norm() == doctest::Approx(1.0));
    CHECK(haar_random_state(5, 26) == psi);

    // First moments of a Haar unitary: E|U_00|^2 = 1/d.
    GaussianSource src(1);
    double acc = 0.0;
    const int n = 4000;
    for (int k = 0; k < n; ++k) acc += std::norm(haar_unitary(src, 3)(0, 0));
    CHECK(acc / n == doctest::Approx(1.0 / 3.0).epsilon(0.05));

    GaussianSource g(9);
    double m1 = 0.0, m2 = 0.0;
    for (int k = 0; k < 20000; ++k) {
        const double x = g.next();
        m1 += x;
        m2 += x * x;
    }
    CHECK(std::abs(m1 / 20000) < 0.03);
    CHECK(m2 / 20000 == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("slowest-mode elimination on the qubit zeroes r_z through the sigma_z mode") {
    const auto spec = spectrum_of({1, 1, 3, 1, 1});
    const auto order = analytic::conventional_label_order(spec, 1.0, 3.0);
    const Index mode = order[1];  // conventional lambda_2 = -2g^2/5p, l_2 proportional to sigma_z
    ComplexVector psi(2);
    psi << std::cos(0.3), std::exp(kI * 0.7) * std::sin(0.3);
    const DensityMatrix rho0 = DensityMatrix::pure(psi);
    const ModeElimination me = slowest_mode_elimination(spec, rho0, mode);
    CHECK_FALSE(me.used_minimization);
    CHECK(me.residual < 1e-8);
    CHECK(max_abs(me.unitary.adjoint() * me.unitary - identity(2)) < 1e-10);
    const DensityMatrix rotated = rho0.conjugated(me.unitary);
    CHECK(std::abs((rotated.matrix() * pauli_z()).trace()) < 1e-8);
}

TEST_CASE("slowest-mode elimination on the slowest mode and its edge cases") {
    const auto spec = spectrum_of({3, 1, 1, 1, 4});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DensityMatrix rho0 = DensityMatrix::pure(haar_random_state(seed, 5));
        const ModeElimination me = slowest_mode_elimination(spec, rho0);
        CHECK(me.residual < 1e-8);
        CHECK(max_abs(me.unitary.adjoint() * me.unitary - identity(5)) < 1e-10);
        const auto cprime = overlap_coeffs(spec, rho0.conjugated(me.unitary));
        CHECK(std::abs(cprime.c(1)) < 1e-8);
        // Applying the construction again is a no-op.
        const ModeElimination again = slowest_mode_elimination(spec, rho0.conjugated(me.unitary));
        CHECK(approx_equal(again.unitary, identity(5)));
    }
    CHECK_THROWS_AS(slowest_mode_elimination(spec, DensityMatrix(identity(5) / 5.0)), std::invalid_argument);
    CHECK_THROWS_AS(slowest_mode_elimination(spec, DensityMatrix::pure(haar_random_state(1, 5)), 0),
                    std::invalid_argument);
}

TEST_CASE("complex modes fall back to minimisation") {
    const auto spec = spectrum_of({1, 1, 1, 1, 2});
    Index mode = -1;
    for (Index i = 1; i < spec.size(); ++i)
        if (std::abs(spec.eigenvalue(i).imag()) > 1e-3) {
            mode = i;
            break;
        }
    REQUIRE(mode > 0);
    const DensityMatrix rho0 = DensityMatrix::pure(haar_random_state(3, 3));
    const ModeElimination me = slowest_mode_elimination(spec, rho0, mode);
    CHECK(me.used_minimization);
    CHECK(me.residual < 1e-6);
    CHECK(max_abs(me.unitary.adjoint() * me.unitary - identity(3)) < 1e-10);
}

TEST_CASE("grids") {
    const auto u = uniform_grid(10.0, 11);
    CHECK(u.size() == 11);
    CHECK(u.back() == 10.0);
    const auto s = stepped_grid(1.0, 0.01);
    CHECK(s.size() == 101);
    CHECK(s[57] == doctest::Approx(0.57));
    CHECK_THROWS_AS(uniform_grid(-1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(stepped_grid(1.0, 0.0), std::invalid_argument);
    const auto d = default_grid(spectrum_of({1, 1, 3, 1, 1}));
    CHECK(d.size() == 2000);
}

TEST_CASE("relaxation time") {
    const auto t = stepped_grid(30.0, 0.01);
    Trajectory flat = synthetic(t, [](double) { return 0.0; });
    CHECK(relaxation_time(flat, 1e-4) == 0.0);
    Trajectory decay = synthetic(t, [](double x) { return std::exp(-x); });
    CHECK(std::abs(*relaxation_time(decay, 1e-4) - (-std::log(1e-4))) <= 0.01);
    Trajectory slow = synthetic(t, [](double x) { return std::exp(-0.1 * x); });
    CHECK_FALSE(relaxation_time(slow, 1e-4).has_value());
    // Re-entry after leaving the band moves t* to the last exit.
    Trajectory bounce = synthetic(t, [](double x) { return std::exp(-x) * std::abs(std::cos(x)); });
    const double tb = *relaxation_time(bounce, 1e-3);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= tb) CHECK(bounce.values[i] < 1e-3);
    // Monotone in eps.
    double prev = 1e300;
    for (double eps : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
        const double r = *relaxation_time(decay, eps);
        CHECK(r <= prev);
        prev = r;
    }
    CHECK_THROWS_AS(relaxation_time(decay, 0.0), std::invalid_argument);
}

TEST_CASE("verdicts") {
    const auto t = stepped_grid(30.0, 0.01);
    const Trajectory fast = synthetic(t, [](double x) { return 0.5 * std::exp(-x); });
    const Trajectory slow = synthetic(t, [](double x) { return 0.5 * std::exp(-0.5 * x); });
    const MpembaVerdict same = detect_mpemba(fast, fast, 1e-4);
    CHECK(same.ordering == Ordering::Tie);
    CHECK(same.crossing_times.empty());
    CHECK(same.initial_equal);

    const MpembaVerdict ab = detect_mpemba(fast, slow, 1e-4);
    const MpembaVerdict ba = detect_mpemba(slow, fast, 1e-4);
    CHECK(ab.ordering == Ordering::AFaster);
    CHECK(ba.ordering == Ordering::BFaster);

    const Trajectory crossing = synthetic(t, [](double x) { return 0.5 * std::exp(-2 * x) + 0.1 * x * std::exp(-x); });
    const MpembaVerdict cv = detect_mpemba(fast, crossing, 1e-4);
    CHECK(cv.crossing_times.size() == 1);

    Trajectory other = fast;
    other.times.back() += 1.0;
    CHECK_THROWS_AS(detect_mpemba(fast, other, 1e-4), std::invalid_argument);
    Trajectory kind = fast;
    kind.measure = MeasureKind::TraceDistanceToSteady;
    CHECK_THROWS_AS(detect_mpemba(fast, kind, 1e-4), std::invalid_argument);

    CHECK(role_reversal(ab, ba).reversed);
    CHECK_FALSE(role_reversal(ab, ab).reversed);
    CHECK_FALSE(role_reversal(ab, same).reversed);

    const auto j = to_json(role_reversal(ab, ba), 77);
    CHECK(j.at("seed") == 77);
    CHECK(j.at("version") == kVerdictFormatVersion);
    CHECK(j.at("verdict_1").at("ordering") == "A_faster");
}

TEST_CASE("trajectories") {
    const dicke::DickeParams p{1, 1, 3, 1, 1};
    const auto spec = spectrum_of(p);
    const analytic::SymmetricQubitParams prm{1, 3, 0.65 * pi, 0.4, std::sqrt(0.68)};
    const auto t = stepped_grid(10.0, 0.05);
    const Trajectory tr = sample_trajectory(spec, bloch_state(prm.bloch()), MeasureKind::L1Coherence, t);
    CHECK(tr.values[0] == doctest::Approx(std::sqrt(0.32)));
    CHECK(tr.steady_value == doctest::Approx(0.0));
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(tr.values[i] - analytic::analytic_l1(prm, t[i])) < 1e-9);
    const auto t_long = stepped_grid(60.0, 0.05);
    const MpembaVerdict v =
        detect_mpemba(sample_trajectory(spec, bloch_state(prm.bloch()), MeasureKind::L1Coherence, t_long),
                      sample_trajectory(spec, rotated_bloch_state(prm.bloch(), prm.beta), MeasureKind::L1Coherence, t_long),
                      1e-4, 1e-12);
    CHECK(v.initial_equal);
    CHECK(v.ordering == Ordering::AFaster);

    const auto long_grid = uniform_grid(50.0 / spec.gap(), 200);
    const Trajectory far = sample_trajectory(spec, bloch_state(prm.bloch()), MeasureKind::TraceDistanceToSteady, long_grid);
    CHECK(std::abs(far.values.back() - far.steady_value) < 1e-8);

    const LindbladGenerator gen = LindbladGenerator::from_dicke(p);
    const StatePair pair{bloch_state(prm.bloch()), mpemba::rotated_bloch_state(prm.bloch(), prm.beta)};
    CHECK_FALSE(detect_role_reversal(gen, gen, pair, MeasureKind::L1Coherence, t, t, 1e-4).reversed);
}

}
