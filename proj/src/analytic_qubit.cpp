// analytic_qubit.cpp: Closed-form oracle for the Omega = omega = kappa qubit

#include "qme/analytic_qubit.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qme/errors.hpp"

namespace qme::analytic {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double require_positive_q(const SymmetricQubitParams& params, const char* who) {
    const double q = params.q();
    if (!(q > 0.0)) {
        throw Unsupported(std::string(who) + ": closed form needs q > 0 (g > sqrt(5) p)");
    }
    return q;
}

// Overflow-free pieces of a and b: with x = 2tq/(5p),
//   a * exp(-x), b * exp(-x)
// so that sqrt(a) exp(-g^2 t/5p) = exp((q - g^2) t / 5p) sqrt(a exp(-x)).
struct ScaledAB {
    double a = 0.0;
    double b = 0.0;
    double log_prefactor = 0.0;  // (q - g^2) t / (5p)
};

ScaledAB scaled_ab(const SymmetricQubitParams& params, double q, double t) {
    const double p = params.p;
    const double g2 = params.g * params.g;
    const double x = 2.0 * t * q / (5.0 * p);
    const double e1 = std::exp(-x);
    const double e2 = std::exp(-2.0 * x);
    const double cosh_s = 0.5 * (1.0 + e2);          // cosh(x) e^{-x}
    const double sinh_s = 0.5 * (1.0 - e2);          // sinh(x) e^{-x}
    const double sinh_half_sq = 0.25 * (1.0 - e1) * (1.0 - e1);  // sinh^2(x/2) e^{-x}

    ScaledAB out;
    out.b = (g2 * cosh_s + 5.0 * p * p * e1) / (g2 + 5.0 * p * p);
    if (q > 0.0) {
        const double s4 = std::sin(4.0 * params.beta);
        const double c4 = std::cos(4.0 * params.beta);
        out.a = (g2 * g2 * cosh_s + g2 * (q * s4 * sinh_s - 10.0 * p * p * c4 * sinh_half_sq) -
                 25.0 * p * p * p * p * e1) /
                (q * q);
    }
    out.log_prefactor = (q - g2) * t / (5.0 * p);
    return out;
}

void require_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
}

} // namespace

void SymmetricQubitParams::validate() const {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("SymmetricQubitParams: p must be > 0");
    if (!std::isfinite(g) || !std::isfinite(beta)) throw std::invalid_argument("SymmetricQubitParams: non-finite value");
    if (2.0 * r_x * r_x + r_z * r_z > 1.0 + 1e-12) {
        throw std::invalid_argument("SymmetricQubitParams: Bloch vector (r_x, r_x, r_z) lies outside the ball");
    }
}

bool SymmetricQubitParams::theorem_regime() const {
    return g > std::sqrt(5.0) * p;
}

double SymmetricQubitParams::q() const {
    if (!real_q()) {
        throw Unsupported("SymmetricQubitParams: g^4 < 25 p^4, q is imaginary and the closed forms do not apply");
    }
    return std::sqrt(g * g * g * g - 25.0 * p * p * p * p);
}

dicke::DickeParams SymmetricQubitParams::dicke() const {
    return dicke::DickeParams{p, p, g, p, 1};
}

std::array<cplx, 4> analytic_eigenvalues(double p, double g) {
    if (!(p > 0.0)) throw std::invalid_argument("analytic_eigenvalues: p must be > 0");
    const double g2 = g * g;
    const cplx q = std::sqrt(cplx(g2 * g2 - 25.0 * p * p * p * p, 0.0));
    return {cplx(0.0, 0.0), cplx(-2.0 * g2 / (5.0 * p), 0.0), (-q - g2) / (5.0 * p), (q - g2) / (5.0 * p)};
}

std::array<Index, 4> conventional_label_order(const liouville::LiouvilleSpectrum& spec, double p, double g) {
    if (spec.size() != 4) throw std::invalid_argument("conventional_label_order: expected a qubit (4-mode) spectrum");
    const auto exact = analytic_eigenvalues(p, g);
    std::array<Index, 4> order{};
    std::array<bool, 4> used{};
    for (std::size_t label = 0; label < 4; ++label) {
        double best = std::numeric_limits<double>::infinity();
        Index best_i = 0;
        for (Index i = 0; i < 4; ++i) {
            if (used[static_cast<std::size_t>(i)]) continue;
            const double dist = std::abs(spec.eigenvalue(i) - exact[label]);
            if (dist < best) {
                best = dist;
                best_i = i;
            }
        }
        used[static_cast<std::size_t>(best_i)] = true;
        order[label] = best_i;
    }
    return order;
}

std::array<cplx, 4> analytic_normalizers(const SymmetricQubitParams& params) {
    params.validate();
    const double q = params.q();
    const double p2 = params.p * params.p;
    const double g4 = std::pow(params.g, 4);
    const cplx minus = q - 5.0 * kI * p2;
    const cplx plus = q + 5.0 * kI * p2;
    return {cplx(2.0), cplx(2.0), 1.0 + minus * minus / g4, 1.0 + plus * plus / g4};
}

std::array<cplx, 4> analytic_overlaps(const SymmetricQubitParams& params) {
    params.validate();
    const double q = params.q();
    const double p2 = params.p * params.p;
    const double g2 = params.g * params.g;
    const cplx c3 = cplx(0.5, -0.5) * (-kI * q + g2 - 5.0 * p2) * params.r_x / g2;
    const cplx c4 = cplx(0.5, 0.5) * (q - kI * g2 + 5.0 * kI * p2) * params.r_x / g2;
    return {cplx(1.0), cplx(-params.r_z), c3, c4};
}

ComplexMatrix analytic_state(const SymmetricQubitParams& params, double t) {
    params.validate();
    require_time(t, "analytic_state");
    const double q = params.q();
    const double p = params.p;
    const double g2 = params.g * params.g;
    const double s = g2 + 5.0 * p * p;
    const double pop = params.r_z * std::exp(-2.0 * g2 * t / (5.0 * p));
    const double decay = std::exp(-g2 * t / (5.0 * p));
    const double ch = std::cosh(t * q / (5.0 * p));
    const double sh = std::sinh(t * q / (5.0 * p));
    ComplexMatrix rho(2, 2);
    rho(0, 0) = 0.5 * (1.0 + pop);
    rho(1, 1) = 0.5 * (1.0 - pop);
    rho(0, 1) = 0.5 * cplx(1.0, 1.0) * params.r_x * decay * (q * sh - kI * s * ch) / s;
    rho(1, 0) = 0.5 * cplx(1.0, 1.0) * params.r_x * decay * (s * ch - kI * q * sh) / s;
    return rho;
}

ComplexVector alpha_coefficients(const liouville::LiouvilleSpectrum& spec, const ComplexMatrix& sigma) {
    if (sigma.rows() != spec.hilbert_dim() || sigma.cols() != spec.hilbert_dim()) {
        throw std::invalid_argument("alpha_coefficients: operator dimension mismatch");
    }
    return spec.left_vectors().adjoint() * vectorize(sigma);
}

liouville::OverlapCoefficients c_prime_relation(const liouville::OverlapCoefficients& c,
                                                const ComplexVector& alpha_x, const ComplexVector& alpha_y,
                                                double beta, double r_x, double r_y) {
    if (alpha_x.size() != c.c.size() || alpha_y.size() != c.c.size()) {
        throw std::invalid_argument("c_prime_relation: coefficient lengths differ");
    }
    const double sb = std::sin(beta);
    const double cb = std::cos(beta);
    return {c.c + sb * ((r_y * cb - r_x * sb) * alpha_x - (r_y * sb + r_x * cb) * alpha_y)};
}

liouville::OverlapCoefficients c_prime_relation_symmetric(const liouville::OverlapCoefficients& c,
                                                          const ComplexVector& alpha_x,
                                                          const ComplexVector& alpha_y, double beta,
                                                          double r_x) {
    if (alpha_x.size() != c.c.size() || alpha_y.size() != c.c.size()) {
        throw std::invalid_argument("c_prime_relation_symmetric: coefficient lengths differ");
    }
    const double sb = std::sin(beta);
    const double cb = std::cos(beta);
    return {c.c + r_x * sb * ((cb - sb) * alpha_x - (sb + cb) * alpha_y)};
}

double analytic_l1(const SymmetricQubitParams& params, double t) {
    params.validate();
    require_time(t, "analytic_l1");
    const double q = params.q();
    const ScaledAB ab = scaled_ab(params, q, t);
    return kSqrt2 * std::abs(params.r_x) * std::exp(ab.log_prefactor) * std::sqrt(ab.b);
}

double analytic_l1_prime(const SymmetricQubitParams& params, double t) {
    params.validate();
    require_time(t, "analytic_l1_prime");
    const double q = require_positive_q(params, "analytic_l1_prime");
    const ScaledAB ab = scaled_ab(params, q, t);
    return kSqrt2 * std::abs(params.r_x) * std::exp(ab.log_prefactor) * std::sqrt(std::max(ab.a, 0.0));
}

double analytic_l1_difference(const SymmetricQubitParams& params, double t) {
    params.validate();
    require_time(t, "analytic_l1_difference");
    const double q = require_positive_q(params, "analytic_l1_difference");
    const ScaledAB ab = scaled_ab(params, q, t);
    return kSqrt2 * std::abs(params.r_x) * std::exp(ab.log_prefactor) *
           (std::sqrt(std::max(ab.a, 0.0)) - std::sqrt(ab.b));
}

double a_minus_b(const SymmetricQubitParams& params, double t) {
    params.validate();
    require_time(t, "a_minus_b");
    const double q = require_positive_q(params, "a_minus_b");
    const double p = params.p;
    const double g2 = params.g * params.g;
    const double x = t * q / (5.0 * p);
    const double s2b = std::sin(2.0 * params.beta);
    return g2 * (q * std::sin(4.0 * params.beta) * std::sinh(2.0 * x) + 20.0 * p * p * s2b * s2b * std::sinh(x) * std::sinh(x)) /
           (q * q);
}

bool theorem1_predicate(double p, double g, double beta) {
    if (!(p > 0.0) || !(g > std::sqrt(5.0) * p)) return false;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double b = std::fmod(beta, two_pi);
    if (b < 0.0) b += two_pi;
    // Multiples of pi/4 are decided exactly rather than through sin(4 beta) round-off.
    const double quarter_turns = 4.0 * b / std::numbers::pi;
    const double nearest = std::round(quarter_turns);
    if (std::abs(quarter_turns - nearest) < 1e-12 * std::max(1.0, nearest)) {
        const auto m = static_cast<long long>(nearest);
        return m % 2 != 0;  // sin 4beta = 0, sin 2beta != 0 iff m odd
    }
    return std::sin(4.0 * b) > 0.0;
}

} // namespace qme::analytic
