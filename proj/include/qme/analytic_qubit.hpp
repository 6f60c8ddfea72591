// analytic_qubit.hpp: Closed-form dynamics of the symmetric qubit model
//
// For N = 1 and Omega = omega = kappa = p the effective Liouvillian is 4x4 and
// solvable by hand. With q = sqrt(g^4 - 25 p^4) the eigenvalues, in the
// conventional labelling, are
//   lambda_1 = 0, lambda_2 = -2g^2/(5p), lambda_3 = (-q - g^2)/(5p), lambda_4 = (q - g^2)/(5p).
// Note the labels are not ordered by real part; see conventional_label_order().
//
// Everything here serves as an independent oracle for the numerical stack.

#pragma once

#include <array>

#include "qme/dicke.hpp"
#include "qme/liouville.hpp"

namespace qme::analytic {

struct SymmetricQubitParams {
    double p = 1.0;     // Omega = omega = kappa = p
    double g = 0.0;
    double beta = 0.0;  // coherence-preserving rotation angle
    double r_x = 0.0;   // r_y = r_x
    double r_z = 0.0;

    // p > 0 and 2 r_x^2 + r_z^2 <= 1.
    void validate() const;

    bool real_q() const { return g * g * g * g >= 25.0 * p * p * p * p; }
    bool theorem_regime() const;
    // Throws Unsupported outside the real-q regime.
    double q() const;

    dicke::DickeParams dicke() const;
    BlochVector bloch() const { return {r_x, r_x, r_z}; }
};

// lambda_1..lambda_4 in the conventional labelling (complex q allowed).
std::array<cplx, 4> analytic_eigenvalues(double p, double g);

// order[label] is the index in the descending-real-part sorted spectrum that
// carries conventional label `label` (0-based), matched by nearest eigenvalue.
std::array<Index, 4> conventional_label_order(const liouville::LiouvilleSpectrum& spec, double p, double g);

// Closed-form k_i and c_i (last-entry-one normalisation), conventional labels.
std::array<cplx, 4> analytic_normalizers(const SymmetricQubitParams& params);
std::array<cplx, 4> analytic_overlaps(const SymmetricQubitParams& params);

// Closed-form rho(t) for the un-rotated initial state.
ComplexMatrix analytic_state(const SymmetricQubitParams& params, double t);

// (alpha)_i = Tr(l_i^dag sigma) for every mode of the spectrum.
ComplexVector alpha_coefficients(const liouville::LiouvilleSpectrum& spec, const ComplexMatrix& sigma);

// Overlaps of U(beta) rho_0 U(beta)^dag from those of rho_0.
liouville::OverlapCoefficients c_prime_relation(const liouville::OverlapCoefficients& c,
                                                const ComplexVector& alpha_x, const ComplexVector& alpha_y,
                                                double beta, double r_x, double r_y);

// Factored form of c_prime_relation valid when r_x = r_y.
liouville::OverlapCoefficients c_prime_relation_symmetric(const liouville::OverlapCoefficients& c,
                                                          const ComplexVector& alpha_x,
                                                          const ComplexVector& alpha_y, double beta,
                                                          double r_x);

// l1(rho(t)) and l1(rho'(t)); real q required (q > 0 for the rotated state).
double analytic_l1(const SymmetricQubitParams& params, double t);
double analytic_l1_prime(const SymmetricQubitParams& params, double t);

// l1(rho'(t)) - l1(rho(t)) = sqrt(2)|r_x| exp(-g^2 t / 5p) (sqrt(a) - sqrt(b)).
double analytic_l1_difference(const SymmetricQubitParams& params, double t);

// a - b = g^2 (q sin4b sinh(2tq/5p) + 20 p^2 sin^2(2b) sinh^2(tq/5p)) / q^2
double a_minus_b(const SymmetricQubitParams& params, double t);

// g > sqrt(5) p and (sin 4beta > 0, or sin 4beta = 0 with sin 2beta != 0).
bool theorem1_predicate(double p, double g, double beta);
inline bool theorem1_predicate(const SymmetricQubitParams& params) {
    return theorem1_predicate(params.p, params.g, params.beta);
}

} // namespace qme::analytic
