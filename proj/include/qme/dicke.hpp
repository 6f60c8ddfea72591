// dicke.hpp: Adiabatically eliminated dissipative Dicke model
//
// With the bosonic mode eliminated, the spin sector evolves under
//   H  = Omega S_z - (4 omega g^2 / sqrt(4 omega^2 + k^2)) S_x^2 / N
//   L1 = sqrt(k) * a_coef * S_x,  a_coef = -g (4 omega + 2 i k) / (sqrt(N) (4 omega^2 + k^2))

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qme/linalg.hpp"

namespace qme::dicke {

struct DickeParams {
    double Omega = 1.0;  // spin splitting
    double omega = 1.0;  // boson frequency, >= 0
    double g = 0.0;      // coupling
    double kappa = 1.0;  // boson decay rate, > 0
    int N = 1;           // number of spins

    // Throws std::invalid_argument if any field is out of range.
    void validate() const;

    Index dim() const { return N + 1; }
};

// Set when kappa is not large compared with Omega and omega; never fatal.
std::optional<std::string> adiabatic_advisory(const DickeParams& p);

struct BipartiteDickeParams {
    DickeParams a;
    DickeParams b;
};

cplx adiabatic_a_coefficient(const DickeParams& p);
ComplexMatrix effective_hamiltonian(const DickeParams& p);
ComplexMatrix effective_jump(const DickeParams& p);

struct BipartiteModel {
    ComplexMatrix H;
    std::vector<ComplexMatrix> jumps;  // {L_A (x) I, I (x) L_B}
    Index dim_a = 0;
    Index dim_b = 0;
};

BipartiteModel bipartite_model(const BipartiteDickeParams& bp);

} // namespace qme::dicke
