// dicke.cpp: Effective spin Hamiltonian and jump operator

#include "qme/dicke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qme::dicke {

void DickeParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("DickeParams: " + msg); };
    if (!(std::isfinite(Omega) && Omega > 0.0)) fail("Omega must be finite and > 0");
    if (!(std::isfinite(omega) && omega >= 0.0)) fail("omega must be finite and >= 0");
    if (!std::isfinite(g)) fail("g must be finite");
    if (!(std::isfinite(kappa) && kappa > 0.0)) fail("kappa must be finite and > 0");
    if (N < 1) fail("N must be >= 1");
}

std::optional<std::string> adiabatic_advisory(const DickeParams& p) {
    const double scale = std::max(p.Omega, p.omega);
    if (p.kappa >= 2.0 * scale) return std::nullopt;
    std::ostringstream os;
    os << "kappa = " << p.kappa << " is below 2*max(Omega, omega) = " << 2.0 * scale
       << "; adiabatic elimination of the boson may be inaccurate";
    return os.str();
}

cplx adiabatic_a_coefficient(const DickeParams& p) {
    p.validate();
    const double denom = std::sqrt(static_cast<double>(p.N)) * (4.0 * p.omega * p.omega + p.kappa * p.kappa);
    return -p.g * cplx(4.0 * p.omega, 2.0 * p.kappa) / denom;
}

ComplexMatrix effective_hamiltonian(const DickeParams& p) {
    p.validate();
    const ComplexMatrix sx = spin_x(p.N);
    const double coupling =
        4.0 * p.omega * p.g * p.g / std::sqrt(4.0 * p.omega * p.omega + p.kappa * p.kappa);
    ComplexMatrix h = p.Omega * spin_z(p.N) - (coupling / p.N) * (sx * sx);
    return hermitian_part(h);
}

ComplexMatrix effective_jump(const DickeParams& p) {
    return std::sqrt(p.kappa) * adiabatic_a_coefficient(p) * spin_x(p.N);
}

BipartiteModel bipartite_model(const BipartiteDickeParams& bp) {
    BipartiteModel m;
    m.dim_a = bp.a.dim();
    m.dim_b = bp.b.dim();
    const ComplexMatrix ia = identity(m.dim_a);
    const ComplexMatrix ib = identity(m.dim_b);
    m.H = kron(effective_hamiltonian(bp.a), ib) + kron(ia, effective_hamiltonian(bp.b));
    m.jumps.push_back(kron(effective_jump(bp.a), ib));
    m.jumps.push_back(kron(ia, effective_jump(bp.b)));
    return m;
}

} // namespace qme::dicke
