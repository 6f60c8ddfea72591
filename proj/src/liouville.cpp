// liouville.cpp: Liouvillian construction and spectral evolution

#include "qme/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "qme/errors.hpp"

namespace qme::liouville {

namespace {

// exp(lambda t) with Re(lambda) t < -700 is flushed to zero.
constexpr double kUnderflowExponent = -700.0;
// Entries below this fraction of the largest one are treated as structural zeros
// when choosing the normalisation entry of an eigenvector.
constexpr double kSignificantEntry = 1e-8;
// Largest Hermitian/trace correction evolve() is allowed to absorb.
constexpr double kMaxCorrection = 1e-8;

cplx last_significant(const Eigen::Ref<const ComplexVector>& v) {
    const double cutoff = kSignificantEntry * v.cwiseAbs().maxCoeff();
    for (Index i = v.size() - 1; i >= 0; --i)
        if (std::abs(v(i)) > cutoff) return v(i);
    return cplx(1.0, 0.0);
}

DensityMatrix::Tolerances evolved_tolerances() {
    DensityMatrix::Tolerances tol;
    tol.hermiticity = 1e-10;
    tol.trace = 1e-10;
    tol.positivity = 1e-8;
    return tol;
}

// Symmetrise and renormalise a state produced by round-off-prone arithmetic,
// refusing corrections larger than kMaxCorrection.
DensityMatrix clean_state(ComplexMatrix x, const char* who) {
    const double herm = hermiticity_defect(x);
    const cplx tr = x.trace();
    if (!std::isfinite(herm) || herm > kMaxCorrection || std::abs(tr - 1.0) > kMaxCorrection) {
        std::ostringstream os;
        os << who << ": state correction too large (hermiticity defect " << herm << ", trace " << tr << ")";
        throw NumericFailure(os.str());
    }
    x = hermitian_part(x);
    x /= x.trace().real();
    try {
        return DensityMatrix(std::move(x), evolved_tolerances());
    } catch (const std::invalid_argument& e) {
        throw NumericFailure(std::string(who) + ": " + e.what());
    }
}

} // namespace

void LindbladGenerator::validate() const {
    if (H.rows() == 0 || H.rows() != H.cols()) {
        throw std::invalid_argument("LindbladGenerator: H must be square and nonempty");
    }
    if (hermiticity_defect(H) > 1e-10) {
        throw std::invalid_argument("LindbladGenerator: H is not Hermitian");
    }
    for (const auto& l : jumps) {
        if (l.rows() != H.rows() || l.cols() != H.cols()) {
            throw std::invalid_argument("LindbladGenerator: jump operator dimension " +
                                        std::to_string(l.rows()) + "x" + std::to_string(l.cols()) +
                                        " does not match H of dimension " + std::to_string(H.rows()));
        }
    }
}

LindbladGenerator LindbladGenerator::from_dicke(const dicke::DickeParams& p) {
    return LindbladGenerator{dicke::effective_hamiltonian(p), {dicke::effective_jump(p)}};
}

LindbladGenerator LindbladGenerator::from_bipartite(const dicke::BipartiteDickeParams& bp) {
    auto m = dicke::bipartite_model(bp);
    return LindbladGenerator{std::move(m.H), std::move(m.jumps)};
}

ComplexMatrix build_liouvillian(const LindbladGenerator& gen) {
    gen.validate();
    const Index d = gen.dim();
    const ComplexMatrix id = identity(d);
    ComplexMatrix lv = -kI * (kron(id, gen.H) - kron(gen.H.transpose(), id));
    for (const auto& l : gen.jumps) {
        const ComplexMatrix ll = l.adjoint() * l;
        lv += kron(l.conjugate(), l) - 0.5 * (kron(id, ll) + kron(ll.transpose(), id));
    }
    return lv;
}

ComplexMatrix lindblad_rhs(const LindbladGenerator& gen, const ComplexMatrix& rho) {
    ComplexMatrix out = -kI * (gen.H * rho - rho * gen.H);
    for (const auto& l : gen.jumps) {
        const ComplexMatrix ll = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll);
    }
    return out;
}

LiouvilleSpectrum::LiouvilleSpectrum(ComplexVector eigenvalues, ComplexMatrix right, ComplexMatrix left)
    : LiouvilleSpectrum(std::move(eigenvalues), std::move(right), std::move(left), ComplexVector()) {}

LiouvilleSpectrum::LiouvilleSpectrum(ComplexVector eigenvalues, ComplexMatrix right, ComplexMatrix left,
                                     ComplexVector normalizers)
    : eigenvalues_(std::move(eigenvalues)), right_(std::move(right)), left_(std::move(left)),
      normalizers_(std::move(normalizers)) {
    const Index n = eigenvalues_.size();
    if (n == 0 || right_.rows() != n || right_.cols() != n || left_.rows() != n || left_.cols() != n ||
        (normalizers_.size() != 0 && normalizers_.size() != n)) {
        throw std::invalid_argument("LiouvilleSpectrum: inconsistent eigen-data dimensions");
    }
    hilbert_dim_ = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (hilbert_dim_ * hilbert_dim_ != n) {
        throw std::invalid_argument("LiouvilleSpectrum: size " + std::to_string(n) + " is not a square");
    }

    if (normalizers_.size() == 0) {
        normalizers_.resize(n);
        for (Index i = 0; i < n; ++i) normalizers_(i) = left_.col(i).dot(right_.col(i));
    }

    gap_ = n > 1 ? -eigenvalues_(1).real() : 0.0;

    min_separation_ = n > 1 ? std::numeric_limits<double>::infinity() : 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            min_separation_ = std::min(min_separation_, std::abs(eigenvalues_(i) - eigenvalues_(j)));
    degenerate_ = n > 1 && min_separation_ < kDegeneracyTol;

    const ComplexMatrix r1 = this->right(0);
    const cplx tr = r1.trace();
    if (std::abs(tr) > 1e-12) steady_ = ComplexMatrix(r1 / tr);
}

ComplexMatrix LiouvilleSpectrum::right(Index i) const {
    return devectorize(right_.col(i));
}

ComplexMatrix LiouvilleSpectrum::left(Index i) const {
    return devectorize(left_.col(i));
}

LiouvilleSpectrum spectral_decompose(const ComplexMatrix& lv) {
    if (lv.rows() == 0 || lv.rows() != lv.cols()) {
        throw std::invalid_argument("spectral_decompose: Liouvillian must be square and nonempty");
    }
    const Index n = lv.rows();
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
    if (d * d != n) {
        throw std::invalid_argument("spectral_decompose: dimension " + std::to_string(n) + " is not d^2");
    }

    Eigen::ComplexEigenSolver<ComplexMatrix> es(lv, true);
    if (es.info() != Eigen::Success) throw NumericFailure("spectral_decompose: eigensolver did not converge");
    const ComplexVector& vals = es.eigenvalues();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return vals(a).real() > vals(b).real(); });
    // Within runs of (numerically) equal real part, order by descending imaginary part.
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() &&
               std::abs(vals(order[end]).real() - vals(order[start]).real()) < kDegeneracyTol)
            ++end;
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](Index a, Index b) { return vals(a).imag() > vals(b).imag(); });
        start = end;
    }

    ComplexVector sorted(n);
    ComplexMatrix right(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        sorted(k) = vals(src);
        right.col(k) = es.eigenvectors().col(src);
        right.col(k) /= last_significant(right.col(k));
    }

    Eigen::PartialPivLU<ComplexMatrix> lu(right);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-15)) {
        std::ostringstream os;
        os << "spectral_decompose: right eigenvector matrix is numerically singular (rcond " << rcond << ")";
        throw NumericFailure(os.str());
    }
    // Row i of R^{-1} is vec(l_i)^dag with Tr(l_i^dag r_j) = delta_ij.
    // Tr(l_i^dag r_i) is exactly 1 before rescaling, so k_i = 1 / conj(s_i).
    ComplexMatrix left = lu.inverse().adjoint();
    ComplexVector normalizers(n);
    for (Index k = 0; k < n; ++k) {
        const cplx s = last_significant(left.col(k));
        left.col(k) /= s;
        normalizers(k) = 1.0 / std::conj(s);
    }

    if (!right.allFinite() || !left.allFinite()) throw NumericFailure("spectral_decompose: non-finite eigenvectors");
    return LiouvilleSpectrum(std::move(sorted), std::move(right), std::move(left), std::move(normalizers));
}

SpectrumResiduals spectrum_residuals(const ComplexMatrix& lv, const LiouvilleSpectrum& spec) {
    SpectrumResiduals res;
    const Index n = spec.size();
    const ComplexMatrix& r = spec.right_vectors();
    const ComplexMatrix& l = spec.left_vectors();
    const ComplexMatrix lr = lv * r;
    const ComplexMatrix ll = lv.adjoint() * l;
    for (Index i = 0; i < n; ++i) {
        const cplx lam = spec.eigenvalue(i);
        res.right = std::max(res.right, (lr.col(i) - lam * r.col(i)).norm() / r.col(i).norm());
        res.left = std::max(res.left, (ll.col(i) - std::conj(lam) * l.col(i)).norm() / l.col(i).norm());
    }
    const ComplexMatrix gram = l.adjoint() * r;
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k)
            if (j != k)
                res.biorthogonality = std::max(res.biorthogonality,
                                               std::abs(gram(j, k)) / (l.col(j).norm() * r.col(k).norm()));
    return res;
}

DensityMatrix steady_state(const LiouvilleSpectrum& spec) {
    if (spec.degenerate()) throw Unsupported("steady_state: Liouvillian spectrum is degenerate");
    if (std::abs(spec.eigenvalue(0)) > 1e-8) {
        std::ostringstream os;
        os << "steady_state: leading eigenvalue " << spec.eigenvalue(0) << " is not zero";
        throw NumericFailure(os.str());
    }
    if (!spec.steady_matrix()) throw NumericFailure("steady_state: Tr(r_1) vanishes");
    return clean_state(*spec.steady_matrix(), "steady_state");
}

OverlapCoefficients overlap_coeffs(const LiouvilleSpectrum& spec, const DensityMatrix& rho0) {
    if (rho0.dim() != spec.hilbert_dim()) {
        throw std::invalid_argument("overlap_coeffs: state dimension " + std::to_string(rho0.dim()) +
                                    " does not match spectrum dimension " + std::to_string(spec.hilbert_dim()));
    }
    return OverlapCoefficients{spec.left_vectors().adjoint() * vectorize(rho0.matrix())};
}

DensityMatrix evolve(const LiouvilleSpectrum& spec, const OverlapCoefficients& coeffs, double t) {
    if (spec.degenerate()) {
        throw Unsupported("evolve: spectral evolution requires non-degenerate eigenvalues; use evolve_ode");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolve: t must be finite and >= 0");
    if (coeffs.c.size() != spec.size()) throw std::invalid_argument("evolve: coefficient count mismatch");
    if (!spec.steady_matrix()) throw NumericFailure("evolve: steady state unavailable");

    const Index n = spec.size();
    ComplexVector weights = ComplexVector::Zero(n);
    for (Index i = 1; i < n; ++i) {
        const cplx lam = spec.eigenvalue(i);
        if (lam.real() * t < kUnderflowExponent) continue;
        weights(i) = std::exp(lam * t) * coeffs.c(i) / spec.normalizers()(i);
    }
    ComplexMatrix x = *spec.steady_matrix() + devectorize(spec.right_vectors() * weights);
    return clean_state(std::move(x), "evolve");
}

namespace {

void rk4_advance(const LindbladGenerator& gen, ComplexMatrix& rho, double span, double dt) {
    const auto steps = static_cast<long long>(std::ceil(span / dt - 1e-12));
    if (steps <= 0) return;
    const double h = span / static_cast<double>(steps);
    for (long long s = 0; s < steps; ++s) {
        const ComplexMatrix k1 = lindblad_rhs(gen, rho);
        const ComplexMatrix k2 = lindblad_rhs(gen, rho + 0.5 * h * k1);
        const ComplexMatrix k3 = lindblad_rhs(gen, rho + 0.5 * h * k2);
        const ComplexMatrix k4 = lindblad_rhs(gen, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

DensityMatrix finish_ode(ComplexMatrix rho, double dt) {
    const double drift = std::abs(rho.trace() - 1.0);
    if (!rho.allFinite() || drift > 1e-6) {
        std::ostringstream os;
        os << "evolve_ode: trace drifted by " << drift << " with dt = " << dt << "; reduce dt";
        throw NumericFailure(os.str());
    }
    rho = hermitian_part(rho);
    rho /= rho.trace().real();
    try {
        return DensityMatrix(std::move(rho), evolved_tolerances());
    } catch (const std::invalid_argument& e) {
        throw NumericFailure(std::string("evolve_ode: ") + e.what() + "; reduce dt");
    }
}

void check_ode_inputs(const LindbladGenerator& gen, const DensityMatrix& rho0, double dt) {
    gen.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("evolve_ode: dt must be finite and > 0");
    if (rho0.dim() != gen.dim()) throw std::invalid_argument("evolve_ode: state dimension mismatch");
}

} // namespace

DensityMatrix evolve_ode(const LindbladGenerator& gen, const DensityMatrix& rho0, double t_end, double dt) {
    check_ode_inputs(gen, rho0, dt);
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("evolve_ode: t_end must be >= 0");
    ComplexMatrix rho = rho0.matrix();
    rk4_advance(gen, rho, t_end, dt);
    return finish_ode(std::move(rho), dt);
}

std::vector<DensityMatrix> evolve_ode_samples(const LindbladGenerator& gen, const DensityMatrix& rho0,
                                              const std::vector<double>& times, double dt) {
    check_ode_inputs(gen, rho0, dt);
    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    ComplexMatrix rho = rho0.matrix();
    double now = 0.0;
    for (double t : times) {
        if (!(t >= now) || !std::isfinite(t)) {
            throw std::invalid_argument("evolve_ode_samples: times must be finite, >= 0 and nondecreasing");
        }
        rk4_advance(gen, rho, t - now, dt);
        now = t;
        out.push_back(finish_ode(rho, dt));
    }
    return out;
}

} // namespace qme::liouville
