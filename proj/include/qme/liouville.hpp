// liouville.hpp: Vectorised GKSL generator and its spectral decomposition
//
// The Liouvillian acts on column-stacked density matrices as
//   Lv = -i (I (x) H - H^T (x) I)
//        + sum_mu [ conj(L_mu) (x) L_mu - 1/2 (I (x) L_mu^dag L_mu + (L_mu^dag L_mu)^T (x) I) ]
//
// For a non-degenerate spectrum with right eigenmatrices r_i, left eigenmatrices
// l_i and normalisers k_i = Tr(l_i^dag r_i), an initial state evolves as
//   rho(t) = rho_ss + sum_{i>=2} exp(lambda_i t) (c_i / k_i) r_i,   c_i = Tr(l_i^dag rho_0).

#pragma once

#include <optional>
#include <vector>

#include "qme/dicke.hpp"
#include "qme/linalg.hpp"

namespace qme::liouville {

struct LindbladGenerator {
    ComplexMatrix H;
    std::vector<ComplexMatrix> jumps;

    Index dim() const { return H.rows(); }

    // H square and Hermitian within 1e-10, every jump square of the same dimension.
    void validate() const;

    static LindbladGenerator from_dicke(const dicke::DickeParams& p);
    static LindbladGenerator from_bipartite(const dicke::BipartiteDickeParams& bp);
};

ComplexMatrix build_liouvillian(const LindbladGenerator& gen);

// Right-hand side of the master equation evaluated directly on a matrix,
// -i[H, rho] + sum_mu (L rho L^dag - 1/2 {L^dag L, rho}). No vectorisation involved.
ComplexMatrix lindblad_rhs(const LindbladGenerator& gen, const ComplexMatrix& rho);

inline constexpr double kDegeneracyTol = 1e-9;

/// Eigen-decomposition of a vectorised Liouvillian.
///
/// Eigenvalues are sorted by descending real part; eigenvalues whose real parts
/// agree within 1e-9 are ordered by descending imaginary part. Eigenvectors are
/// scaled so that their last significant entry (in column-stacked order) is 1,
/// which makes l_1 = I exactly and reproduces the usual closed-form qubit tables.
/// Left eigenvectors are the rows of the inverse right-eigenvector matrix, so
/// Tr(l_j^dag r_k) = 0 for j != k up to round-off.
class LiouvilleSpectrum {
public:
    // Normalisers computed as Tr(l_i^dag r_i).
    LiouvilleSpectrum(ComplexVector eigenvalues, ComplexMatrix right, ComplexMatrix left);
    // Normalisers supplied, e.g. known exactly from the inversion that produced `left`.
    // For strongly non-normal generators the recomputed products lose accuracy.
    LiouvilleSpectrum(ComplexVector eigenvalues, ComplexMatrix right, ComplexMatrix left, ComplexVector normalizers);

    Index hilbert_dim() const noexcept { return hilbert_dim_; }
    Index size() const noexcept { return eigenvalues_.size(); }

    const ComplexVector& eigenvalues() const noexcept { return eigenvalues_; }
    cplx eigenvalue(Index i) const { return eigenvalues_(i); }

    // Columns are vec(r_i) and vec(l_i).
    const ComplexMatrix& right_vectors() const noexcept { return right_; }
    const ComplexMatrix& left_vectors() const noexcept { return left_; }
    ComplexMatrix right(Index i) const;
    ComplexMatrix left(Index i) const;

    const ComplexVector& normalizers() const noexcept { return normalizers_; }

    // -Re(lambda_2); zero for a one-dimensional space.
    double gap() const noexcept { return gap_; }
    bool degenerate() const noexcept { return degenerate_; }
    double min_separation() const noexcept { return min_separation_; }

    // Cached rho_ss = r_1 / Tr(r_1), or nullopt when it cannot be formed.
    const std::optional<ComplexMatrix>& steady_matrix() const noexcept { return steady_; }

private:
    Index hilbert_dim_ = 0;
    ComplexVector eigenvalues_;
    ComplexMatrix right_;
    ComplexMatrix left_;
    ComplexVector normalizers_;
    double gap_ = 0.0;
    bool degenerate_ = false;
    double min_separation_ = 0.0;
    std::optional<ComplexMatrix> steady_;
};

LiouvilleSpectrum spectral_decompose(const ComplexMatrix& lv);

// Residuals max_i ||Lv r_i - lambda_i r_i|| and max_i ||Lv^dag l_i - conj(lambda_i) l_i||.
struct SpectrumResiduals {
    double right = 0.0;
    double left = 0.0;
    double biorthogonality = 0.0;  // max_{j != k} |Tr(l_j^dag r_k)| / (|l_j| |r_k|)
};
SpectrumResiduals spectrum_residuals(const ComplexMatrix& lv, const LiouvilleSpectrum& spec);

DensityMatrix steady_state(const LiouvilleSpectrum& spec);

struct OverlapCoefficients {
    ComplexVector c;
};

OverlapCoefficients overlap_coeffs(const LiouvilleSpectrum& spec, const DensityMatrix& rho0);

// Spectral evolution. Refuses degenerate spectra with qme::Unsupported.
DensityMatrix evolve(const LiouvilleSpectrum& spec, const OverlapCoefficients& coeffs, double t);

// Classical RK4 on the matrix-form master equation with a uniform step no larger
// than dt that lands exactly on t_end. Throws NumericFailure if the trace drifts
// by more than 1e-6.
DensityMatrix evolve_ode(const LindbladGenerator& gen, const DensityMatrix& rho0, double t_end, double dt);

// One RK4 sweep sampled at increasing times (each segment uses its own uniform
// step no larger than dt). Same failure modes as evolve_ode.
std::vector<DensityMatrix> evolve_ode_samples(const LindbladGenerator& gen, const DensityMatrix& rho0,
                                              const std::vector<double>& times, double dt);

} // namespace qme::liouville
