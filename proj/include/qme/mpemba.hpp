// mpemba.hpp: Initial-state transformations and Mpemba verdicts
//
// A quantum Mpemba effect is reported for two states with equal initial value of
// a relaxation quantifier when one of them enters the epsilon band around the
// steady value for good strictly earlier (more than one grid step) than the other.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <json.hpp>

#include "qme/liouville.hpp"
#include "qme/measures.hpp"

namespace qme::mpemba {

inline constexpr int kVerdictFormatVersion = 1;

// ---------------------------------------------------------------------------
// Unitaries and random states

// U(beta) = exp(i beta sigma_z) = diag(e^{i beta}, e^{-i beta}).
ComplexMatrix coherence_preserving_unitary(double beta);

// U(beta) bloch_state(b) U(beta)^dag, built from the rotated Bloch vector.
DensityMatrix rotated_bloch_state(const BlochVector& b, double beta);

// Standard normal variates from a 64-bit Mersenne Twister through Box-Muller,
// so a seed produces the same stream with every standard library.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
    double next();
    cplx next_complex();  // (x + i y) / sqrt(2)

private:
    double uniform();
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

// Haar unitary via QR of a complex Gaussian matrix with phase-fixed R diagonal.
ComplexMatrix haar_unitary(GaussianSource& source, Index d);

// U_A (x) U_B with independent Haar factors drawn in that order from one seed.
ComplexMatrix random_local_unitary(std::uint64_t seed, Index d1, Index d2);

// Normalised complex Gaussian vector.
ComplexVector haar_random_state(std::uint64_t seed, Index d);

struct ModeElimination {
    ComplexMatrix unitary;
    double residual = 0.0;           // |Tr(l_m^dag U rho0 U^dag)|
    double initial_overlap = 0.0;    // |Tr(l_m^dag rho0)|
    double angle = 0.0;              // rotation angle in the chosen plane
    bool used_minimization = false;  // Hermitian-plane construction was not applicable
};

/// Unitary U such that U rho0 U^dag has no overlap with mode `mode` of the
/// spectrum (default: the slowest decaying one).
///
/// When l_mode is Hermitian up to a global phase, the pure state psi is rotated
/// towards an eigenvector of l_mode whose expectation has the opposite sign of
/// <psi|l_mode|psi>, and the angle is found by a bracketed root search. Among
/// all such eigenvectors the smallest rotation is kept. Otherwise a bounded
/// two-angle minimisation is used. Throws ConstructionFailed when the best
/// overlap found exceeds 1e-6 and std::invalid_argument for a mixed rho0.
ModeElimination slowest_mode_elimination(const liouville::LiouvilleSpectrum& spec, const DensityMatrix& rho0,
                                         Index mode = 1);

inline ComplexMatrix slowest_mode_elimination_unitary(const liouville::LiouvilleSpectrum& spec,
                                                      const DensityMatrix& rho0, Index mode = 1) {
    return slowest_mode_elimination(spec, rho0, mode).unitary;
}

// ---------------------------------------------------------------------------
// Trajectories

// n_points equally spaced times from 0 to t_end inclusive.
std::vector<double> uniform_grid(double t_end, std::size_t n_points);
// 0, dt, 2 dt, ... up to and including the last multiple of dt not beyond t_end.
std::vector<double> stepped_grid(double t_end, double dt);
// 2000 points up to 60 / gap.
std::vector<double> default_grid(const liouville::LiouvilleSpectrum& spec);

struct Trajectory {
    std::vector<double> times;
    std::vector<double> values;
    double steady_value = 0.0;
    measures::MeasureKind measure = measures::MeasureKind::L1Coherence;

    // Equal lengths, times[0] = 0, strictly increasing.
    void validate() const;
    // Largest spacing between adjacent samples.
    double grid_step() const;
};

// values[i] = measure_value(evolve(t_i)); steady_value = measure_value(rho_ss).
Trajectory sample_trajectory(const liouville::LiouvilleSpectrum& spec, const DensityMatrix& rho0,
                             measures::MeasureKind measure, const std::vector<double>& times,
                             std::optional<measures::Bipartition> bipartition = std::nullopt);

// Smallest sampled t* with |v(t) - steady| < eps for every sample t >= t*.
std::optional<double> relaxation_time(const Trajectory& traj, double eps);

// ---------------------------------------------------------------------------
// Verdicts

enum class Ordering { AFaster, BFaster, Tie, Undetermined };

const char* to_string(Ordering o);

struct MpembaVerdict {
    bool initial_equal = false;
    std::optional<double> relax_time_a;
    std::optional<double> relax_time_b;
    Ordering ordering = Ordering::Undetermined;
    double epsilon = 0.0;
    double grid_step = 0.0;
    std::vector<double> crossing_times;  // linear interpolation of sign changes of v_A - v_B
};

inline constexpr double kDefaultInitTolerance = 1e-9;

// Throws std::invalid_argument when the grids or measure kinds differ.
MpembaVerdict detect_mpemba(const Trajectory& a, const Trajectory& b, double eps,
                            double tol_init = kDefaultInitTolerance);

struct RoleReversalVerdict {
    MpembaVerdict verdict_1;
    MpembaVerdict verdict_2;
    bool reversed = false;
};

bool opposite_orderings(Ordering o1, Ordering o2);

RoleReversalVerdict role_reversal(MpembaVerdict v1, MpembaVerdict v2);

struct StatePair {
    DensityMatrix a;
    DensityMatrix b;
};

// Trajectories of the same state pair under two generators, each on its own grid.
RoleReversalVerdict detect_role_reversal(const liouville::LindbladGenerator& gen1,
                                         const liouville::LindbladGenerator& gen2, const StatePair& states,
                                         measures::MeasureKind measure, const std::vector<double>& grid1,
                                         const std::vector<double>& grid2, double eps,
                                         double tol_init = kDefaultInitTolerance,
                                         std::optional<measures::Bipartition> bipartition = std::nullopt);

nlohmann::json to_json(const MpembaVerdict& v);
nlohmann::json to_json(const RoleReversalVerdict& v, std::uint64_t seed);

} // namespace qme::mpemba
