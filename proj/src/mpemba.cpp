// mpemba.cpp: State transformations and Mpemba verdicts

#include "qme/mpemba.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qme/errors.hpp"

namespace qme::mpemba {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHermitianModeTol = 1e-8;
constexpr double kResidualTarget = 1e-8;
constexpr double kResidualFloor = 1e-6;

double reduce_angle(double beta) {
    double b = std::fmod(beta, kTwoPi);
    if (b < 0.0) b += kTwoPi;
    return b;
}

ComplexVector pure_state_vector(const DensityMatrix& rho0) {
    const double purity = (rho0.matrix() * rho0.matrix()).trace().real();
    if (std::abs(purity - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "slowest_mode_elimination: initial state is not pure (purity " << purity << ")";
        throw std::invalid_argument(os.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho0.matrix());
    return es.eigenvectors().col(rho0.dim() - 1);
}

// Phase e^{i phi} with l = e^{i phi} M, M Hermitian, if such a phase exists.
std::optional<cplx> hermitian_phase(const ComplexMatrix& l) {
    const double scale = l.cwiseAbs().maxCoeff();
    if (scale == 0.0) return std::nullopt;
    cplx phase;
    Index di = 0;
    const double dmax = l.diagonal().cwiseAbs().maxCoeff(&di);
    if (dmax > 1e-8 * scale) {
        phase = l(di, di) / dmax;
    } else {
        Index r = 0, c = 0;
        l.cwiseAbs().maxCoeff(&r, &c);
        phase = std::sqrt(l(r, c) * l(c, r));
        if (std::abs(phase) == 0.0) return std::nullopt;
        phase /= std::abs(phase);
    }
    const ComplexMatrix m = l / phase;
    if (hermiticity_defect(m) > kHermitianModeTol * scale) return std::nullopt;
    return phase;
}

// Rotation by theta in span{psi, chi} (orthonormal), identity elsewhere.
ComplexMatrix plane_rotation(const ComplexVector& psi, const ComplexVector& chi, double theta) {
    const Index d = psi.size();
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    ComplexMatrix u = ComplexMatrix::Identity(d, d) - psi * psi.adjoint() - chi * chi.adjoint();
    u += (c * psi + s * chi) * psi.adjoint();
    u += (c * chi - s * psi) * chi.adjoint();
    return u;
}

struct PlaneCandidate {
    ComplexVector chi;
    double theta = 0.0;
};

std::optional<PlaneCandidate> hermitian_plane_rotation(const ComplexMatrix& m, const ComplexVector& psi) {
    const double f0 = (psi.adjoint() * m * psi)(0, 0).real();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    std::optional<PlaneCandidate> best;
    for (Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double mu = es.eigenvalues()(k);
        if (!(mu * f0 < 0.0)) continue;
        ComplexVector e = es.eigenvectors().col(k);
        const cplx a = psi.dot(e);
        if (std::abs(a) > 0.0) e *= std::conj(a) / std::abs(a);
        const double a_re = std::abs(a);
        ComplexVector perp = e - a_re * psi;
        const double b = perp.norm();
        if (b < 1e-14) continue;
        const ComplexVector chi = perp / b;
        const double theta_e = std::atan2(b, a_re);

        const auto f = [&](double theta) {
            const ComplexVector phi = std::cos(theta) * psi + std::sin(theta) * chi;
            return (phi.adjoint() * m * phi)(0, 0).real();
        };
        std::uintmax_t iters = 200;
        const auto bracket = boost::math::tools::toms748_solve(
            f, 0.0, theta_e, f0, mu, boost::math::tools::eps_tolerance<double>(52), iters);
        const double theta = 0.5 * (bracket.first + bracket.second);
        if (!best || theta < best->theta) best = PlaneCandidate{chi, theta};
    }
    return best;
}

// Bounded minimisation of |<phi|l^dag|phi>|^2 over phi = cos(t) psi + e^{ia} sin(t) chi,
// with chi running over the computational directions orthogonalised against psi.
PlaneCandidate minimise_overlap(const ComplexMatrix& l, const ComplexVector& psi, double& best_value) {
    const ComplexMatrix ld = l.adjoint();
    const Index d = psi.size();
    const auto objective = [&](const ComplexVector& chi, double t, double a) {
        const ComplexVector phi = std::cos(t) * psi + std::exp(kI * a) * std::sin(t) * chi;
        return std::norm((phi.adjoint() * ld * phi)(0, 0));
    };
    best_value = std::numeric_limits<double>::infinity();
    PlaneCandidate best{ComplexVector::Zero(d), 0.0};
    double best_alpha = 0.0;
    constexpr int kGrid = 48;
    for (Index j = 0; j < d; ++j) {
        ComplexVector chi = ComplexVector::Zero(d);
        chi(j) = 1.0;
        chi -= psi.dot(chi) * psi;
        const double n = chi.norm();
        if (n < 1e-8) continue;
        chi /= n;
        double t = 0.0, a = 0.0, v = std::numeric_limits<double>::infinity();
        for (int it = 0; it <= kGrid; ++it)
            for (int ia = 0; ia < kGrid; ++ia) {
                const double tt = 0.5 * std::numbers::pi * it / kGrid;
                const double aa = kTwoPi * ia / kGrid;
                const double vv = objective(chi, tt, aa);
                if (vv < v) {
                    v = vv;
                    t = tt;
                    a = aa;
                }
            }
        // Compass search refinement.
        double step = 0.5 * std::numbers::pi / kGrid;
        while (step > 1e-15) {
            bool moved = false;
            const double cand[4][2] = {{t + step, a}, {t - step, a}, {t, a + step}, {t, a - step}};
            for (const auto& c : cand) {
                const double tt = std::clamp(c[0], 0.0, 0.5 * std::numbers::pi);
                const double vv = objective(chi, tt, c[1]);
                if (vv < v) {
                    v = vv;
                    t = tt;
                    a = c[1];
                    moved = true;
                }
            }
            if (!moved) step *= 0.5;
        }
        if (v < best_value) {
            best_value = v;
            best = PlaneCandidate{chi, t};
            best_alpha = a;
        }
    }
    best.chi *= std::exp(kI * best_alpha);
    best_value = std::sqrt(best_value);
    return best;
}

} // namespace

// ---------------------------------------------------------------------------

ComplexMatrix coherence_preserving_unitary(double beta) {
    const double b = reduce_angle(beta);
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = std::exp(kI * b);
    u(1, 1) = std::exp(-kI * b);
    return u;
}

DensityMatrix rotated_bloch_state(const BlochVector& b, double beta) {
    const double c2 = std::cos(2.0 * beta);
    const double s2 = std::sin(2.0 * beta);
    return bloch_state({b.x * c2 + b.y * s2, b.y * c2 - b.x * s2, b.z});
}

double GaussianSource::uniform() {
    // 53 random bits in (0, 1].
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSource::next() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    return r * std::cos(kTwoPi * u2);
}

cplx GaussianSource::next_complex() {
    const double x = next();
    const double y = next();
    return cplx(x, y) / std::numbers::sqrt2;
}

ComplexMatrix haar_unitary(GaussianSource& source, Index d) {
    if (d < 1) throw std::invalid_argument("haar_unitary: dimension must be >= 1");
    ComplexMatrix z(d, d);
    for (Index j = 0; j < d; ++j)
        for (Index i = 0; i < d; ++i) z(i, j) = source.next_complex();
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < d; ++j) {
        const cplx rjj = r(j, j);
        if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
    }
    return q;
}

ComplexMatrix random_local_unitary(std::uint64_t seed, Index d1, Index d2) {
    GaussianSource source(seed);
    const ComplexMatrix ua = haar_unitary(source, d1);
    const ComplexMatrix ub = haar_unitary(source, d2);
    return kron(ua, ub);
}

ComplexVector haar_random_state(std::uint64_t seed, Index d) {
    if (d < 1) throw std::invalid_argument("haar_random_state: dimension must be >= 1");
    GaussianSource source(seed);
    ComplexVector v(d);
    for (Index i = 0; i < d; ++i) v(i) = source.next_complex();
    return v / v.norm();
}

ModeElimination slowest_mode_elimination(const liouville::LiouvilleSpectrum& spec, const DensityMatrix& rho0,
                                         Index mode) {
    if (rho0.dim() != spec.hilbert_dim()) throw std::invalid_argument("slowest_mode_elimination: dimension mismatch");
    if (mode < 1 || mode >= spec.size()) throw std::invalid_argument("slowest_mode_elimination: mode out of range");
    if (spec.degenerate()) throw Unsupported("slowest_mode_elimination: degenerate spectrum");

    const ComplexVector psi = pure_state_vector(rho0);
    const ComplexMatrix l = spec.left(mode);
    const auto overlap = [&](const ComplexMatrix& u) {
        const ComplexVector phi = u * psi;
        return std::abs((phi.adjoint() * l.adjoint() * phi)(0, 0));
    };

    ModeElimination out;
    const Index d = rho0.dim();
    out.initial_overlap = overlap(ComplexMatrix::Identity(d, d));
    if (out.initial_overlap < kResidualTarget) {
        out.unitary = ComplexMatrix::Identity(d, d);
        out.residual = out.initial_overlap;
        return out;
    }

    if (const auto phase = hermitian_phase(l)) {
        const ComplexMatrix m = hermitian_part(l / *phase);
        if (const auto cand = hermitian_plane_rotation(m, psi)) {
            out.unitary = plane_rotation(psi, cand->chi, cand->theta);
            out.angle = cand->theta;
            out.residual = overlap(out.unitary);
            if (out.residual < kResidualTarget) return out;
        }
    }

    double floor = 0.0;
    const PlaneCandidate cand = minimise_overlap(l, psi, floor);
    out.used_minimization = true;
    out.unitary = plane_rotation(psi, cand.chi, cand.theta);
    out.angle = cand.theta;
    out.residual = overlap(out.unitary);
    if (out.residual > kResidualFloor) {
        std::ostringstream os;
        os << "slowest_mode_elimination: smallest reachable overlap " << out.residual << " exceeds "
           << kResidualFloor;
        throw ConstructionFailed(os.str());
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> uniform_grid(double t_end, std::size_t n_points) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("uniform_grid: t_end must be > 0");
    if (n_points < 2) throw std::invalid_argument("uniform_grid: need at least two points");
    std::vector<double> t(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        t[i] = t_end * static_cast<double>(i) / static_cast<double>(n_points - 1);
    return t;
}

std::vector<double> stepped_grid(double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end >= dt) || !std::isfinite(t_end)) {
        throw std::invalid_argument("stepped_grid: need 0 < dt <= t_end");
    }
    const auto n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = static_cast<double>(i) * dt;
    return t;
}

std::vector<double> default_grid(const liouville::LiouvilleSpectrum& spec) {
    if (!(spec.gap() > 0.0)) throw std::invalid_argument("default_grid: spectral gap must be positive");
    return uniform_grid(60.0 / spec.gap(), 2000);
}

void Trajectory::validate() const {
    if (times.empty() || times.size() != values.size()) {
        throw std::invalid_argument("Trajectory: times and values must be nonempty and of equal length");
    }
    if (times.front() != 0.0) throw std::invalid_argument("Trajectory: times must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("Trajectory: times must increase strictly");
}

double Trajectory::grid_step() const {
    double step = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) step = std::max(step, times[i] - times[i - 1]);
    return step;
}

Trajectory sample_trajectory(const liouville::LiouvilleSpectrum& spec, const DensityMatrix& rho0,
                             measures::MeasureKind measure, const std::vector<double>& times,
                             std::optional<measures::Bipartition> bipartition) {
    Trajectory traj;
    traj.times = times;
    traj.measure = measure;
    traj.values.resize(times.size());
    traj.validate();

    const DensityMatrix rho_ss = liouville::steady_state(spec);
    const auto coeffs = liouville::overlap_coeffs(spec, rho0);
    traj.steady_value = measures::measure_value(measure, rho_ss, rho_ss, bipartition);
    for (std::size_t i = 0; i < times.size(); ++i) {
        traj.values[i] = measures::measure_value(measure, liouville::evolve(spec, coeffs, times[i]), rho_ss, bipartition);
    }
    return traj;
}

std::optional<double> relaxation_time(const Trajectory& traj, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("relaxation_time: eps must be > 0");
    traj.validate();
    std::size_t n = traj.values.size();
    if (!(std::abs(traj.values[n - 1] - traj.steady_value) < eps)) return std::nullopt;
    while (n > 0 && std::abs(traj.values[n - 1] - traj.steady_value) < eps) --n;
    return traj.times[n];
}

const char* to_string(Ordering o) {
    switch (o) {
    case Ordering::AFaster: return "A_faster";
    case Ordering::BFaster: return "B_faster";
    case Ordering::Tie: return "tie";
    case Ordering::Undetermined: return "undetermined";
    }
    return "undetermined";
}

MpembaVerdict detect_mpemba(const Trajectory& a, const Trajectory& b, double eps, double tol_init) {
    a.validate();
    b.validate();
    if (a.times != b.times) throw std::invalid_argument("detect_mpemba: trajectories use different time grids");
    if (a.measure != b.measure) throw std::invalid_argument("detect_mpemba: trajectories use different measures");

    MpembaVerdict v;
    v.epsilon = eps;
    v.grid_step = a.grid_step();
    v.initial_equal = std::abs(a.values.front() - b.values.front()) < tol_init;
    v.relax_time_a = relaxation_time(a, eps);
    v.relax_time_b = relaxation_time(b, eps);

    if (v.relax_time_a && v.relax_time_b) {
        const double diff = *v.relax_time_a - *v.relax_time_b;
        if (std::abs(diff) <= v.grid_step * (1.0 + 1e-9)) v.ordering = Ordering::Tie;
        else v.ordering = diff < 0.0 ? Ordering::AFaster : Ordering::BFaster;
    } else if (v.relax_time_a) {
        v.ordering = Ordering::AFaster;
    } else if (v.relax_time_b) {
        v.ordering = Ordering::BFaster;
    }

    constexpr double kZero = 1e-15;
    int last_sign = 0;
    double last_t = 0.0, last_d = 0.0;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        const int s = d > kZero ? 1 : (d < -kZero ? -1 : 0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) {
            v.crossing_times.push_back(last_t + (a.times[i] - last_t) * last_d / (last_d - d));
        }
        last_sign = s;
        last_t = a.times[i];
        last_d = d;
    }
    return v;
}

bool opposite_orderings(Ordering o1, Ordering o2) {
    return (o1 == Ordering::AFaster && o2 == Ordering::BFaster) ||
           (o1 == Ordering::BFaster && o2 == Ordering::AFaster);
}

RoleReversalVerdict role_reversal(MpembaVerdict v1, MpembaVerdict v2) {
    RoleReversalVerdict out{std::move(v1), std::move(v2), false};
    out.reversed = opposite_orderings(out.verdict_1.ordering, out.verdict_2.ordering);
    return out;
}

RoleReversalVerdict detect_role_reversal(const liouville::LindbladGenerator& gen1,
                                         const liouville::LindbladGenerator& gen2, const StatePair& states,
                                         measures::MeasureKind measure, const std::vector<double>& grid1,
                                         const std::vector<double>& grid2, double eps, double tol_init,
                                         std::optional<measures::Bipartition> bipartition) {
    const auto run = [&](const liouville::LindbladGenerator& gen, const std::vector<double>& grid) {
        const auto spec = liouville::spectral_decompose(liouville::build_liouvillian(gen));
        return detect_mpemba(sample_trajectory(spec, states.a, measure, grid, bipartition),
                             sample_trajectory(spec, states.b, measure, grid, bipartition), eps, tol_init);
    };
    return role_reversal(run(gen1, grid1), run(gen2, grid2));
}

nlohmann::json to_json(const MpembaVerdict& v) {
    const auto opt = [](const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(nullptr); };
    return nlohmann::json{{"initial_equal", v.initial_equal},
                          {"relax_time_a", opt(v.relax_time_a)},
                          {"relax_time_b", opt(v.relax_time_b)},
                          {"ordering", to_string(v.ordering)},
                          {"epsilon", v.epsilon},
                          {"grid_step", v.grid_step},
                          {"crossing_times", v.crossing_times}};
}

nlohmann::json to_json(const RoleReversalVerdict& v, std::uint64_t seed) {
    return nlohmann::json{{"format", "qme-verdict"},
                          {"version", kVerdictFormatVersion},
                          {"seed", seed},
                          {"verdict_1", to_json(v.verdict_1)},
                          {"verdict_2", to_json(v.verdict_2)},
                          {"reversed", v.reversed}};
}

} // namespace qme::mpemba
