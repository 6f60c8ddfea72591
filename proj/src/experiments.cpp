// experiments.cpp: Runners for the six qme_cli experiments

#include "qme/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qme/analytic_qubit.hpp"
#include "qme/errors.hpp"
#include "qme/measures.hpp"
#include "qme/spectrum_io.hpp"

namespace qme::experiments {

using nlohmann::json;
using measures::MeasureKind;
using std::numbers::pi;

namespace {

constexpr double kOdeTolerance = 1e-6;

// ---- config access ---------------------------------------------------------

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("config: missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) throw std::invalid_argument(std::string("config: field '") + key + "' must be a number");
    return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

std::uint64_t seed_of(const json& cfg) {
    const json& v = field(cfg, "seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw std::invalid_argument("config: 'seed' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

// ---- small helpers -----------------------------------------------------------

void add_check(RunResult& r, std::string name, bool ok, std::string detail) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

// Largest increase between adjacent samples.
double max_increase(const std::vector<double>& v) {
    double inc = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) inc = std::max(inc, v[i] - v[i - 1]);
    return inc;
}

liouville::LiouvilleSpectrum decompose(const liouville::LindbladGenerator& gen) {
    return liouville::spectral_decompose(liouville::build_liouvillian(gen));
}

// Twenty sample times spread over (0, t_end].
std::vector<double> ode_times(double t_end) {
    std::vector<double> t(20);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = t_end * static_cast<double>(i + 1) / 20.0;
    return t;
}

Table trajectory_table(std::string name, const mpemba::Trajectory& a, const mpemba::Trajectory& b) {
    Table t{std::move(name), {"t", "value_a", "value_b", "steady"}, {}};
    t.rows.reserve(a.times.size());
    for (std::size_t i = 0; i < a.times.size(); ++i) t.rows.push_back({a.times[i], a.values[i], b.values[i], a.steady_value});
    return t;
}

json verdict_document(const mpemba::RoleReversalVerdict& v, std::uint64_t seed, const json& extra) {
    json doc = mpemba::to_json(v, seed);
    doc["experiment_parameters"] = extra;
    return doc;
}

void check_ode(RunResult& r, const std::string& label, const liouville::LindbladGenerator& gen,
               const liouville::LiouvilleSpectrum& spec, const DensityMatrix& rho0, const json& cfg) {
    const json window = cfg.contains("ode_check") ? cfg.at("ode_check") : json::object();
    const double t_end = number_or(window, "t_end", 10.0);
    const double dt = number_or(window, "dt", 1e-3);
    const double err = ode_discrepancy(gen, spec, rho0, ode_times(t_end), dt);
    add_check(r, "ode_cross_check_" + label, err < kOdeTolerance,
              "max trace distance " + fmt(err) + " over 20 points in (0, " + fmt(t_end) + "]");
}

// ---- fig1-heatmap ------------------------------------------------------------

void run_fig1(const json& cfg, RunResult& r, unsigned threads) {
    const json& model = field(cfg, "model");
    const json& state = field(cfg, "state");
    const double p = number(model, "p");
    const double g = number(model, "g");
    const double rx = number(state, "r_x");
    const double rz = number(state, "r_z");
    const std::vector<double> betas = parse_angle_grid(field(cfg, "beta_grid"));
    const std::vector<double> times = parse_time_grid(field(cfg, "time_grid"));
    const double inset_beta = number(cfg, "inset_beta_pi") * pi;

    analytic::SymmetricQubitParams base{p, g, 0.0, rx, rz};
    base.validate();
    const BlochVector bloch{rx, rx, rz};
    if (!(g * g * g * g > 25.0 * p * p * p * p)) {
        throw std::invalid_argument("fig1-heatmap: the closed form needs g > sqrt(5) p");
    }
    const auto gen = liouville::LindbladGenerator::from_dicke(base.dicke());
    const auto spec = decompose(gen);
    const DensityMatrix rho0 = bloch_state(bloch);
    const auto c = liouville::overlap_coeffs(spec, rho0);
    std::vector<double> l1_orig(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) l1_orig[k] = measures::l1_coherence(liouville::evolve(spec, c, times[k]));

    std::vector<std::vector<std::vector<double>>> blocks(betas.size());
    parallel_for(betas.size(), threads, [&](std::size_t i) {
        auto prm = base;
        prm.beta = betas[i];
        const auto cp = liouville::overlap_coeffs(spec, mpemba::rotated_bloch_state(bloch, betas[i]));
        auto& rows = blocks[i];
        rows.reserve(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double num = measures::l1_coherence(liouville::evolve(spec, cp, times[k])) - l1_orig[k];
            const double ana = analytic::analytic_l1_difference(prm, times[k]);
            rows.push_back({betas[i], times[k], num, ana, std::abs(num - ana)});
        }
    });

    Table heat{"fig1_heatmap", {"beta", "t", "diff_numeric", "diff_analytic", "abs_discrepancy"}, {}};
    double max_disc = 0.0, max_t0 = 0.0;
    std::size_t counterexamples = 0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const bool pred = analytic::theorem1_predicate(p, g, betas[i]);
        for (auto& row : blocks[i]) {
            max_disc = std::max(max_disc, row[4]);
            if (row[1] == 0.0) max_t0 = std::max(max_t0, std::abs(row[2]));
            else if (pred && !(row[2] > 0.0)) ++counterexamples;
            heat.rows.push_back(std::move(row));
        }
    }
    add_check(r, "t0_difference_zero", max_t0 < 1e-12, "max |diff| at t = 0: " + fmt(max_t0));
    add_check(r, "theorem_positive_where_predicate", counterexamples == 0,
              std::to_string(counterexamples) + " counterexamples");
    add_check(r, "analytic_agreement", max_disc < 1e-8, "max |numeric - analytic| " + fmt(max_disc));

    auto prm = base;
    prm.beta = inset_beta;
    const auto cp = liouville::overlap_coeffs(spec, mpemba::rotated_bloch_state(bloch, inset_beta));
    Table inset{"fig1_inset", {"t", "l1_original", "l1_rotated", "l1_original_analytic", "l1_rotated_analytic"}, {}};
    std::vector<double> l1_rot(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        l1_rot[k] = measures::l1_coherence(liouville::evolve(spec, cp, times[k]));
        inset.rows.push_back({times[k], l1_orig[k], l1_rot[k], analytic::analytic_l1(prm, times[k]),
                              analytic::analytic_l1_prime(prm, times[k])});
    }
    const double inc = std::max(max_increase(l1_orig), max_increase(l1_rot));
    add_check(r, "l1_monotone_inset", inc < 1e-9, "max increase " + fmt(inc));
    check_ode(r, "qubit", gen, spec, mpemba::rotated_bloch_state(bloch, inset_beta), cfg);

    r.tables.push_back(std::move(heat));
    r.tables.push_back(std::move(inset));
}

// ---- coherence-rr ------------------------------------------------------------

void run_coherence_rr(const json& cfg, RunResult& r, unsigned threads) {
    const dicke::DickeParams p1 = parse_dicke(field(cfg, "params_1"));
    const dicke::DickeParams p2 = parse_dicke(field(cfg, "params_2"));
    if (p1.N != 1 || p2.N != 1) throw std::invalid_argument("coherence-rr: both parameter sets must have N = 1");
    const json& st = field(cfg, "state");
    const BlochVector b{number(st, "r_x"), number(st, "r_y"), number(st, "r_z")};
    const double beta = number(cfg, "beta_pi") * pi;
    const std::vector<double> grids[2] = {parse_time_grid(field(cfg, "time_grid_1")),
                                          parse_time_grid(field(cfg, "time_grid_2"))};
    const double eps = number(cfg, "epsilon");
    const double tol_init = number_or(cfg, "tol_init", mpemba::kDefaultInitTolerance);

    const DensityMatrix rho0 = bloch_state(b);
    const DensityMatrix rho0p = mpemba::rotated_bloch_state(b, beta);
    const dicke::DickeParams params[2] = {p1, p2};
    mpemba::Trajectory ta[2], tb[2];
    double ode_err[2] = {0.0, 0.0};
    const double ode_t_end = number_or(cfg.value("ode_check", json::object()), "t_end", 10.0);
    const double ode_dt = number_or(cfg.value("ode_check", json::object()), "dt", 1e-3);
    parallel_for(2, threads, [&](std::size_t i) {
        const auto gen = liouville::LindbladGenerator::from_dicke(params[i]);
        const auto spec = decompose(gen);
        ta[i] = mpemba::sample_trajectory(spec, rho0, MeasureKind::L1Coherence, grids[i]);
        tb[i] = mpemba::sample_trajectory(spec, rho0p, MeasureKind::L1Coherence, grids[i]);
        ode_err[i] = ode_discrepancy(gen, spec, rho0p, ode_times(ode_t_end), ode_dt);
    });

    const auto v = mpemba::role_reversal(mpemba::detect_mpemba(ta[0], tb[0], eps, tol_init),
                                         mpemba::detect_mpemba(ta[1], tb[1], eps, tol_init));
    for (int i = 0; i < 2; ++i) {
        const std::string set = "set" + std::to_string(i + 1);
        add_check(r, "initial_equal_" + set, std::abs(ta[i].values[0] - tb[i].values[0]) < 1e-12,
                  "|l1(rho0) - l1(rho0')| = " + fmt(std::abs(ta[i].values[0] - tb[i].values[0])));
        add_check(r, "ode_cross_check_" + set, ode_err[i] < kOdeTolerance, "max trace distance " + fmt(ode_err[i]));
        const double inc = std::max(max_increase(ta[i].values), max_increase(tb[i].values));
        add_check(r, "l1_monotone_" + set, inc < 1e-9, "max increase " + fmt(inc));
        r.tables.push_back(trajectory_table("coherence_rr_" + set, ta[i], tb[i]));
    }
    r.documents.emplace_back("coherence_rr_verdict",
                             verdict_document(v, r.seed, {{"beta", beta}, {"epsilon", eps}, {"state_a", "original"},
                                                          {"state_b", "rotated"}}));
    r.notes.push_back(std::string("reversed: ") + (v.reversed ? "true" : "false"));
}

// ---- entanglement-rr ---------------------------------------------------------

void run_entanglement_rr(const json& cfg, RunResult& r, unsigned threads) {
    const dicke::DickeParams pa = parse_dicke(field(cfg, "params_A"));
    const dicke::DickeParams pb[2] = {parse_dicke(field(cfg, "params_B_1")), parse_dicke(field(cfg, "params_B_2"))};
    const std::vector<double> times = parse_time_grid(field(cfg, "time_grid"));
    const double eps = number(cfg, "epsilon");
    const double tol_init = number_or(cfg, "tol_init", mpemba::kDefaultInitTolerance);
    const auto rank = static_cast<Index>(number_or(cfg, "entangled_rank", 3));
    if (pa.N != pb[0].N || pa.N != pb[1].N) throw std::invalid_argument("entanglement-rr: all sides need equal N");
    const Index d = pa.dim();
    if (rank < 1 || rank > d) throw std::invalid_argument("entanglement-rr: entangled_rank out of range");

    const DensityMatrix rho0 = max_entangled_state(d, rank);
    const DensityMatrix rho0p = rho0.conjugated(mpemba::random_local_unitary(r.seed, d, d));
    const measures::Bipartition bip{d, d};

    mpemba::Trajectory ta[2], tb[2];
    double ode_err[2] = {0.0, 0.0};
    double steady_ln[2] = {0.0, 0.0};
    const double ode_t_end = number_or(cfg.value("ode_check", json::object()), "t_end", 10.0);
    const double ode_dt = number_or(cfg.value("ode_check", json::object()), "dt", 1e-3);
    parallel_for(2, threads, [&](std::size_t i) {
        const auto gen = liouville::LindbladGenerator::from_bipartite({pa, pb[i]});
        const auto spec = decompose(gen);
        ta[i] = mpemba::sample_trajectory(spec, rho0, MeasureKind::LogNegativity, times, bip);
        tb[i] = mpemba::sample_trajectory(spec, rho0p, MeasureKind::LogNegativity, times, bip);
        steady_ln[i] = ta[i].steady_value;
        ode_err[i] = ode_discrepancy(gen, spec, rho0p, ode_times(ode_t_end), ode_dt);
    });

    const auto v = mpemba::role_reversal(mpemba::detect_mpemba(ta[0], tb[0], eps, tol_init),
                                         mpemba::detect_mpemba(ta[1], tb[1], eps, tol_init));
    const double ln_max = std::log2(static_cast<double>(rank));
    for (int i = 0; i < 2; ++i) {
        const std::string set = "set" + std::to_string(i + 1);
        const double e0 = std::max(std::abs(ta[i].values[0] - ln_max), std::abs(tb[i].values[0] - ln_max));
        add_check(r, "initial_log_negativity_" + set, e0 < 1e-10, "max |L_N(0) - log2 k| = " + fmt(e0));
        add_check(r, "steady_log_negativity_" + set, steady_ln[i] < 1e-10, "L_N(rho_ss) = " + fmt(steady_ln[i]));
        add_check(r, "ode_cross_check_" + set, ode_err[i] < kOdeTolerance, "max trace distance " + fmt(ode_err[i]));
        r.tables.push_back(trajectory_table("entanglement_rr_" + set, ta[i], tb[i]));
    }
    r.documents.emplace_back("entanglement_rr_verdict",
                             verdict_document(v, r.seed, {{"epsilon", eps}, {"state_a", "maximally_entangled"},
                                                          {"state_b", "local_unitary_rotated"},
                                                          {"omega_B", {pb[0].omega, pb[1].omega}}}));
    r.notes.push_back(std::string("reversed: ") + (v.reversed ? "true" : "false"));
}

// ---- trace-rr ----------------------------------------------------------------

void run_trace_rr(const json& cfg, RunResult& r, unsigned threads) {
    const dicke::DickeParams params[2] = {parse_dicke(field(cfg, "params_1")), parse_dicke(field(cfg, "params_2"))};
    if (params[0].N != params[1].N) throw std::invalid_argument("trace-rr: both parameter sets need equal N");
    const std::vector<double> times = parse_time_grid(field(cfg, "time_grid"));
    const double eps = number(cfg, "epsilon");
    const double tol_init = number_or(cfg, "tol_init", mpemba::kDefaultInitTolerance);
    const auto mode = static_cast<Index>(number_or(cfg, "mode", 1));

    liouville::LindbladGenerator gens[2] = {liouville::LindbladGenerator::from_dicke(params[0]),
                                            liouville::LindbladGenerator::from_dicke(params[1])};
    std::vector<std::optional<liouville::LiouvilleSpectrum>> specs(2);
    parallel_for(2, threads, [&](std::size_t i) { specs[i].emplace(decompose(gens[i])); });

    const DensityMatrix rho0 = DensityMatrix::pure(mpemba::haar_random_state(r.seed, params[0].dim()));
    const mpemba::ModeElimination me = mpemba::slowest_mode_elimination(*specs[0], rho0, mode);
    const DensityMatrix rho0p = rho0.conjugated(me.unitary);
    const double c2 = std::abs(liouville::overlap_coeffs(*specs[0], rho0p).c(mode));
    const double c2_orig = std::abs(liouville::overlap_coeffs(*specs[0], rho0).c(mode));
    const double unitarity =
        (me.unitary.adjoint() * me.unitary - ComplexMatrix::Identity(rho0.dim(), rho0.dim())).cwiseAbs().maxCoeff();
    add_check(r, "mode_overlap_eliminated", c2 < 1e-8, "|c'_2| = " + fmt(c2) + ", |c_2| = " + fmt(c2_orig));
    add_check(r, "unitary", unitarity < 1e-10, "max |U^dag U - I| = " + fmt(unitarity));

    mpemba::Trajectory ta[2], tb[2];
    double ode_err[2] = {0.0, 0.0};
    const double ode_t_end = number_or(cfg.value("ode_check", json::object()), "t_end", 20.0);
    const double ode_dt = number_or(cfg.value("ode_check", json::object()), "dt", 5e-3);
    parallel_for(2, threads, [&](std::size_t i) {
        ta[i] = mpemba::sample_trajectory(*specs[i], rho0, MeasureKind::TraceDistanceToSteady, times);
        tb[i] = mpemba::sample_trajectory(*specs[i], rho0p, MeasureKind::TraceDistanceToSteady, times);
        ode_err[i] = ode_discrepancy(gens[i], *specs[i], rho0p, ode_times(ode_t_end), ode_dt);
    });
    const auto v = mpemba::role_reversal(mpemba::detect_mpemba(ta[0], tb[0], eps, tol_init),
                                         mpemba::detect_mpemba(ta[1], tb[1], eps, tol_init));
    for (int i = 0; i < 2; ++i) {
        const std::string set = "set" + std::to_string(i + 1);
        const double d0 = std::abs(ta[i].values[0] - tb[i].values[0]);
        add_check(r, "initial_distance_equal_" + set, d0 < 1e-10, "|D(rho0) - D(rho0')| = " + fmt(d0));
        add_check(r, "ode_cross_check_" + set, ode_err[i] < kOdeTolerance, "max trace distance " + fmt(ode_err[i]));
        r.tables.push_back(trajectory_table("trace_rr_" + set, ta[i], tb[i]));
    }
    r.documents.emplace_back("trace_rr_verdict",
                             verdict_document(v, r.seed, {{"epsilon", eps}, {"mode", mode}, {"c2_original", c2_orig},
                                                          {"c2_rotated", c2}, {"rotation_angle", me.angle},
                                                          {"used_minimization", me.used_minimization},
                                                          {"state_a", "haar_random"}, {"state_b", "mode_eliminated"},
                                                          {"omega", {params[0].omega, params[1].omega}}}));
    r.notes.push_back(std::string("reversed: ") + (v.reversed ? "true" : "false"));
}

// ---- theorem-scan ------------------------------------------------------------

void run_theorem_scan(const json& cfg, RunResult& r, unsigned threads) {
    const double p = number(cfg, "p");
    const std::vector<double> gs = parse_value_grid(field(cfg, "g_grid"));
    const std::vector<double> betas = parse_angle_grid(field(cfg, "beta_grid"));
    const std::vector<double> times = parse_time_grid(field(cfg, "time_grid"));
    const json& st = field(cfg, "state");
    const BlochVector b{number(st, "r_x"), number(st, "r_x"), number(st, "r_z")};
    const DensityMatrix rho0 = bloch_state(b);

    std::vector<std::vector<double>> rows(gs.size() * betas.size());
    parallel_for(gs.size(), threads, [&](std::size_t ig) {
        const auto spec = decompose(liouville::LindbladGenerator::from_dicke({p, p, gs[ig], p, 1}));
        const auto c = liouville::overlap_coeffs(spec, rho0);
        std::vector<double> l1(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) l1[k] = measures::l1_coherence(liouville::evolve(spec, c, times[k]));
        for (std::size_t ib = 0; ib < betas.size(); ++ib) {
            const auto cp = liouville::overlap_coeffs(spec, mpemba::rotated_bloch_state(b, betas[ib]));
            double min_diff = std::numeric_limits<double>::infinity(), max_abs = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                if (times[k] == 0.0) continue;
                const double diff = measures::l1_coherence(liouville::evolve(spec, cp, times[k])) - l1[k];
                min_diff = std::min(min_diff, diff);
                max_abs = std::max(max_abs, std::abs(diff));
            }
            const bool pred = analytic::theorem1_predicate(p, gs[ig], betas[ib]);
            const bool observed = min_diff > 0.0;
            rows[ig * betas.size() + ib] = {gs[ig],   betas[ib], pred ? 1.0 : 0.0, observed ? 1.0 : 0.0,
                                            (!pred || observed) ? 1.0 : 0.0, min_diff, max_abs};
        }
    });

    std::size_t disagreements = 0, half_pi_bad = 0;
    for (const auto& row : rows) {
        if (row[4] == 0.0) ++disagreements;
        if (std::abs(std::remainder(row[1], pi) - 0.5 * pi) < 1e-12 || std::abs(std::remainder(row[1], pi) + 0.5 * pi) < 1e-12) {
            if (!(row[6] < 1e-10)) ++half_pi_bad;
        }
    }
    add_check(r, "predicate_implies_mpemba", disagreements == 0, std::to_string(disagreements) + " disagreeing rows");
    add_check(r, "half_pi_difference_vanishes", half_pi_bad == 0, std::to_string(half_pi_bad) + " rows above 1e-10");
    r.tables.push_back({"theorem_scan", {"g", "beta", "predicate", "observed_mpemba", "agree", "min_diff", "max_abs_diff"},
                        std::move(rows)});
}

// ---- spectrum-dump -----------------------------------------------------------

void run_spectrum_dump(const json& cfg, RunResult& r, unsigned) {
    liouville::LindbladGenerator gen;
    if (cfg.contains("bipartite")) {
        const json& bp = cfg.at("bipartite");
        gen = liouville::LindbladGenerator::from_bipartite({parse_dicke(field(bp, "a")), parse_dicke(field(bp, "b"))});
    } else {
        const dicke::DickeParams p = parse_dicke(field(cfg, "model"));
        gen = liouville::LindbladGenerator::from_dicke(p);
        if (const auto adv = dicke::adiabatic_advisory(p)) r.notes.push_back(*adv);
    }
    const ComplexMatrix lv = liouville::build_liouvillian(gen);
    const auto spec = liouville::spectral_decompose(lv);
    const auto res = liouville::spectrum_residuals(lv, spec);

    Table ev{"spectrum_eigenvalues", {"index", "re", "im", "normalizer_re", "normalizer_im"}, {}};
    for (Index i = 0; i < spec.size(); ++i) {
        ev.rows.push_back({static_cast<double>(i), spec.eigenvalue(i).real(), spec.eigenvalue(i).imag(),
                           spec.normalizers()(i).real(), spec.normalizers()(i).imag()});
    }
    r.tables.push_back(std::move(ev));

    add_check(r, "leading_eigenvalue_zero", std::abs(spec.eigenvalue(0)) < 1e-9, "|lambda_1| = " + fmt(std::abs(spec.eigenvalue(0))));
    add_check(r, "eigen_residuals", res.right < 1e-8 && res.left < 1e-8,
              "right " + fmt(res.right) + ", left " + fmt(res.left));
    add_check(r, "biorthogonality", res.biorthogonality < 1e-8, fmt(res.biorthogonality));
    add_check(r, "non_degenerate", !spec.degenerate(), "min separation " + fmt(spec.min_separation()));

    json summary{{"format", "qme-spectrum-summary"},
                 {"version", kCsvFormatVersion},
                 {"seed", r.seed},
                 {"dim", spec.size()},
                 {"hilbert_dim", spec.hilbert_dim()},
                 {"gap", spec.gap()},
                 {"degenerate", spec.degenerate()},
                 {"min_separation", spec.min_separation()},
                 {"residual_right", res.right},
                 {"residual_left", res.left},
                 {"biorthogonality", res.biorthogonality}};
    if (!spec.degenerate()) {
        const DensityMatrix ss = liouville::steady_state(spec);
        const double fixed = (lv * vectorize(ss.matrix())).norm();
        add_check(r, "steady_state_fixed_point", fixed < 1e-8, "||Lv vec(rho_ss)|| = " + fmt(fixed));
        Table diag{"spectrum_steady_diagonal", {"index", "population"}, {}};
        for (Index i = 0; i < ss.dim(); ++i) diag.rows.push_back({static_cast<double>(i), ss(i, i).real()});
        r.tables.push_back(std::move(diag));
        summary["steady_l1_coherence"] = measures::l1_coherence(ss);
    } else {
        r.notes.push_back("spectrum is degenerate; steady state and spectral evolution are unavailable");
    }
    r.documents.emplace_back("spectrum_summary", std::move(summary));
    if (cfg.value("save_spectrum", false)) r.documents.emplace_back("spectrum", io::spectrum_to_json(spec));
}

} // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Experiment e) {
    switch (e) {
    case Experiment::Fig1Heatmap: return "fig1-heatmap";
    case Experiment::CoherenceRR: return "coherence-rr";
    case Experiment::EntanglementRR: return "entanglement-rr";
    case Experiment::TraceRR: return "trace-rr";
    case Experiment::TheoremScan: return "theorem-scan";
    case Experiment::SpectrumDump: return "spectrum-dump";
    }
    return "unknown";
}

const std::vector<Experiment>& all_experiments() {
    static const std::vector<Experiment> all{Experiment::Fig1Heatmap,  Experiment::CoherenceRR,
                                             Experiment::EntanglementRR, Experiment::TraceRR,
                                             Experiment::TheoremScan,  Experiment::SpectrumDump};
    return all;
}

Experiment experiment_from_string(std::string_view name) {
    for (Experiment e : all_experiments())
        if (to_string(e) == name) return e;
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

bool RunResult::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

unsigned default_threads() {
    if (const char* env = std::getenv("QME_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t config_hash(const json& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : cfg.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

dicke::DickeParams parse_dicke(const json& j) {
    dicke::DickeParams p;
    p.Omega = number(j, "Omega");
    p.omega = number(j, "omega");
    p.g = number(j, "g");
    p.kappa = number(j, "kappa");
    const double n = number(j, "N");
    if (n != std::floor(n) || n < 1 || n > 1000) throw std::invalid_argument("config: N must be a positive integer");
    p.N = static_cast<int>(n);
    p.validate();
    return p;
}

std::vector<double> parse_time_grid(const json& j) {
    const double t_end = number(j, "t_end");
    if (j.contains("dt")) return mpemba::stepped_grid(t_end, number(j, "dt"));
    const double count = number(j, "count");
    if (count != std::floor(count) || count < 2) throw std::invalid_argument("config: time grid count must be >= 2");
    return mpemba::uniform_grid(t_end, static_cast<std::size_t>(count));
}

std::vector<double> parse_angle_grid(const json& j) {
    std::vector<double> out;
    if (j.contains("values_pi")) {
        for (const json& v : j.at("values_pi")) {
            if (!v.is_number()) throw std::invalid_argument("config: values_pi must hold numbers");
            out.push_back(v.get<double>() * pi);
        }
    } else {
        const double start = number(j, "start_pi"), stop = number(j, "stop_pi"), count = number(j, "count");
        if (count != std::floor(count) || count < 1 || !(stop > start)) {
            throw std::invalid_argument("config: angle grid needs count >= 1 and stop_pi > start_pi");
        }
        const auto n = static_cast<std::size_t>(count);
        const double step = (stop - start) / count;
        for (std::size_t i = 0; i < n; ++i) out.push_back((start + step * static_cast<double>(i)) * pi);
    }
    if (out.empty()) throw std::invalid_argument("config: empty angle grid");
    return out;
}

std::vector<double> parse_value_grid(const json& j) {
    std::vector<double> out;
    if (j.contains("values")) {
        for (const json& v : j.at("values")) {
            if (!v.is_number()) throw std::invalid_argument("config: values must hold numbers");
            out.push_back(v.get<double>());
        }
    } else {
        const double start = number(j, "start"), stop = number(j, "stop"), count = number(j, "count");
        if (count != std::floor(count) || count < 2 || !(stop > start)) {
            throw std::invalid_argument("config: value grid needs count >= 2 and stop > start");
        }
        const auto n = static_cast<std::size_t>(count);
        for (std::size_t i = 0; i < n; ++i) out.push_back(start + (stop - start) * static_cast<double>(i) / (count - 1));
    }
    if (out.empty()) throw std::invalid_argument("config: empty value grid");
    return out;
}

double ode_discrepancy(const liouville::LindbladGenerator& gen, const liouville::LiouvilleSpectrum& spec,
                       const DensityMatrix& rho0, const std::vector<double>& times, double dt) {
    const auto ode = liouville::evolve_ode_samples(gen, rho0, times, dt);
    const auto c = liouville::overlap_coeffs(spec, rho0);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        worst = std::max(worst, measures::trace_distance(ode[i], liouville::evolve(spec, c, times[i])));
    return worst;
}

DensityMatrix max_entangled_state(Index d, Index k) {
    if (k < 1 || k > d) throw std::invalid_argument("max_entangled_state: need 1 <= k <= d");
    ComplexVector psi = ComplexVector::Zero(d * d);
    for (Index i = 0; i < k; ++i) psi(i * d + i) = 1.0;
    return DensityMatrix::pure(psi);
}

RunResult run(Experiment e, json cfg, const RunOptions& opts) {
    if (!cfg.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
    if (cfg.contains("experiment") && cfg.at("experiment") != to_string(e)) {
        throw std::invalid_argument("config: experiment field '" + cfg.at("experiment").dump() +
                                    "' does not match subcommand " + std::string(to_string(e)));
    }
    if (opts.seed_override) cfg["seed"] = *opts.seed_override;
    RunResult r;
    r.experiment = e;
    r.seed = seed_of(cfg);
    r.config_hash = config_hash(cfg);
    const unsigned threads = opts.threads ? opts.threads : default_threads();
    try {
        switch (e) {
        case Experiment::Fig1Heatmap: run_fig1(cfg, r, threads); break;
        case Experiment::CoherenceRR: run_coherence_rr(cfg, r, threads); break;
        case Experiment::EntanglementRR: run_entanglement_rr(cfg, r, threads); break;
        case Experiment::TraceRR: run_trace_rr(cfg, r, threads); break;
        case Experiment::TheoremScan: run_theorem_scan(cfg, r, threads); break;
        case Experiment::SpectrumDump: run_spectrum_dump(cfg, r, threads); break;
        }
    } catch (const json::exception& ex) {
        throw std::invalid_argument(std::string("config: ") + ex.what());
    }
    return r;
}

std::string format_csv(const Table& table, const RunResult& result) {
    std::ostringstream os;
    os << "# qme-csv v" << kCsvFormatVersion << " experiment=" << to_string(result.experiment) << " config_hash=0x"
       << std::hex << std::setw(16) << std::setfill('0') << result.config_hash << std::dec << std::setfill(' ')
       << " seed=" << result.seed << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n' << std::setprecision(17);
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    return os.str();
}

std::vector<std::filesystem::path> write_outputs(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    const auto put = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << text;
        written.push_back(path);
    };
    for (const Table& t : result.tables) put(dir / (t.name + ".csv"), format_csv(t, result));
    for (const auto& [name, doc] : result.documents) {
        json d = doc;
        if (!d.contains("config_hash")) d["config_hash"] = result.config_hash;
        put(dir / (name + ".json"), d.dump(2) + "\n");
    }
    return written;
}

} // namespace qme::experiments
