// measures.hpp: Relaxation quantifiers
//
// Coherence is always measured in the computational (S_z eigen / product) basis.

#pragma once

#include <optional>
#include <string_view>

#include "qme/linalg.hpp"

namespace qme::measures {

enum class MeasureKind { L1Coherence, LogNegativity, TraceDistanceToSteady };

std::string_view to_string(MeasureKind kind);
MeasureKind measure_from_string(std::string_view name);

struct Bipartition {
    Index d1 = 0;
    Index d2 = 0;
};

// Negative partial-transpose eigenvalues with magnitude below this are dropped.
inline constexpr double kPptTolerance = 1e-12;

// sum_{j != k} |rho_jk|
double l1_coherence(const ComplexMatrix& rho);
inline double l1_coherence(const DensityMatrix& rho) { return l1_coherence(rho.matrix()); }

struct Negativity {
    double negativity = 0.0;      // sum of |negative eigenvalues| of rho^{T_A}
    double log_negativity = 0.0;  // log2(2 N + 1)
};

Negativity negativity(const DensityMatrix& rho, Index d1, Index d2);
double log_negativity(const DensityMatrix& rho, Index d1, Index d2);

// D = 1/2 ||rho1 - rho2||_1
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// m(rho_t) - m(rho_ss) for the resource measures, D(rho_t, rho_ss) for the distance.
double differential_measure(MeasureKind kind, const DensityMatrix& rho_t, const DensityMatrix& rho_ss,
                            std::optional<Bipartition> bipartition = std::nullopt);

// The raw quantity tracked along a trajectory: m(rho) for resource measures,
// D(rho, rho_ss) for the distance.
double measure_value(MeasureKind kind, const DensityMatrix& rho, const DensityMatrix& rho_ss,
                     std::optional<Bipartition> bipartition = std::nullopt);

} // namespace qme::measures
