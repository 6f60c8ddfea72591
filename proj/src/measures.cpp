// measures.cpp: Relaxation quantifiers

#include "qme/measures.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace qme::measures {

std::string_view to_string(MeasureKind kind) {
    switch (kind) {
    case MeasureKind::L1Coherence: return "l1-coherence";
    case MeasureKind::LogNegativity: return "log-negativity";
    case MeasureKind::TraceDistanceToSteady: return "trace-distance";
    }
    return "unknown";
}

MeasureKind measure_from_string(std::string_view name) {
    if (name == "l1-coherence") return MeasureKind::L1Coherence;
    if (name == "log-negativity") return MeasureKind::LogNegativity;
    if (name == "trace-distance") return MeasureKind::TraceDistanceToSteady;
    throw std::invalid_argument("unknown measure '" + std::string(name) + "'");
}

double l1_coherence(const ComplexMatrix& rho) {
    double sum = 0.0;
    for (Index j = 0; j < rho.cols(); ++j)
        for (Index i = 0; i < rho.rows(); ++i)
            if (i != j) sum += std::abs(rho(i, j));
    return sum;
}

Negativity negativity(const DensityMatrix& rho, Index d1, Index d2) {
    const ComplexMatrix pt = hermitian_part(partial_transpose(rho.matrix(), d1, d2, Subsystem::A));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pt, Eigen::EigenvaluesOnly);
    Negativity out;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev < -kPptTolerance) out.negativity -= ev;
    }
    out.log_negativity = std::log2(2.0 * out.negativity + 1.0);
    return out;
}

double log_negativity(const DensityMatrix& rho, Index d1, Index d2) {
    return negativity(rho, d1, d2).log_negativity;
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) {
        throw std::invalid_argument("trace_distance: dimensions " + std::to_string(rho1.dim()) + " and " +
                                    std::to_string(rho2.dim()) + " differ");
    }
    return 0.5 * trace_norm(hermitian_part(rho1.matrix() - rho2.matrix()));
}

double measure_value(MeasureKind kind, const DensityMatrix& rho, const DensityMatrix& rho_ss,
                     std::optional<Bipartition> bipartition) {
    switch (kind) {
    case MeasureKind::L1Coherence: return l1_coherence(rho);
    case MeasureKind::LogNegativity:
        if (!bipartition) throw std::invalid_argument("log-negativity requires a bipartition");
        return log_negativity(rho, bipartition->d1, bipartition->d2);
    case MeasureKind::TraceDistanceToSteady: return trace_distance(rho, rho_ss);
    }
    throw std::invalid_argument("measure_value: unknown measure kind");
}

double differential_measure(MeasureKind kind, const DensityMatrix& rho_t, const DensityMatrix& rho_ss,
                            std::optional<Bipartition> bipartition) {
    if (kind == MeasureKind::TraceDistanceToSteady) return trace_distance(rho_t, rho_ss);
    return measure_value(kind, rho_t, rho_ss, bipartition) - measure_value(kind, rho_ss, rho_ss, bipartition);
}

} // namespace qme::measures
