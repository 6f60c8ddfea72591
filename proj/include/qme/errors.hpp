// errors.hpp: Exception types shared by all modules
//
// Invalid inputs throw std::invalid_argument. The types below cover failures
// that are not the caller's fault.

#pragma once

#include <stdexcept>
#include <string>

namespace qme {

// A numerical step (eigensolver, integrator) produced unusable numbers.
struct NumericFailure : std::runtime_error {
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

// The requested operation is outside the regime this code supports
// (degenerate Liouvillian spectra, complex-q closed forms).
struct Unsupported : std::runtime_error {
    explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

// The slowest-mode elimination unitary could not be built for this state.
struct ConstructionFailed : std::runtime_error {
    explicit ConstructionFailed(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qme
