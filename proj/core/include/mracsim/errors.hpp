#pragma once

#include <stdexcept>
#include <string>

namespace mracsim {

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct NotSymmetric : std::runtime_error {
    explicit NotSymmetric(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct MatchingInfeasible : std::runtime_error {
    explicit MatchingInfeasible(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when the tracking error reaches the guarded boundary of the
/// barrier set e'Pe < kb'^2. Carries the time of the offending evaluation.
struct BarrierBreach : std::runtime_error {
    BarrierBreach(const std::string& what, double t_breach)
        : std::runtime_error(what), t(t_breach) {}
    double t;
};

struct NumericalFailure : std::runtime_error {
    NumericalFailure(const std::string& what, double t_fail)
        : std::runtime_error(what), t(t_fail) {}
    double t;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mracsim
