#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "mracsim/analysis.hpp"
#include "mracsim/controllers.hpp"
#include "mracsim/models.hpp"

namespace mracsim {

enum class ControllerKind { classical, constrained };

const char* controller_kind_name(ControllerKind kind);

/// Integration settings for one run.
struct SimConfig {
    double dt = 1e-3;
    double t_final = 40.0;
    Vector x0;
    Vector xr0;
    double guard_epsilon = 1e-6;
    std::size_t log_stride = 10;

    void validate(std::size_t state_dim, double k_b) const;
};

/// Full integrated state of the closed loop. The flattened layout is fixed:
///   classical:   [x | x_r | vec(Kx_hat) | vec(Kr_hat)]
///   constrained: [x | x_r | vec(Kx_hat) | vec(Kr_hat) | vec(Kd) | vec(K1) | e1]
/// with vec() row-major. Gamma blocks are constants, not integrated.
struct AugmentedState {
    Vector x;
    Vector x_r;
    std::variant<ClassicalState, ConstrainedState> controller;

    ControllerKind kind() const {
        return std::holds_alternative<ClassicalState>(controller) ? ControllerKind::classical
                                                                  : ControllerKind::constrained;
    }
};

std::vector<double> flatten(const AugmentedState& s);
/// Writes entries back into `s` (which supplies dimensions and Gamma blocks).
void unflatten(const std::vector<double>& flat, AugmentedState& s);

/// Everything a derivative evaluation needs. The plant matrix A is used
/// only for the physical xdot = A x + B u and the matching-gain oracle;
/// controllers see just B, P, reference data and measurements.
struct SimSetup {
    PlantModel plant;
    ReferenceModel ref;
    ConstraintSpec cspec;
    LyapunovCert cert;
    ClassicalState classical0;
    ConstrainedState constrained0;
    double guard_epsilon = 1e-6;
};

/// Time derivative of the augmented closed loop; controller evaluated fresh
/// at the query point (continuous-time semantics). Throws BarrierBreach when
/// a constrained evaluation lands outside the guarded barrier interior.
AugmentedState closed_loop_derivative(const AugmentedState& s, double t, const SimSetup& ctx);

/// Classical fixed-step RK4 on a flat state vector; stages at t, t+dt/2,
/// t+dt/2, t+dt.
std::vector<double> rk4_kernel(
    const std::vector<double>& y, double t, double dt,
    const std::function<std::vector<double>(const std::vector<double>&, double)>& deriv);

/// One RK4 step of the closed loop, all four stages guarded.
AugmentedState rk4_step(const AugmentedState& s, double t, double dt, const SimSetup& ctx);

/// True iff e is inside the guarded barrier interior,
/// e'Pe < (1 - guard_epsilon) kb'^2.
bool barrier_guard(const Vector& e, const LyapunovCert& cert, double guard_epsilon);

struct TrajectoryRecord {
    double t = 0.0;
    Vector x;
    Vector x_r;
    Vector e;
    Vector u;
    Vector v;
    Vector delta_u;
    double V = 0.0;
    double Vdot = 0.0;
    double barrier_ratio = 0.0;
    std::vector<std::uint8_t> sat_flags;
};

struct TrajectoryLog {
    std::vector<TrajectoryRecord> records;
};

enum class RunStatus { completed, barrier_breach, numerical_failure };

const char* run_status_name(RunStatus status);

struct SimResult {
    TrajectoryLog log;
    ConstraintReport report;
    RunStatus status = RunStatus::completed;
    double t_end = 0.0;
    std::string detail;

    bool completed() const { return status == RunStatus::completed; }
};

/// Integrates t in [0, t_final], logging every log_stride steps (plus the
/// final step). Monitors run at each logged record. A barrier breach or a
/// non-finite state terminates the run early and marks it failed; classical
/// runs have no guard and always integrate to t_final unless they go
/// non-finite.
SimResult simulate(const SimSetup& setup, ControllerKind kind, const SimConfig& cfg);

} // namespace mracsim
