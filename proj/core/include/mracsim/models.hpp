#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mracsim/linalg.hpp"

namespace mracsim {

/// Bounded piecewise-continuous reference input r(t).
struct ReferenceSignal {
    enum class Kind { exp_decay, constant, sinusoid, zero };

    Kind kind = Kind::zero;
    std::size_t channels = 0;
    std::vector<double> amplitude;  // per-channel
    std::vector<double> tau;        // exp_decay time constants [s]
    std::vector<double> omega;      // sinusoid frequencies [rad/s]

    /// The two-channel decay used throughout: r(t) = [exp(-t/10); exp(-t/20)].
    static ReferenceSignal two_channel_decay();
    static ReferenceSignal zero_signal(std::size_t channels);

    void validate() const;
};

Vector eval_reference_signal(const ReferenceSignal& sig, double t);

/// LTI plant xdot = A x + B u. A is known to the simulator but never
/// handed to a controller; B is known and full column rank.
struct PlantModel {
    Matrix A;
    Matrix B;

    std::size_t state_dim() const { return A.rows(); }
    std::size_t input_dim() const { return B.cols(); }
    void validate() const;
};

/// Reference model xr_dot = A_r xr + B_r r(t); A_r Hurwitz (certified by a
/// successful Lyapunov solve at load).
struct ReferenceModel {
    Matrix A_r;
    Matrix B_r;
    ReferenceSignal signal;

    void validate() const;
};

/// Safe-set bounds: ||x|| <= beta, ||x_r|| <= alpha1 < beta, ||u|| <= u_max,
/// derived error bound k_b = beta - alpha1. alpha2 bounds ||xr_dot|| and
/// drives a monitor only.
struct ConstraintSpec {
    double beta = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double u_max = 0.0;

    double k_b() const { return beta - alpha1; }
    void validate() const;
};

/// Ideal gains satisfying A + B K_x = A_r and B K_r = B_r.
struct TrueGains {
    Matrix K_x;  // m x n
    Matrix K_r;  // m x m
};

Vector plant_derivative(const PlantModel& plant, const Vector& x, const Vector& u);
Vector reference_derivative(const ReferenceModel& ref, const Vector& x_r, double t);

/// Least-squares solve of the matching conditions via normal equations,
/// K = (B^T B)^{-1} B^T (.). Throws MatchingInfeasible (with the residual
/// magnitudes) when either residual exceeds 1e-8.
TrueGains solve_matching_gains(const PlantModel& plant, const ReferenceModel& ref);

} // namespace mracsim
