#pragma once

#include <cstdint>
#include <vector>

#include "mracsim/linalg.hpp"

namespace mracsim {

/// Certainty-equivalence MRAC state: estimated gains plus the (constant)
/// positive-definite adaptation rates.
struct ClassicalState {
    Matrix Kx_hat;   // m x n
    Matrix Kr_hat;   // m x m
    Matrix Gamma_x;  // m x m, > 0
    Matrix Gamma_r;  // m x m, > 0

    void validate() const;
};

/// Constrained-controller state: gain estimates, the auxiliary-system
/// parameters K_1 and K_d (independently integrated; K_d + K_1 = B holds
/// only at initialization), the auxiliary error e_1 with e_1(t0) = 0, and
/// the adaptation rates.
struct ConstrainedState {
    Matrix Kx_hat;   // m x n
    Matrix Kr_hat;   // m x m
    Matrix K1;       // n x m
    Matrix Kd;       // n x m
    Vector e1;       // n
    Matrix Gamma_x;  // m x m, > 0
    Matrix Gamma_r;  // m x m, > 0
    Matrix Gamma_d;  // n x n, > 0
    Matrix Gamma_1;  // n x n, > 0

    void validate() const;
};

/// Outcome of the per-channel saturation: applied input u, auxiliary input
/// v, deficit delta_u = u - v, and which channels clipped.
struct ControlDecision {
    Vector u;
    Vector v;
    Vector delta_u;
    std::vector<std::uint8_t> saturated;

    bool any_saturated() const {
        for (auto s : saturated)
            if (s) return true;
        return false;
    }
};

struct ClassicalDerivatives {
    Matrix Kx_hat_dot;
    Matrix Kr_hat_dot;
};

struct ConstrainedDerivatives {
    Matrix Kx_hat_dot;
    Matrix Kr_hat_dot;
    Matrix Kd_dot;
    Matrix K1_dot;
    Vector e1_dot;
};

/// u = Kx_hat x + Kr_hat r; unbounded by design.
Vector classical_control(const ClassicalState& s, const Vector& x, const Vector& r);

/// Kx_hat_dot = -Gamma_x B^T P e x^T,  Kr_hat_dot = -Gamma_r B^T P e r^T.
ClassicalDerivatives classical_update(const ClassicalState& s, const Vector& e,
                                      const Vector& x, const Vector& r,
                                      const Matrix& B, const Matrix& P);

/// v = Kx_hat x + Kr_hat r (same law as classical_control, constrained state).
Vector auxiliary_control(const ConstrainedState& s, const Vector& x, const Vector& r);

/// Per-channel clipping at u_max/sqrt(m):
///   u_i = v_i                      if |v_i| <= u_max/sqrt(m)
///   u_i = (u_max/sqrt(m)) sgn(v_i) otherwise
/// guaranteeing ||u|| <= u_max. sgn(0) := 0 (never reached in the clipped
/// branch). u_max = +inf disables clipping with delta_u exactly zero.
ControlDecision saturate(const Vector& v, double u_max);

/// e_d = e - e1.
Vector compute_ed(const Vector& e, const Vector& e1);

/// Barrier-modified update laws. With D = kb'^2 - e'Pe:
///   Kx_hat_dot = -[Gamma_x B^T P e x^T / D + Gamma_x B^T P e_d x^T]
///   Kr_hat_dot = -[Gamma_r B^T P e r^T / D + Gamma_r B^T P e_d r^T]
///   Kd_dot     = -[Gamma_d P e du^T / D + Gamma_d P e_d du^T]
///   K1_dot     = -Gamma_1 P e du^T / D
///   e1_dot     = A_r e1 + K1 du
/// Throws BarrierBreach when e'Pe >= (1 - guard_epsilon) kb'^2.
ConstrainedDerivatives constrained_update(const ConstrainedState& s, const Vector& e,
                                          const Vector& e_d, const Vector& x, const Vector& r,
                                          const Vector& delta_u, const Matrix& B, const Matrix& P,
                                          const Matrix& A_r, double kb_prime,
                                          double guard_epsilon = 0.0, double t = 0.0);

} // namespace mracsim
