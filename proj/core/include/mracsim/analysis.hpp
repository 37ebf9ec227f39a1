#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mracsim/controllers.hpp"
#include "mracsim/linalg.hpp"
#include "mracsim/models.hpp"

namespace mracsim {

/// Lyapunov certificate for the reference model: Q, the solution P of
/// A_r^T P + P A_r + Q = 0, lambda_min(P), and the barrier radius
/// kb' = k_b sqrt(lambda_min(P)).
struct LyapunovCert {
    Matrix Q;
    Matrix P;
    double lambda_min = 0.0;
    double kb_prime = 0.0;

    double kb_prime_sq() const { return kb_prime * kb_prime; }
    double barrier_ratio(const Vector& e) const { return quadratic_form(e, P) / kb_prime_sq(); }
};

/// Solves for P, certifies the residual ||A_r^T P + P A_r + Q||_F <=
/// 1e-9 ||Q||_F and P > 0 (this doubles as the Hurwitz certificate for A_r).
LyapunovCert make_lyapunov_cert(const Matrix& a_r, const Matrix& q, double k_b);

enum class BreachKind { state, input, barrier, assumption1 };

const char* breach_kind_name(BreachKind kind);

struct BreachEvent {
    double t = 0.0;
    BreachKind kind = BreachKind::state;
};

/// Running record of the safe-set monitors over one run.
struct ConstraintReport {
    double max_e_norm = 0.0;
    double max_x_norm = 0.0;
    double max_u_norm = 0.0;
    double max_barrier_ratio = 0.0;
    double e_final_norm = 0.0;
    double xr_norm_max = 0.0;
    std::vector<BreachEvent> breach_events;

    std::size_t count(BreachKind kind) const;
};

/// Adaptation-rate block handed to the Lyapunov evaluators.
struct GainSet {
    Matrix Gamma_x;
    Matrix Gamma_r;
    Matrix Gamma_d;  // empty for classical runs
    Matrix Gamma_1;  // empty for classical runs
};

/// Barrier term V1 = (1/2) log(kb'^2 / (kb'^2 - e'Pe)); diverges as e'Pe
/// approaches kb'^2. Throws BarrierBreach outside the barrier interior.
double blf_value(const Vector& e, const LyapunovCert& cert);

/// Composite Lyapunov function
///   V = V1 + (1/2)[e_d'P e_d + tr(Ktx' Gx^-1 Ktx) + tr(Ktr' Gr^-1 Ktr)
///                 + tr(Kd' Gd^-1 Kd) + tr(K1' G1^-1 K1)].
/// Needs parameter errors Ktilde = Khat - K, so it is a simulation-side
/// oracle (true gains known there only).
double lyapunov_value(const Vector& e, const Vector& e_d, const Matrix& ktilde_x,
                      const Matrix& ktilde_r, const Matrix& k_d, const Matrix& k_1,
                      const LyapunovCert& cert, const GainSet& gains);

/// Classical-MRAC Lyapunov function (no barrier, no auxiliary terms):
/// V = (1/2)[e'Pe + tr(Ktx' Gx^-1 Ktx) + tr(Ktr' Gr^-1 Ktr)], Vdot = -(1/2) e'Qe.
double classical_lyapunov_value(const Vector& e, const Matrix& ktilde_x,
                                const Matrix& ktilde_r, const LyapunovCert& cert,
                                const GainSet& gains);
double classical_vdot(const Vector& e, const LyapunovCert& cert);

/// Simplified rate: Vdot = -(1/2)[e'Qe / (kb'^2 - e'Pe) + e_d'Q e_d] <= 0.
double vdot_simplified(const Vector& e, const Vector& e_d, const LyapunovCert& cert);

/// Term-by-term rate along the closed loop: quadratic terms evaluated with
/// A_r^T P + P A_r directly (not -Q) and the trace terms substituted from the
/// adaptive laws. Serves as the independent oracle for vdot_simplified.
double vdot_expanded(const Vector& x, const Vector& x_r, const Vector& r, const Vector& e1,
                     const Matrix& kx_hat, const Matrix& kr_hat, const Matrix& k_d,
                     const Matrix& k_1, const ControlDecision& decision,
                     const LyapunovCert& cert, const GainSet& gains,
                     const TrueGains& true_gains, const Matrix& B, const Matrix& A_r);

/// Records running maxima and appends breach events. Boundaries are
/// inclusive with 1e-12 relative slack; monitors never halt a run.
void monitor_step(double t, const Vector& x, const Vector& x_r, const Vector& e,
                  const Vector& u, const LyapunovCert& cert, const ConstraintSpec& spec,
                  ConstraintReport& report);

} // namespace mracsim
