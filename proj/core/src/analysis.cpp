#include "mracsim/analysis.hpp"

#include <cmath>
#include <sstream>

namespace mracsim {

LyapunovCert make_lyapunov_cert(const Matrix& a_r, const Matrix& q, double k_b) {
    LyapunovCert cert;
    cert.Q = q;
    cert.P = solve_lyapunov(a_r, q);

    const double residual = (a_r.transpose() * cert.P + cert.P * a_r + q).frobenius_norm();
    if (residual > 1e-9 * q.frobenius_norm()) {
        std::ostringstream msg;
        msg << "lyapunov residual " << residual << " exceeds 1e-9 * ||Q||_F; A_r not Hurwitz or ill-conditioned";
        throw SingularSystem(msg.str());
    }

    cert.lambda_min = min_eig_sym(cert.P);
    if (!(cert.lambda_min > 0.0))
        throw SingularSystem("lyapunov certificate: P not positive definite (A_r not Hurwitz)");
    cert.kb_prime = k_b * std::sqrt(cert.lambda_min);
    return cert;
}

const char* breach_kind_name(BreachKind kind) {
    switch (kind) {
        case BreachKind::state: return "state";
        case BreachKind::input: return "input";
        case BreachKind::barrier: return "barrier";
        case BreachKind::assumption1: return "assumption1";
    }
    return "unknown";
}

std::size_t ConstraintReport::count(BreachKind kind) const {
    std::size_t n = 0;
    for (const auto& ev : breach_events)
        if (ev.kind == kind) ++n;
    return n;
}

double blf_value(const Vector& e, const LyapunovCert& cert) {
    const double kb2 = cert.kb_prime_sq();
    const double epe = quadratic_form(e, cert.P);
    if (epe >= kb2)
        throw BarrierBreach("blf_value: e'Pe outside barrier interior", 0.0);
    return 0.5 * std::log(kb2 / (kb2 - epe));
}

namespace {

double weighted_trace(const Matrix& k, const Matrix& gamma) {
    // tr(K' Gamma^-1 K)
    return (k.transpose() * (inverse(gamma) * k)).trace();
}

} // namespace

double lyapunov_value(const Vector& e, const Vector& e_d, const Matrix& ktilde_x,
                      const Matrix& ktilde_r, const Matrix& k_d, const Matrix& k_1,
                      const LyapunovCert& cert, const GainSet& gains) {
    const double v1 = blf_value(e, cert);
    double quad = quadratic_form(e_d, cert.P);
    quad += weighted_trace(ktilde_x, gains.Gamma_x);
    quad += weighted_trace(ktilde_r, gains.Gamma_r);
    quad += weighted_trace(k_d, gains.Gamma_d);
    quad += weighted_trace(k_1, gains.Gamma_1);
    return v1 + 0.5 * quad;
}

double classical_lyapunov_value(const Vector& e, const Matrix& ktilde_x,
                                const Matrix& ktilde_r, const LyapunovCert& cert,
                                const GainSet& gains) {
    double quad = quadratic_form(e, cert.P);
    quad += weighted_trace(ktilde_x, gains.Gamma_x);
    quad += weighted_trace(ktilde_r, gains.Gamma_r);
    return 0.5 * quad;
}

double classical_vdot(const Vector& e, const LyapunovCert& cert) {
    return -0.5 * quadratic_form(e, cert.Q);
}

double vdot_simplified(const Vector& e, const Vector& e_d, const LyapunovCert& cert) {
    const double kb2 = cert.kb_prime_sq();
    const double epe = quadratic_form(e, cert.P);
    if (epe >= kb2)
        throw BarrierBreach("vdot_simplified: e'Pe outside barrier interior", 0.0);
    return -0.5 * (quadratic_form(e, cert.Q) / (kb2 - epe) + quadratic_form(e_d, cert.Q));
}

double vdot_expanded(const Vector& x, const Vector& x_r, const Vector& r, const Vector& e1,
                     const Matrix& kx_hat, const Matrix& kr_hat, const Matrix& k_d,
                     const Matrix& k_1, const ControlDecision& decision,
                     const LyapunovCert& cert, const GainSet& gains,
                     const TrueGains& true_gains, const Matrix& B, const Matrix& A_r) {
    const Vector e = x - x_r;
    const Vector e_d = compute_ed(e, e1);
    const double kb2 = cert.kb_prime_sq();
    const double epe = quadratic_form(e, cert.P);
    if (epe >= kb2)
        throw BarrierBreach("vdot_expanded: e'Pe outside barrier interior", 0.0);
    const double inv_d = 1.0 / (kb2 - epe);

    const Matrix ktilde_x = kx_hat - true_gains.K_x;
    const Matrix ktilde_r = kr_hat - true_gains.K_r;
    const Matrix lyap_lhs = A_r.transpose() * cert.P + cert.P * A_r;  // = -Q up to residual
    const Vector pe = cert.P * e;
    const Vector ped = cert.P * e_d;
    const Vector& du = decision.delta_u;

    // Barrier bracket: e'(Ar'P + PAr)e / 2 + e'PB(Ktx x + Ktr r) + e'P(Kd+K1) du,
    // all divided by D. P-then-B ordering throughout.
    double bracket_e = 0.5 * dot(e, lyap_lhs * e);
    bracket_e += dot(pe, B * (ktilde_x * x));
    bracket_e += dot(pe, B * (ktilde_r * r));
    bracket_e += dot(pe, (k_d + k_1) * du);

    // e_d bracket with K_d du in place of B du.
    double bracket_ed = 0.5 * dot(e_d, lyap_lhs * e_d);
    bracket_ed += dot(ped, B * (ktilde_x * x));
    bracket_ed += dot(ped, B * (ktilde_r * r));
    bracket_ed += dot(ped, k_d * du);

    // Trace terms with the adaptive laws substituted.
    const Vector bt_pe = B.transpose() * pe;
    const Vector bt_ped = B.transpose() * ped;
    const Matrix dkx = -1.0 * (gains.Gamma_x * (inv_d * outer(bt_pe, x) + outer(bt_ped, x)));
    const Matrix dkr = -1.0 * (gains.Gamma_r * (inv_d * outer(bt_pe, r) + outer(bt_ped, r)));
    const Matrix dkd = -1.0 * (gains.Gamma_d * (inv_d * outer(pe, du) + outer(ped, du)));
    const Matrix dk1 = -inv_d * (gains.Gamma_1 * outer(pe, du));

    double traces = (ktilde_x.transpose() * (inverse(gains.Gamma_x) * dkx)).trace();
    traces += (ktilde_r.transpose() * (inverse(gains.Gamma_r) * dkr)).trace();
    traces += (k_d.transpose() * (inverse(gains.Gamma_d) * dkd)).trace();
    traces += (k_1.transpose() * (inverse(gains.Gamma_1) * dk1)).trace();

    return inv_d * bracket_e + bracket_ed + traces;
}

void monitor_step(double t, const Vector& x, const Vector& x_r, const Vector& e,
                  const Vector& u, const LyapunovCert& cert, const ConstraintSpec& spec,
                  ConstraintReport& report) {
    constexpr double slack = 1.0 + 1e-12;

    const double en = e.norm();
    const double xn = x.norm();
    const double un = u.norm();
    const double xrn = x_r.norm();
    const double ratio = cert.barrier_ratio(e);

    report.max_e_norm = std::max(report.max_e_norm, en);
    report.max_x_norm = std::max(report.max_x_norm, xn);
    report.max_u_norm = std::max(report.max_u_norm, un);
    report.max_barrier_ratio = std::max(report.max_barrier_ratio, ratio);
    report.xr_norm_max = std::max(report.xr_norm_max, xrn);
    report.e_final_norm = en;

    if (xn > spec.beta * slack) report.breach_events.push_back({t, BreachKind::state});
    if (un > spec.u_max * slack) report.breach_events.push_back({t, BreachKind::input});
    if (ratio >= 1.0) report.breach_events.push_back({t, BreachKind::barrier});
    if (xrn > spec.alpha1 * slack) report.breach_events.push_back({t, BreachKind::assumption1});
}

} // namespace mracsim
