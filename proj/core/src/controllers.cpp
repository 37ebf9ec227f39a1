#include "mracsim/controllers.hpp"

#include <cmath>
#include <sstream>

namespace mracsim {

namespace {

void check_pd(const Matrix& gamma, const char* name) {
    if (gamma.rows() != gamma.cols()) throw ConfigError(std::string(name) + ": must be square");
    if (gamma.asymmetry() > 1e-12) throw ConfigError(std::string(name) + ": must be symmetric");
    if (!(min_eig_sym(gamma) > 0.0)) throw ConfigError(std::string(name) + ": must be positive definite");
}

} // namespace

void ClassicalState::validate() const {
    check_pd(Gamma_x, "controller.classical.gamma_x");
    check_pd(Gamma_r, "controller.classical.gamma_r");
}

void ConstrainedState::validate() const {
    check_pd(Gamma_x, "controller.constrained.gamma_x");
    check_pd(Gamma_r, "controller.constrained.gamma_r");
    check_pd(Gamma_d, "controller.constrained.gamma_d");
    check_pd(Gamma_1, "controller.constrained.gamma_1");
}

Vector classical_control(const ClassicalState& s, const Vector& x, const Vector& r) {
    if (s.Kx_hat.cols() != x.size() || s.Kr_hat.cols() != r.size())
        throw DimensionMismatch("classical_control: dimension mismatch");
    return s.Kx_hat * x + s.Kr_hat * r;
}

ClassicalDerivatives classical_update(const ClassicalState& s, const Vector& e,
                                      const Vector& x, const Vector& r,
                                      const Matrix& B, const Matrix& P) {
    if (e.size() != x.size() || P.rows() != e.size() || B.rows() != e.size())
        throw DimensionMismatch("classical_update: dimension mismatch");
    const Vector bt_pe = B.transpose() * (P * e);
    ClassicalDerivatives d;
    d.Kx_hat_dot = -1.0 * (s.Gamma_x * outer(bt_pe, x));
    d.Kr_hat_dot = -1.0 * (s.Gamma_r * outer(bt_pe, r));
    return d;
}

Vector auxiliary_control(const ConstrainedState& s, const Vector& x, const Vector& r) {
    if (s.Kx_hat.cols() != x.size() || s.Kr_hat.cols() != r.size())
        throw DimensionMismatch("auxiliary_control: dimension mismatch");
    return s.Kx_hat * x + s.Kr_hat * r;
}

ControlDecision saturate(const Vector& v, double u_max) {
    ControlDecision dec;
    dec.v = v;
    dec.u = v;
    dec.delta_u = Vector(v.size());
    dec.saturated.assign(v.size(), 0);
    if (!std::isfinite(u_max)) return dec;

    const double limit = u_max / std::sqrt(static_cast<double>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > limit) {
            const double sgn = v[i] > 0.0 ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
            dec.u[i] = limit * sgn;
            dec.delta_u[i] = dec.u[i] - v[i];
            dec.saturated[i] = 1;
        }
    }
    return dec;
}

Vector compute_ed(const Vector& e, const Vector& e1) {
    if (e.size() != e1.size()) throw DimensionMismatch("compute_ed: dimension mismatch");
    return e - e1;
}

ConstrainedDerivatives constrained_update(const ConstrainedState& s, const Vector& e,
                                          const Vector& e_d, const Vector& x, const Vector& r,
                                          const Vector& delta_u, const Matrix& B, const Matrix& P,
                                          const Matrix& A_r, double kb_prime,
                                          double guard_epsilon, double t) {
    if (e.size() != x.size() || P.rows() != e.size() || e_d.size() != e.size())
        throw DimensionMismatch("constrained_update: dimension mismatch");

    const double kb2 = kb_prime * kb_prime;
    const double epe = quadratic_form(e, P);
    if (epe >= (1.0 - guard_epsilon) * kb2) {
        std::ostringstream msg;
        msg << "barrier guard: e'Pe = " << epe << " >= (1 - " << guard_epsilon
            << ") * kb'^2 = " << (1.0 - guard_epsilon) * kb2 << " at t = " << t;
        throw BarrierBreach(msg.str(), t);
    }
    const double inv_d = 1.0 / (kb2 - epe);

    const Vector pe = P * e;
    const Vector ped = P * e_d;
    const Vector bt_pe = B.transpose() * pe;
    const Vector bt_ped = B.transpose() * ped;

    ConstrainedDerivatives d;
    d.Kx_hat_dot = -1.0 * (s.Gamma_x * (inv_d * outer(bt_pe, x) + outer(bt_ped, x)));
    d.Kr_hat_dot = -1.0 * (s.Gamma_r * (inv_d * outer(bt_pe, r) + outer(bt_ped, r)));
    d.Kd_dot = -1.0 * (s.Gamma_d * (inv_d * outer(pe, delta_u) + outer(ped, delta_u)));
    d.K1_dot = -inv_d * (s.Gamma_1 * outer(pe, delta_u));
    d.e1_dot = A_r * s.e1 + s.K1 * delta_u;
    return d;
}

} // namespace mracsim
