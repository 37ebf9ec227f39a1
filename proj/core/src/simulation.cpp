#include "mracsim/simulation.hpp"

#include <cmath>
#include <sstream>

namespace mracsim {

const char* controller_kind_name(ControllerKind kind) {
    return kind == ControllerKind::classical ? "classical" : "constrained";
}

const char* run_status_name(RunStatus status) {
    switch (status) {
        case RunStatus::completed: return "completed";
        case RunStatus::barrier_breach: return "barrier_breach";
        case RunStatus::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

void SimConfig::validate(std::size_t state_dim, double k_b) const {
    if (!(dt > 0.0)) throw ConfigError("sim.dt: must be positive");
    if (!(t_final > 0.0)) throw ConfigError("sim.t_final: must be positive");
    if (log_stride < 1) throw ConfigError("sim.log_stride: must be >= 1");
    if (x0.size() != state_dim) throw ConfigError("sim.x0: dimension must match plant state");
    if (xr0.size() != state_dim) throw ConfigError("sim.xr0: dimension must match plant state");
    if (!((x0 - xr0).norm() < k_b))
        throw ConfigError("sim.x0: initial tracking error must satisfy ||x0 - xr0|| < k_b");
}

namespace {

void append_matrix(std::vector<double>& out, const Matrix& m) {
    out.insert(out.end(), m.entries().begin(), m.entries().end());
}

void append_vector(std::vector<double>& out, const Vector& v) {
    out.insert(out.end(), v.entries().begin(), v.entries().end());
}

std::size_t read_into(const std::vector<double>& flat, std::size_t pos, std::vector<double>& dst) {
    for (double& x : dst) x = flat[pos++];
    return pos;
}

} // namespace

std::vector<double> flatten(const AugmentedState& s) {
    std::vector<double> flat;
    flat.reserve(s.x.size() * 2 + 64);
    append_vector(flat, s.x);
    append_vector(flat, s.x_r);
    if (const auto* cls = std::get_if<ClassicalState>(&s.controller)) {
        append_matrix(flat, cls->Kx_hat);
        append_matrix(flat, cls->Kr_hat);
    } else {
        const auto& cns = std::get<ConstrainedState>(s.controller);
        append_matrix(flat, cns.Kx_hat);
        append_matrix(flat, cns.Kr_hat);
        append_matrix(flat, cns.Kd);
        append_matrix(flat, cns.K1);
        append_vector(flat, cns.e1);
    }
    return flat;
}

void unflatten(const std::vector<double>& flat, AugmentedState& s) {
    std::size_t pos = 0;
    pos = read_into(flat, pos, s.x.entries());
    pos = read_into(flat, pos, s.x_r.entries());
    if (auto* cls = std::get_if<ClassicalState>(&s.controller)) {
        pos = read_into(flat, pos, cls->Kx_hat.entries());
        pos = read_into(flat, pos, cls->Kr_hat.entries());
    } else {
        auto& cns = std::get<ConstrainedState>(s.controller);
        pos = read_into(flat, pos, cns.Kx_hat.entries());
        pos = read_into(flat, pos, cns.Kr_hat.entries());
        pos = read_into(flat, pos, cns.Kd.entries());
        pos = read_into(flat, pos, cns.K1.entries());
        pos = read_into(flat, pos, cns.e1.entries());
    }
    if (pos != flat.size())
        throw DimensionMismatch("unflatten: flat size does not match state layout");
}

bool barrier_guard(const Vector& e, const LyapunovCert& cert, double guard_epsilon) {
    return quadratic_form(e, cert.P) < (1.0 - guard_epsilon) * cert.kb_prime_sq();
}

AugmentedState closed_loop_derivative(const AugmentedState& s, double t, const SimSetup& ctx) {
    const Vector r = eval_reference_signal(ctx.ref.signal, t);
    const Vector e = s.x - s.x_r;

    AugmentedState d = s;  // same shape; entries overwritten below
    if (const auto* cls = std::get_if<ClassicalState>(&s.controller)) {
        const Vector u = classical_control(*cls, s.x, r);
        const ClassicalDerivatives cd = classical_update(*cls, e, s.x, r, ctx.plant.B, ctx.cert.P);
        d.x = plant_derivative(ctx.plant, s.x, u);
        d.x_r = reference_derivative(ctx.ref, s.x_r, t);
        auto& dc = std::get<ClassicalState>(d.controller);
        dc.Kx_hat = cd.Kx_hat_dot;
        dc.Kr_hat = cd.Kr_hat_dot;
    } else {
        const auto& cns = std::get<ConstrainedState>(s.controller);
        const Vector v = auxiliary_control(cns, s.x, r);
        const ControlDecision dec = saturate(v, ctx.cspec.u_max);
        const Vector e_d = compute_ed(e, cns.e1);
        const ConstrainedDerivatives cd =
            constrained_update(cns, e, e_d, s.x, r, dec.delta_u, ctx.plant.B, ctx.cert.P,
                               ctx.ref.A_r, ctx.cert.kb_prime, ctx.guard_epsilon, t);
        d.x = plant_derivative(ctx.plant, s.x, dec.u);
        d.x_r = reference_derivative(ctx.ref, s.x_r, t);
        auto& dc = std::get<ConstrainedState>(d.controller);
        dc.Kx_hat = cd.Kx_hat_dot;
        dc.Kr_hat = cd.Kr_hat_dot;
        dc.Kd = cd.Kd_dot;
        dc.K1 = cd.K1_dot;
        dc.e1 = cd.e1_dot;
    }
    return d;
}

std::vector<double> rk4_kernel(
    const std::vector<double>& y, double t, double dt,
    const std::function<std::vector<double>(const std::vector<double>&, double)>& deriv) {
    const std::size_t n = y.size();
    std::vector<double> stage(n);

    const std::vector<double> k1 = deriv(y, t);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
    const std::vector<double> k2 = deriv(stage, t + 0.5 * dt);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k2[i];
    const std::vector<double> k3 = deriv(stage, t + 0.5 * dt);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * k3[i];
    const std::vector<double> k4 = deriv(stage, t + dt);

    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i)
        next[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return next;
}

AugmentedState rk4_step(const AugmentedState& s, double t, double dt, const SimSetup& ctx) {
    AugmentedState scratch = s;
    auto deriv = [&](const std::vector<double>& flat, double tq) {
        unflatten(flat, scratch);
        return flatten(closed_loop_derivative(scratch, tq, ctx));
    };
    AugmentedState next = s;
    unflatten(rk4_kernel(flatten(s), t, dt, deriv), next);
    return next;
}

namespace {

struct Logger {
    const SimSetup& setup;
    const TrueGains& tg;
    GainSet gains;

    TrajectoryRecord record(double t, const AugmentedState& s) const {
        TrajectoryRecord rec;
        rec.t = t;
        rec.x = s.x;
        rec.x_r = s.x_r;
        rec.e = s.x - s.x_r;
        rec.barrier_ratio = setup.cert.barrier_ratio(rec.e);
        if (const auto* cls = std::get_if<ClassicalState>(&s.controller)) {
            rec.u = classical_control(*cls, s.x, eval_reference_signal(setup.ref.signal, t));
            rec.v = rec.u;
            rec.delta_u = Vector(rec.u.size());
            rec.sat_flags.assign(rec.u.size(), 0);
            rec.V = classical_lyapunov_value(rec.e, cls->Kx_hat - tg.K_x, cls->Kr_hat - tg.K_r,
                                             setup.cert, gains);
            rec.Vdot = classical_vdot(rec.e, setup.cert);
        } else {
            const auto& cns = std::get<ConstrainedState>(s.controller);
            const Vector r = eval_reference_signal(setup.ref.signal, t);
            const ControlDecision dec = saturate(auxiliary_control(cns, s.x, r), setup.cspec.u_max);
            rec.u = dec.u;
            rec.v = dec.v;
            rec.delta_u = dec.delta_u;
            rec.sat_flags = dec.saturated;
            const Vector e_d = compute_ed(rec.e, cns.e1);
            rec.V = lyapunov_value(rec.e, e_d, cns.Kx_hat - tg.K_x, cns.Kr_hat - tg.K_r,
                                   cns.Kd, cns.K1, setup.cert, gains);
            rec.Vdot = vdot_simplified(rec.e, e_d, setup.cert);
        }
        return rec;
    }
};

} // namespace

SimResult simulate(const SimSetup& setup, ControllerKind kind, const SimConfig& cfg) {
    cfg.validate(setup.plant.state_dim(), setup.cspec.k_b());

    const TrueGains tg = solve_matching_gains(setup.plant, setup.ref);

    AugmentedState state;
    state.x = cfg.x0;
    state.x_r = cfg.xr0;
    GainSet gains;
    if (kind == ControllerKind::classical) {
        state.controller = setup.classical0;
        gains.Gamma_x = setup.classical0.Gamma_x;
        gains.Gamma_r = setup.classical0.Gamma_r;
    } else {
        state.controller = setup.constrained0;
        gains.Gamma_x = setup.constrained0.Gamma_x;
        gains.Gamma_r = setup.constrained0.Gamma_r;
        gains.Gamma_d = setup.constrained0.Gamma_d;
        gains.Gamma_1 = setup.constrained0.Gamma_1;
    }

    SimSetup ctx = setup;
    ctx.guard_epsilon = cfg.guard_epsilon;

    Logger logger{ctx, tg, gains};
    SimResult result;

    auto log_point = [&](double t, const AugmentedState& s) {
        TrajectoryRecord rec = logger.record(t, s);
        monitor_step(t, rec.x, rec.x_r, rec.e, rec.u, ctx.cert, ctx.cspec, result.report);
        result.log.records.push_back(std::move(rec));
    };

    const auto steps = static_cast<std::size_t>(std::llround(cfg.t_final / cfg.dt));

    // Assumption-3 admits ||e(0)|| < k_b points outside the barrier ellipsoid
    // along expensive P-directions; fail those up front instead of logging.
    if (kind == ControllerKind::constrained &&
        !barrier_guard(cfg.x0 - cfg.xr0, ctx.cert, cfg.guard_epsilon)) {
        result.status = RunStatus::barrier_breach;
        result.detail = "barrier guard: initial tracking error outside interior at t = 0";
        result.report.breach_events.push_back({0.0, BreachKind::barrier});
        return result;
    }

    log_point(0.0, state);
    result.t_end = 0.0;

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const double t_next = static_cast<double>(k + 1) * cfg.dt;
        try {
            state = rk4_step(state, t, cfg.dt, ctx);
        } catch (const BarrierBreach& ex) {
            result.status = RunStatus::barrier_breach;
            result.detail = ex.what();
            result.report.breach_events.push_back({ex.t, BreachKind::barrier});
            return result;
        }

        bool finite = state.x.is_finite() && state.x_r.is_finite();
        if (finite) {
            for (double x : flatten(state))
                if (!std::isfinite(x)) { finite = false; break; }
        }
        if (!finite) {
            result.status = RunStatus::numerical_failure;
            std::ostringstream msg;
            msg << "non-finite state at t = " << t_next;
            result.detail = msg.str();
            return result;
        }

        if (kind == ControllerKind::constrained) {
            const Vector e = state.x - state.x_r;
            if (!barrier_guard(e, ctx.cert, cfg.guard_epsilon)) {
                result.status = RunStatus::barrier_breach;
                std::ostringstream msg;
                msg << "barrier guard: step endpoint outside interior at t = " << t_next;
                result.detail = msg.str();
                result.report.breach_events.push_back({t_next, BreachKind::barrier});
                result.t_end = t_next;
                return result;
            }
        }

        result.t_end = t_next;
        if ((k + 1) % cfg.log_stride == 0 || k + 1 == steps) log_point(t_next, state);
    }

    return result;
}

} // namespace mracsim
