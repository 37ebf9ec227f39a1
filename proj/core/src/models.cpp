#include "mracsim/models.hpp"

#include <cmath>
#include <sstream>

namespace mracsim {

ReferenceSignal ReferenceSignal::two_channel_decay() {
    ReferenceSignal sig;
    sig.kind = Kind::exp_decay;
    sig.channels = 2;
    sig.amplitude = {1.0, 1.0};
    sig.tau = {10.0, 20.0};
    return sig;
}

ReferenceSignal ReferenceSignal::zero_signal(std::size_t channels) {
    ReferenceSignal sig;
    sig.kind = Kind::zero;
    sig.channels = channels;
    return sig;
}

void ReferenceSignal::validate() const {
    if (channels == 0) throw ConfigError("signal: channels must be positive");
    switch (kind) {
        case Kind::exp_decay:
            if (amplitude.size() != channels || tau.size() != channels)
                throw ConfigError("signal: exp_decay needs per-channel amplitude and tau");
            for (double t : tau)
                if (!(t > 0.0)) throw ConfigError("signal: tau must be positive");
            break;
        case Kind::constant:
            if (amplitude.size() != channels)
                throw ConfigError("signal: constant needs per-channel amplitude");
            break;
        case Kind::sinusoid:
            if (amplitude.size() != channels || omega.size() != channels)
                throw ConfigError("signal: sinusoid needs per-channel amplitude and omega");
            break;
        case Kind::zero:
            break;
    }
}

Vector eval_reference_signal(const ReferenceSignal& sig, double t) {
    Vector r(sig.channels);
    switch (sig.kind) {
        case ReferenceSignal::Kind::exp_decay:
            for (std::size_t i = 0; i < sig.channels; ++i)
                r[i] = sig.amplitude[i] * std::exp(-t / sig.tau[i]);
            break;
        case ReferenceSignal::Kind::constant:
            for (std::size_t i = 0; i < sig.channels; ++i) r[i] = sig.amplitude[i];
            break;
        case ReferenceSignal::Kind::sinusoid:
            for (std::size_t i = 0; i < sig.channels; ++i)
                r[i] = sig.amplitude[i] * std::sin(sig.omega[i] * t);
            break;
        case ReferenceSignal::Kind::zero:
            break;
    }
    return r;
}

void PlantModel::validate() const {
    if (A.rows() != A.cols()) throw ConfigError("plant.A: must be square");
    if (B.rows() != A.rows()) throw ConfigError("plant.B: row count must match plant.A");
    if (B.cols() == 0 || B.cols() > B.rows()) throw ConfigError("plant.B: invalid input dimension");
    if (rank_estimate(B) < B.cols()) throw ConfigError("plant.B: not full column rank");
}

void ReferenceModel::validate() const {
    if (A_r.rows() != A_r.cols()) throw ConfigError("reference.A_r: must be square");
    if (B_r.rows() != A_r.rows()) throw ConfigError("reference.B_r: row count must match reference.A_r");
    if (signal.channels != B_r.cols())
        throw ConfigError("signal: channel count must match reference.B_r columns");
    signal.validate();
}

void ConstraintSpec::validate() const {
    if (!(alpha1 > 0.0)) throw ConfigError("constraints.alpha1: must be positive");
    if (!(alpha1 < beta)) throw ConfigError("constraints.beta: must exceed alpha1");
    if (!(u_max > 0.0)) throw ConfigError("constraints.u_max: must be positive");
    if (!(k_b() > 0.0)) throw ConfigError("constraints: derived k_b must be positive");
}

Vector plant_derivative(const PlantModel& plant, const Vector& x, const Vector& u) {
    if (x.size() != plant.state_dim() || u.size() != plant.input_dim())
        throw DimensionMismatch("plant_derivative: dimension mismatch");
    return plant.A * x + plant.B * u;
}

Vector reference_derivative(const ReferenceModel& ref, const Vector& x_r, double t) {
    if (x_r.size() != ref.A_r.rows())
        throw DimensionMismatch("reference_derivative: dimension mismatch");
    return ref.A_r * x_r + ref.B_r * eval_reference_signal(ref.signal, t);
}

TrueGains solve_matching_gains(const PlantModel& plant, const ReferenceModel& ref) {
    const Matrix bt = plant.B.transpose();
    const Matrix btb = bt * plant.B;

    auto least_squares = [&](const Matrix& target) {
        const Matrix rhs = bt * target;
        Matrix k(plant.input_dim(), target.cols());
        for (std::size_t j = 0; j < target.cols(); ++j) {
            Vector col(rhs.rows());
            for (std::size_t i = 0; i < rhs.rows(); ++i) col[i] = rhs(i, j);
            const Vector kcol = solve_linear(btb, col);
            for (std::size_t i = 0; i < kcol.size(); ++i) k(i, j) = kcol[i];
        }
        return k;
    };

    TrueGains gains;
    gains.K_x = least_squares(ref.A_r - plant.A);
    gains.K_r = least_squares(ref.B_r);

    const double res_x = (plant.A + plant.B * gains.K_x - ref.A_r).frobenius_norm();
    const double res_r = (plant.B * gains.K_r - ref.B_r).frobenius_norm();
    if (res_x > 1e-8 || res_r > 1e-8) {
        std::ostringstream msg;
        msg << "matching conditions infeasible: ||A+BKx-Ar||_F = " << res_x
            << ", ||BKr-Br||_F = " << res_r;
        throw MatchingInfeasible(msg.str());
    }
    return gains;
}

} // namespace mracsim
