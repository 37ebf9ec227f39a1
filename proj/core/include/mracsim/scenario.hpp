#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mracsim/simulation.hpp"

namespace mracsim {

/// Minimal TOML-style reader: [section.path] headers, key = value pairs,
/// # comments, numbers (inf accepted), quoted strings, booleans, and
/// (nested, multi-line) arrays. Keys are returned dotted.
namespace config {

struct Value {
    enum class Type { number, string, boolean, array };
    Type type = Type::number;
    double num = 0.0;
    std::string str;
    bool flag = false;
    std::vector<Value> items;
};

std::map<std::string, Value> parse(const std::string& text);

} // namespace config

struct ControllerConfig {
    Matrix Gamma_x;
    Matrix Gamma_r;
    Matrix Gamma_d;                // constrained only
    Matrix Gamma_1;                // constrained only
    std::optional<Matrix> Kx_hat0; // initialization overrides
    std::optional<Matrix> Kr_hat0;
    std::optional<Matrix> K1_0;
};

/// A fully validated scenario: models, constraints, per-controller gains,
/// Lyapunov Q choice and integration settings.
struct Scenario {
    std::string name = "scenario";
    PlantModel plant;
    ReferenceModel ref;
    ConstraintSpec cspec;
    double q_scale = 1.0;
    std::optional<Matrix> Q_override;
    ControllerKind default_controller = ControllerKind::constrained;
    ControllerConfig classical;
    ControllerConfig constrained;
    bool has_classical = false;
    bool has_constrained = false;
    SimConfig sim;
};

Scenario load_scenario_text(const std::string& text);
Scenario load_scenario_file(const std::string& path);

/// Bundled scenario source by name; nullptr when unknown.
const char* bundled_scenario_text(const std::string& name);

/// Treats `ref` as a path when such a file exists, otherwise as a bundled
/// scenario name.
Scenario resolve_scenario(const std::string& ref);

/// Effective Q for the certificate: explicit override, else q_scale * I_n.
Matrix scenario_q(const Scenario& scenario);

/// Builds the Lyapunov certificate and initial controller states
/// (Kx_hat = Kr_hat = 0 and K1 = B, Kd = B - K1 unless overridden).
SimSetup make_setup(const Scenario& scenario);

} // namespace mracsim
