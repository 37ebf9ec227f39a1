#include "mracsim/scenario.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mracsim {

namespace config {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

int bracket_balance(const std::string& s) {
    bool in_string = false;
    int depth = 0;
    for (char c : s) {
        if (c == '"') in_string = !in_string;
        if (in_string) continue;
        if (c == '[') ++depth;
        if (c == ']') --depth;
    }
    return depth;
}

class ValueParser {
public:
    ValueParser(const std::string& text, int line) : text_(text), line_(line) {}

    Value parse() {
        Value v = parse_value();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters after value");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "config line " << line_ << ": " << what;
        throw ConfigError(msg.str());
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    Value parse_value() {
        skip_ws();
        if (pos_ >= text_.size()) fail("missing value");
        const char c = text_[pos_];
        if (c == '[') return parse_array();
        if (c == '"') return parse_string();
        return parse_scalar();
    }

    Value parse_array() {
        ++pos_;  // consume '['
        Value v;
        v.type = Value::Type::array;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            v.items.push_back(parse_value());
            skip_ws();
            if (pos_ >= text_.size()) fail("unterminated array");
            if (text_[pos_] == ',') {
                ++pos_;
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ']') {  // trailing comma
                    ++pos_;
                    return v;
                }
                continue;
            }
            if (text_[pos_] == ']') {
                ++pos_;
                return v;
            }
            fail("expected ',' or ']' in array");
        }
    }

    Value parse_string() {
        ++pos_;  // consume '"'
        Value v;
        v.type = Value::Type::string;
        while (pos_ < text_.size() && text_[pos_] != '"') v.str.push_back(text_[pos_++]);
        if (pos_ >= text_.size()) fail("unterminated string");
        ++pos_;
        return v;
    }

    Value parse_scalar() {
        std::size_t end = pos_;
        while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
               !std::isspace(static_cast<unsigned char>(text_[end])))
            ++end;
        const std::string token = text_.substr(pos_, end - pos_);
        pos_ = end;
        Value v;
        if (token == "true" || token == "false") {
            v.type = Value::Type::boolean;
            v.flag = token == "true";
            return v;
        }
        char* parse_end = nullptr;
        v.num = std::strtod(token.c_str(), &parse_end);
        if (parse_end == nullptr || *parse_end != '\0')
            fail("cannot parse value '" + token + "'");
        v.type = Value::Type::number;
        return v;
    }

    const std::string& text_;
    int line_;
    std::size_t pos_ = 0;
};

} // namespace

std::map<std::string, Value> parse(const std::string& text) {
    std::map<std::string, Value> out;
    std::istringstream stream(text);
    std::string line;
    std::string section;
    int line_no = 0;

    while (std::getline(stream, line)) {
        ++line_no;
        std::string body = trim(strip_comment(line));
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) + ": malformed section header");
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
            continue;
        }

        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");

        std::string value_text = body.substr(eq + 1);
        const int start_line = line_no;
        while (bracket_balance(value_text) > 0) {
            std::string more;
            if (!std::getline(stream, more))
                throw ConfigError("config line " + std::to_string(start_line) + ": unterminated array");
            ++line_no;
            value_text += "\n" + strip_comment(more);
        }

        const std::string full_key = section.empty() ? key : section + "." + key;
        out[full_key] = ValueParser(trim(value_text), start_line).parse();
    }
    return out;
}

} // namespace config

namespace {

using config::Value;

class Reader {
public:
    explicit Reader(std::map<std::string, Value> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    double number(const std::string& key) const {
        const Value& v = get(key);
        if (v.type != Value::Type::number) fail(key, "expected a number");
        return v.num;
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::string str(const std::string& key) const {
        const Value& v = get(key);
        if (v.type != Value::Type::string) fail(key, "expected a string");
        return v.str;
    }

    Vector vector(const std::string& key) const {
        const Value& v = get(key);
        if (v.type != Value::Type::array) fail(key, "expected an array");
        Vector out(v.items.size());
        for (std::size_t i = 0; i < v.items.size(); ++i) {
            if (v.items[i].type != Value::Type::number) fail(key, "expected numeric entries");
            out[i] = v.items[i].num;
        }
        return out;
    }

    Matrix matrix(const std::string& key) const {
        const Value& v = get(key);
        if (v.type != Value::Type::array || v.items.empty())
            fail(key, "expected a non-empty array of rows");
        std::vector<std::vector<double>> rows;
        for (const Value& row : v.items) {
            if (row.type != Value::Type::array) fail(key, "expected rows as arrays");
            std::vector<double> r;
            for (const Value& x : row.items) {
                if (x.type != Value::Type::number) fail(key, "expected numeric entries");
                r.push_back(x.num);
            }
            if (!rows.empty() && r.size() != rows.front().size()) fail(key, "ragged rows");
            rows.push_back(std::move(r));
        }
        return Matrix::from_rows(rows);
    }

    /// Scalar c means c * I_dim; otherwise a dim x dim matrix.
    Matrix gain_block(const std::string& key, std::size_t dim) const {
        const Value& v = get(key);
        if (v.type == Value::Type::number) return v.num * Matrix::identity(dim);
        Matrix m = matrix(key);
        if (m.rows() != dim || m.cols() != dim)
            fail(key, "expected " + std::to_string(dim) + "x" + std::to_string(dim) + " block or scalar");
        return m;
    }

private:
    const Value& get(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError(key + ": missing required field");
        return it->second;
    }

    [[noreturn]] static void fail(const std::string& key, const std::string& what) {
        throw ConfigError(key + ": " + what);
    }

    std::map<std::string, Value> kv_;
};

ReferenceSignal parse_signal(const Reader& r, std::size_t channels) {
    ReferenceSignal sig;
    sig.channels = channels;
    const std::string kind = r.str("signal.kind");
    if (kind == "exp_decay") {
        sig.kind = ReferenceSignal::Kind::exp_decay;
        sig.amplitude = r.vector("signal.amplitude").entries();
        sig.tau = r.vector("signal.tau").entries();
    } else if (kind == "constant") {
        sig.kind = ReferenceSignal::Kind::constant;
        sig.amplitude = r.vector("signal.amplitude").entries();
    } else if (kind == "sinusoid") {
        sig.kind = ReferenceSignal::Kind::sinusoid;
        sig.amplitude = r.vector("signal.amplitude").entries();
        sig.omega = r.vector("signal.omega").entries();
    } else if (kind == "zero") {
        sig.kind = ReferenceSignal::Kind::zero;
    } else {
        throw ConfigError("signal.kind: unknown kind '" + kind + "'");
    }
    return sig;
}

} // namespace

Scenario load_scenario_text(const std::string& text) {
    Reader r(config::parse(text));
    Scenario sc;

    if (r.has("name")) sc.name = r.str("name");

    sc.plant.A = r.matrix("plant.A");
    sc.plant.B = r.matrix("plant.B");
    sc.plant.validate();
    const std::size_t n = sc.plant.state_dim();
    const std::size_t m = sc.plant.input_dim();

    sc.ref.A_r = r.matrix("reference.A_r");
    sc.ref.B_r = r.matrix("reference.B_r");
    sc.ref.signal = parse_signal(r, sc.ref.B_r.cols());
    sc.ref.validate();
    if (sc.ref.A_r.rows() != n) throw ConfigError("reference.A_r: dimension must match plant.A");
    if (sc.ref.B_r.cols() != m) throw ConfigError("reference.B_r: column count must match plant.B");

    sc.cspec.beta = r.number("constraints.beta");
    sc.cspec.alpha1 = r.number("constraints.alpha1");
    sc.cspec.alpha2 = r.number_or("constraints.alpha2", 0.0);
    sc.cspec.u_max = r.number("constraints.u_max");
    sc.cspec.validate();

    sc.q_scale = r.number_or("lyapunov.q_scale", 1.0);
    if (!(sc.q_scale > 0.0)) throw ConfigError("lyapunov.q_scale: must be positive");
    if (r.has("lyapunov.Q")) {
        Matrix q = r.matrix("lyapunov.Q");
        if (q.rows() != n || q.cols() != n) throw ConfigError("lyapunov.Q: must be n x n");
        sc.Q_override = q;
    }

    if (r.has("controller")) {
        const std::string kind = r.str("controller");
        if (kind == "classical")
            sc.default_controller = ControllerKind::classical;
        else if (kind == "constrained")
            sc.default_controller = ControllerKind::constrained;
        else
            throw ConfigError("controller: must be \"classical\" or \"constrained\"");
    }

    auto load_block = [&](const std::string& prefix, ControllerConfig& cfg, bool constrained) {
        cfg.Gamma_x = r.gain_block(prefix + ".gamma_x", m);
        cfg.Gamma_r = r.gain_block(prefix + ".gamma_r", m);
        if (constrained) {
            cfg.Gamma_d = r.gain_block(prefix + ".gamma_d", n);
            cfg.Gamma_1 = r.gain_block(prefix + ".gamma_1", n);
        }
        if (r.has(prefix + ".kx_hat0")) cfg.Kx_hat0 = r.matrix(prefix + ".kx_hat0");
        if (r.has(prefix + ".kr_hat0")) cfg.Kr_hat0 = r.matrix(prefix + ".kr_hat0");
        if (constrained && r.has(prefix + ".k1_0")) cfg.K1_0 = r.matrix(prefix + ".k1_0");
    };
    if (r.has("controller.classical.gamma_x")) {
        load_block("controller.classical", sc.classical, false);
        sc.has_classical = true;
    }
    if (r.has("controller.constrained.gamma_x")) {
        load_block("controller.constrained", sc.constrained, true);
        sc.has_constrained = true;
    }
    if (!sc.has_classical && !sc.has_constrained)
        throw ConfigError("controller: at least one of controller.classical / controller.constrained required");

    sc.sim.dt = r.number_or("sim.dt", 1e-3);
    sc.sim.t_final = r.number_or("sim.t_final", 40.0);
    sc.sim.guard_epsilon = r.number_or("sim.guard_epsilon", 1e-6);
    const double stride = r.number_or("sim.log_stride", 10.0);
    if (stride < 1.0) throw ConfigError("sim.log_stride: must be >= 1");
    sc.sim.log_stride = static_cast<std::size_t>(stride);
    sc.sim.x0 = r.has("sim.x0") ? r.vector("sim.x0") : Vector(n);
    sc.sim.xr0 = r.has("sim.xr0") ? r.vector("sim.xr0") : Vector(n);
    sc.sim.validate(n, sc.cspec.k_b());

    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_text(buf.str());
}

Scenario resolve_scenario(const std::string& ref) {
    if (std::filesystem::exists(ref)) return load_scenario_file(ref);
    if (const char* text = bundled_scenario_text(ref)) return load_scenario_text(text);
    throw ConfigError("scenario '" + ref + "' is neither a readable file nor a bundled scenario");
}

Matrix scenario_q(const Scenario& scenario) {
    if (scenario.Q_override) return *scenario.Q_override;
    return scenario.q_scale * Matrix::identity(scenario.plant.state_dim());
}

SimSetup make_setup(const Scenario& scenario) {
    SimSetup setup;
    setup.plant = scenario.plant;
    setup.ref = scenario.ref;
    setup.cspec = scenario.cspec;
    setup.cert = make_lyapunov_cert(scenario.ref.A_r, scenario_q(scenario), scenario.cspec.k_b());
    setup.guard_epsilon = scenario.sim.guard_epsilon;

    const std::size_t n = scenario.plant.state_dim();
    const std::size_t m = scenario.plant.input_dim();

    if (scenario.has_classical) {
        const ControllerConfig& cc = scenario.classical;
        setup.classical0.Kx_hat = cc.Kx_hat0.value_or(Matrix::zero(m, n));
        setup.classical0.Kr_hat = cc.Kr_hat0.value_or(Matrix::zero(m, m));
        setup.classical0.Gamma_x = cc.Gamma_x;
        setup.classical0.Gamma_r = cc.Gamma_r;
        setup.classical0.validate();
    }
    if (scenario.has_constrained) {
        const ControllerConfig& cc = scenario.constrained;
        setup.constrained0.Kx_hat = cc.Kx_hat0.value_or(Matrix::zero(m, n));
        setup.constrained0.Kr_hat = cc.Kr_hat0.value_or(Matrix::zero(m, m));
        setup.constrained0.K1 = cc.K1_0.value_or(scenario.plant.B);
        setup.constrained0.Kd = scenario.plant.B - setup.constrained0.K1;
        setup.constrained0.e1 = Vector(n);
        setup.constrained0.Gamma_x = cc.Gamma_x;
        setup.constrained0.Gamma_r = cc.Gamma_r;
        setup.constrained0.Gamma_d = cc.Gamma_d;
        setup.constrained0.Gamma_1 = cc.Gamma_1;
        setup.constrained0.validate();
    }
    return setup;
}

} // namespace mracsim
