#include "mracsim/runio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mracsim {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string trajectory_csv_header(std::size_t n, std::size_t m) {
    std::ostringstream h;
    h << "t";
    for (std::size_t i = 1; i <= n; ++i) h << ",x" << i;
    for (std::size_t i = 1; i <= n; ++i) h << ",xr" << i;
    h << ",e_norm";
    for (std::size_t i = 1; i <= m; ++i) h << ",u" << i;
    h << ",u_norm";
    for (std::size_t i = 1; i <= m; ++i) h << ",v" << i;
    h << ",V,Vdot,barrier_ratio";
    for (std::size_t i = 1; i <= m; ++i) h << ",sat" << i;
    return h.str();
}

std::string trajectory_csv(const TrajectoryLog& log, std::size_t n, std::size_t m) {
    std::string out = trajectory_csv_header(n, m);
    out += "\n";
    for (const TrajectoryRecord& rec : log.records) {
        out += fmt17(rec.t);
        for (std::size_t i = 0; i < n; ++i) { out += ","; out += fmt17(rec.x[i]); }
        for (std::size_t i = 0; i < n; ++i) { out += ","; out += fmt17(rec.x_r[i]); }
        out += ","; out += fmt17(rec.e.norm());
        for (std::size_t i = 0; i < m; ++i) { out += ","; out += fmt17(rec.u[i]); }
        out += ","; out += fmt17(rec.u.norm());
        for (std::size_t i = 0; i < m; ++i) { out += ","; out += fmt17(rec.v[i]); }
        out += ","; out += fmt17(rec.V);
        out += ","; out += fmt17(rec.Vdot);
        out += ","; out += fmt17(rec.barrier_ratio);
        for (std::size_t i = 0; i < m; ++i) out += rec.sat_flags[i] ? ",1" : ",0";
        out += "\n";
    }
    return out;
}

void write_trajectory_csv(const TrajectoryLog& log, std::size_t n, std::size_t m,
                          const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write CSV file '" + path + "'");
    out << trajectory_csv(log, n, m);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == nullptr || *end != '\0')
        throw ConfigError(context + ": cannot parse '" + s + "' as a number");
    return v;
}

} // namespace

CsvTrajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty CSV");
    const std::vector<std::string> header = split_csv_line(line);

    CsvTrajectory csv;
    std::size_t col = 1;
    while (col < header.size() && header[col] == "x" + std::to_string(csv.n + 1)) {
        ++csv.n;
        ++col;
    }
    std::size_t e_norm_col = 1 + 2 * csv.n;
    if (csv.n == 0 || header.size() <= e_norm_col || header[e_norm_col] != "e_norm")
        throw ConfigError(path + ": unrecognized CSV header");
    col = e_norm_col + 1;
    while (col < header.size() && header[col] == "u" + std::to_string(csv.m + 1)) {
        ++csv.m;
        ++col;
    }
    const std::size_t expected = 1 + 2 * csv.n + 1 + csv.m + 1 + csv.m + 3 + csv.m;
    if (csv.m == 0 || header.size() != expected)
        throw ConfigError(path + ": unrecognized CSV header");

    const std::size_t u_norm_col = e_norm_col + csv.m + 1;
    const std::size_t ratio_col = u_norm_col + csv.m + 3;

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != expected) throw ConfigError(path + ": ragged CSV row");
        csv.t.push_back(parse_double(fields[0], path));
        Vector x(csv.n), xr(csv.n);
        for (std::size_t i = 0; i < csv.n; ++i) x[i] = parse_double(fields[1 + i], path);
        for (std::size_t i = 0; i < csv.n; ++i) xr[i] = parse_double(fields[1 + csv.n + i], path);
        csv.x.push_back(std::move(x));
        csv.x_r.push_back(std::move(xr));
        csv.e_norm.push_back(parse_double(fields[e_norm_col], path));
        csv.u_norm.push_back(parse_double(fields[u_norm_col], path));
        csv.barrier_ratio.push_back(parse_double(fields[ratio_col], path));
    }
    if (csv.t.empty()) throw ConfigError(path + ": CSV has no data rows");
    return csv;
}

std::string render_summary(const RunSummary& s) {
    std::ostringstream out;
    out << "scenario = " << s.scenario << "\n";
    out << "controller = " << controller_kind_name(s.controller) << "\n";
    out << "status = " << run_status_name(s.status) << "\n";
    out << "verdict = " << (s.pass() ? "pass" : "fail") << "\n";
    out << "t_end = " << fmt17(s.t_end) << "\n";
    out << "dt = " << fmt17(s.sim.dt) << "\n";
    out << "t_final = " << fmt17(s.sim.t_final) << "\n";
    out << "log_stride = " << s.sim.log_stride << "\n";
    out << "guard_epsilon = " << fmt17(s.sim.guard_epsilon) << "\n";
    auto vec = [&](const Vector& v) {
        std::string r = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) r += ", ";
            r += fmt17(v[i]);
        }
        return r + "]";
    };
    out << "x0 = " << vec(s.sim.x0) << "\n";
    out << "xr0 = " << vec(s.sim.xr0) << "\n";
    out << "u_max = " << fmt17(s.u_max) << "\n";
    out << "beta = " << fmt17(s.beta) << "\n";
    out << "alpha1 = " << fmt17(s.alpha1) << "\n";
    out << "alpha2 = " << fmt17(s.alpha2) << "\n";
    out << "k_b = " << fmt17(s.k_b) << "\n";
    out << "q_scale = " << fmt17(s.q_scale) << "\n";
    out << "kb_prime = " << fmt17(s.kb_prime) << "\n";
    out << "lambda_min_P = " << fmt17(s.lambda_min_p) << "\n";
    out << "max_e_norm = " << fmt17(s.report.max_e_norm) << "\n";
    out << "max_x_norm = " << fmt17(s.report.max_x_norm) << "\n";
    out << "max_u_norm = " << fmt17(s.report.max_u_norm) << "\n";
    out << "max_barrier_ratio = " << fmt17(s.report.max_barrier_ratio) << "\n";
    out << "e_final_norm = " << fmt17(s.report.e_final_norm) << "\n";
    out << "xr_norm_max = " << fmt17(s.report.xr_norm_max) << "\n";
    for (BreachKind kind : {BreachKind::state, BreachKind::input, BreachKind::barrier,
                            BreachKind::assumption1}) {
        const std::size_t count = s.report.count(kind);
        out << "breach_count_" << breach_kind_name(kind) << " = " << count << "\n";
        out << "monitor_" << breach_kind_name(kind) << " = " << (count == 0 ? "pass" : "fail")
            << "\n";
    }
    if (!s.report.breach_events.empty()) {
        const BreachEvent& first = s.report.breach_events.front();
        out << "first_breach_t = " << fmt17(first.t) << "\n";
        out << "first_breach_kind = " << breach_kind_name(first.kind) << "\n";
    }
    if (!s.detail.empty()) out << "detail = " << s.detail << "\n";
    for (const std::string& a : s.artifacts) out << "artifact = " << a << "\n";
    return out.str();
}

void write_summary(const RunSummary& summary, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write summary file '" + path + "'");
    out << render_summary(summary);
}

std::map<std::string, std::string> read_summary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open summary file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

} // namespace mracsim
