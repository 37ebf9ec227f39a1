#include "mracsim/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "mracsim/svg.hpp"

namespace mracsim {

namespace {

Scenario load_with_overrides(const std::string& scenario_ref, const RunOverrides& overrides) {
    Scenario sc = resolve_scenario(scenario_ref);
    if (overrides.dt) sc.sim.dt = *overrides.dt;
    if (overrides.t_final) sc.sim.t_final = *overrides.t_final;
    if (overrides.u_max) sc.cspec.u_max = *overrides.u_max;
    if (overrides.q_scale) sc.q_scale = *overrides.q_scale;
    if (overrides.controller) {
        if (*overrides.controller == "classical")
            sc.default_controller = ControllerKind::classical;
        else if (*overrides.controller == "constrained")
            sc.default_controller = ControllerKind::constrained;
        else
            throw ConfigError("--controller: must be \"classical\" or \"constrained\"");
    }
    // re-validate after overrides
    sc.cspec.validate();
    if (!(sc.q_scale > 0.0)) throw ConfigError("--q-scale: must be positive");
    sc.sim.validate(sc.plant.state_dim(), sc.cspec.k_b());
    if (sc.default_controller == ControllerKind::classical && !sc.has_classical)
        throw ConfigError("controller.classical: gains missing from scenario");
    if (sc.default_controller == ControllerKind::constrained && !sc.has_constrained)
        throw ConfigError("controller.constrained: gains missing from scenario");
    return sc;
}

struct ChartData {
    std::vector<double> t, e_norm, u_norm;
    std::vector<std::vector<double>> x_sel, xr_sel;
    std::vector<std::size_t> sel;
};

ChartData chart_data(const SimResult& result, const SimSetup& setup) {
    ChartData d;
    const std::size_t n = setup.plant.state_dim();
    // actuated states (nonzero B rows) are the channels worth charting
    for (std::size_t i = 0; i < n && d.sel.size() < 3; ++i) {
        bool actuated = false;
        for (std::size_t j = 0; j < setup.plant.input_dim(); ++j)
            if (setup.plant.B(i, j) != 0.0) actuated = true;
        if (actuated) d.sel.push_back(i);
    }
    if (d.sel.empty()) d.sel.push_back(0);
    d.x_sel.resize(d.sel.size());
    d.xr_sel.resize(d.sel.size());
    for (const TrajectoryRecord& rec : result.log.records) {
        d.t.push_back(rec.t);
        d.e_norm.push_back(rec.e.norm());
        d.u_norm.push_back(rec.u.norm());
        for (std::size_t k = 0; k < d.sel.size(); ++k) {
            d.x_sel[k].push_back(rec.x[d.sel[k]]);
            d.xr_sel[k].push_back(rec.x_r[d.sel[k]]);
        }
    }
    return d;
}

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

RunSummary make_run_summary(const Scenario& sc, ControllerKind kind, const SimSetup& setup,
                            const SimResult& result) {
    RunSummary s;
    s.scenario = sc.name;
    s.controller = kind;
    s.sim = sc.sim;
    s.u_max = sc.cspec.u_max;
    s.beta = sc.cspec.beta;
    s.alpha1 = sc.cspec.alpha1;
    s.alpha2 = sc.cspec.alpha2;
    s.k_b = sc.cspec.k_b();
    s.q_scale = sc.Q_override ? std::nan("") : sc.q_scale;
    s.kb_prime = setup.cert.kb_prime;
    s.lambda_min_p = setup.cert.lambda_min;
    s.status = result.status;
    s.t_end = result.t_end;
    s.detail = result.detail;
    s.report = result.report;
    return s;
}

} // namespace

RunSummary run_and_write(const Scenario& scenario, ControllerKind kind,
                         const std::string& out_dir) {
    const SimSetup setup = make_setup(scenario);
    const SimResult result = simulate(setup, kind, scenario.sim);

    std::filesystem::create_directories(out_dir);
    const std::string stem =
        out_dir + "/" + scenario.name + "_" + controller_kind_name(kind);

    RunSummary summary = make_run_summary(scenario, kind, setup, result);

    const std::string csv_path = stem + ".csv";
    write_trajectory_csv(result.log, setup.plant.state_dim(), setup.plant.input_dim(), csv_path);
    summary.artifacts.push_back(csv_path);

    const ChartData d = chart_data(result, setup);
    const std::string kind_name = controller_kind_name(kind);

    LineChart err_chart("Tracking error, " + scenario.name, "t [s]", "||e(t)||");
    err_chart.add_series(kind_name, kSeriesColors[0], d.t, d.e_norm);
    err_chart.add_hline(scenario.cspec.k_b(), "k_b", "#d62728");
    err_chart.write(stem + "_error.svg");
    summary.artifacts.push_back(stem + "_error.svg");

    LineChart input_chart("Control effort, " + scenario.name, "t [s]", "||u(t)||");
    input_chart.add_series(kind_name, kSeriesColors[0], d.t, d.u_norm);
    if (std::isfinite(scenario.cspec.u_max))
        input_chart.add_hline(scenario.cspec.u_max, "u_max", "#d62728");
    input_chart.write(stem + "_input.svg");
    summary.artifacts.push_back(stem + "_input.svg");

    LineChart states_chart("State tracking, " + scenario.name + " (" + kind_name + ")", "t [s]",
                           "x_i, xr_i");
    for (std::size_t k = 0; k < d.sel.size(); ++k) {
        const std::string idx = std::to_string(d.sel[k] + 1);
        states_chart.add_series("x" + idx, kSeriesColors[k % 6], d.t, d.x_sel[k]);
        states_chart.add_series("xr" + idx, kSeriesColors[k % 6], d.t, d.xr_sel[k], true);
    }
    states_chart.write(stem + "_states.svg");
    summary.artifacts.push_back(stem + "_states.svg");

    write_summary(summary, stem + "_summary.txt");
    summary.artifacts.push_back(stem + "_summary.txt");
    return summary;
}

namespace {

int status_exit_code(const RunSummary& s) {
    switch (s.status) {
        case RunStatus::completed: return exit_code::ok;
        case RunStatus::barrier_breach: return exit_code::barrier_breach;
        case RunStatus::numerical_failure: return exit_code::numerical_failure;
    }
    return exit_code::ok;
}

int map_exception(const std::exception& ex, std::ostream& err) {
    err << "error: " << ex.what() << "\n";
    return exit_code::config_invalid;
}

} // namespace

int cmd_simulate(const std::string& scenario_ref, const RunOverrides& overrides,
                 std::ostream& out, std::ostream& err) {
    Scenario sc;
    try {
        sc = load_with_overrides(scenario_ref, overrides);
    } catch (const ConfigError& ex) {
        return map_exception(ex, err);
    }
    try {
        const RunSummary summary = run_and_write(sc, sc.default_controller, overrides.out_dir);
        out << render_summary(summary);
        return status_exit_code(summary);
    } catch (const MatchingInfeasible& ex) {
        return map_exception(ex, err);
    } catch (const ConfigError& ex) {
        return map_exception(ex, err);
    } catch (const SingularSystem& ex) {
        return map_exception(ex, err);
    }
}

int cmd_compare(const std::string& scenario_ref, const RunOverrides& overrides,
                std::ostream& out, std::ostream& err) {
    Scenario sc;
    try {
        sc = load_with_overrides(scenario_ref, overrides);
        if (!sc.has_classical || !sc.has_constrained)
            throw ConfigError("compare: scenario must provide both controller.classical and "
                              "controller.constrained gain sets");
    } catch (const ConfigError& ex) {
        return map_exception(ex, err);
    }

    try {
        // Independent runs; logs merged only after both complete.
        auto classical_future = std::async(std::launch::async, [&] {
            return run_and_write(sc, ControllerKind::classical, overrides.out_dir);
        });
        const RunSummary constrained = run_and_write(sc, ControllerKind::constrained, overrides.out_dir);
        const RunSummary classical = classical_future.get();

        const std::string stem = overrides.out_dir + "/" + sc.name;
        const CsvTrajectory ccsv = read_trajectory_csv(stem + "_classical.csv");
        const CsvTrajectory ncsv = read_trajectory_csv(stem + "_constrained.csv");

        LineChart err_chart("Tracking error, " + sc.name, "t [s]", "||e(t)||");
        err_chart.add_series("classical", kSeriesColors[1], ccsv.t, ccsv.e_norm);
        err_chart.add_series("constrained", kSeriesColors[0], ncsv.t, ncsv.e_norm);
        err_chart.add_hline(sc.cspec.k_b(), "k_b", "#555555");
        err_chart.write(stem + "_compare_error.svg");

        LineChart input_chart("Control effort, " + sc.name, "t [s]", "||u(t)||");
        input_chart.add_series("classical", kSeriesColors[1], ccsv.t, ccsv.u_norm);
        input_chart.add_series("constrained", kSeriesColors[0], ncsv.t, ncsv.u_norm);
        if (std::isfinite(sc.cspec.u_max)) input_chart.add_hline(sc.cspec.u_max, "u_max", "#555555");
        input_chart.write(stem + "_compare_input.svg");

        std::ostringstream table;
        table << "controller,max_e_norm,max_u_norm,e_final_norm,breach_count,status\n";
        for (const RunSummary* s : {&classical, &constrained}) {
            table << controller_kind_name(s->controller) << "," << fmt17(s->report.max_e_norm)
                  << "," << fmt17(s->report.max_u_norm) << "," << fmt17(s->report.e_final_norm)
                  << "," << s->report.breach_events.size() << "," << run_status_name(s->status)
                  << "\n";
        }
        {
            std::ofstream tf(stem + "_compare.csv", std::ios::binary);
            tf << table.str();
        }

        out << table.str();
        if (!std::isfinite(sc.cspec.u_max))
            out << "note: u_max = inf, saturation deficit delta_u identically zero\n";
        out << "constrained: " << run_status_name(constrained.status)
            << (constrained.detail.empty() ? "" : " (" + constrained.detail + ")") << "\n";
        out << "classical: " << run_status_name(classical.status) << ", "
            << classical.report.breach_events.size() << " monitor breach event(s) recorded\n";

        // classical monitor breaches are recorded, not fatal
        if (classical.status == RunStatus::numerical_failure ||
            constrained.status == RunStatus::numerical_failure)
            return exit_code::numerical_failure;
        return status_exit_code(constrained);
    } catch (const MatchingInfeasible& ex) {
        return map_exception(ex, err);
    } catch (const ConfigError& ex) {
        return map_exception(ex, err);
    } catch (const SingularSystem& ex) {
        return map_exception(ex, err);
    }
}

int cmd_check_matching(const std::string& scenario_ref, std::ostream& out, std::ostream& err) {
    Scenario sc;
    try {
        sc = resolve_scenario(scenario_ref);
    } catch (const ConfigError& ex) {
        return map_exception(ex, err);
    }
    try {
        const TrueGains tg = solve_matching_gains(sc.plant, sc.ref);
        auto print_matrix = [&](const char* name, const Matrix& m) {
            out << name << " =\n";
            for (std::size_t i = 0; i < m.rows(); ++i) {
                out << "  [";
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    if (j) out << ", ";
                    out << fmt17(m(i, j));
                }
                out << "]\n";
            }
        };
        print_matrix("K_x", tg.K_x);
        print_matrix("K_r", tg.K_r);
        const double res_x = (sc.plant.A + sc.plant.B * tg.K_x - sc.ref.A_r).frobenius_norm();
        const double res_r = (sc.plant.B * tg.K_r - sc.ref.B_r).frobenius_norm();
        out << "residual_Kx = " << fmt17(res_x) << "\n";
        out << "residual_Kr = " << fmt17(res_r) << "\n";
        out << "matching = feasible\n";
        return exit_code::ok;
    } catch (const MatchingInfeasible& ex) {
        err << "error: " << ex.what() << "\n";
        return exit_code::matching_infeasible;
    }
}

int cmd_recheck(const std::string& csv_path, const std::string& summary_path,
                std::ostream& out, std::ostream& err) {
    try {
        const CsvTrajectory csv = read_trajectory_csv(csv_path);
        const auto summary = read_summary(summary_path);

        auto want = [&](const std::string& key) {
            auto it = summary.find(key);
            if (it == summary.end())
                throw ConfigError(summary_path + ": missing key '" + key + "'");
            return it->second;
        };
        const double beta = std::strtod(want("beta").c_str(), nullptr);
        const double alpha1 = std::strtod(want("alpha1").c_str(), nullptr);
        const double u_max = std::strtod(want("u_max").c_str(), nullptr);

        ConstraintReport recomputed;
        constexpr double slack = 1.0 + 1e-12;
        for (std::size_t i = 0; i < csv.t.size(); ++i) {
            const double xn = csv.x[i].norm();
            const double xrn = csv.x_r[i].norm();
            recomputed.max_e_norm = std::max(recomputed.max_e_norm, csv.e_norm[i]);
            recomputed.max_x_norm = std::max(recomputed.max_x_norm, xn);
            recomputed.max_u_norm = std::max(recomputed.max_u_norm, csv.u_norm[i]);
            recomputed.max_barrier_ratio = std::max(recomputed.max_barrier_ratio, csv.barrier_ratio[i]);
            recomputed.xr_norm_max = std::max(recomputed.xr_norm_max, xrn);
            recomputed.e_final_norm = csv.e_norm[i];
            if (xn > beta * slack) recomputed.breach_events.push_back({csv.t[i], BreachKind::state});
            if (csv.u_norm[i] > u_max * slack)
                recomputed.breach_events.push_back({csv.t[i], BreachKind::input});
            if (csv.barrier_ratio[i] >= 1.0)
                recomputed.breach_events.push_back({csv.t[i], BreachKind::barrier});
            if (xrn > alpha1 * slack)
                recomputed.breach_events.push_back({csv.t[i], BreachKind::assumption1});
        }

        bool ok = true;
        auto check = [&](const std::string& key, const std::string& got) {
            const std::string want_val = want(key);
            const bool match = want_val == got;
            if (!match) {
                ok = false;
                out << "disagree " << key << ": summary=" << want_val << " recomputed=" << got << "\n";
            }
        };
        check("max_e_norm", fmt17(recomputed.max_e_norm));
        check("max_x_norm", fmt17(recomputed.max_x_norm));
        check("max_u_norm", fmt17(recomputed.max_u_norm));
        check("max_barrier_ratio", fmt17(recomputed.max_barrier_ratio));
        check("e_final_norm", fmt17(recomputed.e_final_norm));
        check("xr_norm_max", fmt17(recomputed.xr_norm_max));
        check("breach_count_state", std::to_string(recomputed.count(BreachKind::state)));
        check("breach_count_input", std::to_string(recomputed.count(BreachKind::input)));
        check("breach_count_assumption1",
              std::to_string(recomputed.count(BreachKind::assumption1)));

        // The simulator additionally records guard breaches that terminate a
        // run between log points; the CSV lower-bounds those.
        const auto barrier_logged = recomputed.count(BreachKind::barrier);
        const auto barrier_summary =
            static_cast<std::size_t>(std::strtoul(want("breach_count_barrier").c_str(), nullptr, 10));
        const bool run_completed = want("status") == "completed";
        if (run_completed ? barrier_summary != barrier_logged : barrier_summary < barrier_logged) {
            ok = false;
            out << "disagree breach_count_barrier: summary=" << barrier_summary
                << " recomputed=" << barrier_logged << "\n";
        }

        out << (ok ? "recheck: agree\n" : "recheck: DISAGREE\n");
        return ok ? 0 : 1;
    } catch (const ConfigError& ex) {
        return map_exception(ex, err);
    }
}

} // namespace mracsim
