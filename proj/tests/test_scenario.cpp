#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mracsim/cli.hpp"
#include "mracsim/runio.hpp"
#include "mracsim/scenario.hpp"
#include "mracsim/svg.hpp"
#include "test_support.hpp"

using namespace mracsim;
using namespace test_support;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("mracsim_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "cannot open " << path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Bare-bones well-formedness check: every opened tag closes in order.
bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = text.find('<', pos)) != std::string::npos) {
        const std::size_t end = text.find('>', pos);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        const bool self_closing = tag.back() == '/';
        if (self_closing) tag.pop_back();
        if (tag[0] == '/') {
            if (stack.empty()) return false;
            const std::string name = tag.substr(1);
            if (stack.back() != name) return false;
            stack.pop_back();
            continue;
        }
        const std::size_t space = tag.find_first_of(" \t\n");
        const std::string name = space == std::string::npos ? tag : tag.substr(0, space);
        if (!self_closing) stack.push_back(name);
    }
    return stack.empty();
}

} // namespace

TEST_CASE("config parser handles the supported grammar") {
    const std::string text = R"(
# comment
name = "demo"            # trailing comment
flag = true
count = 3
rate = 1e-6
bound = inf
[block]
vec = [1.0, 2.0, -3.5]
mat = [
  [1.0, 0.0],   # rows may span lines
  [0.0, 2.0],
]
[block.sub]
word = "a b # c"
)";
    const auto kv = config::parse(text);
    CHECK(kv.at("name").str == "demo");
    CHECK(kv.at("flag").flag == true);
    CHECK(kv.at("count").num == 3.0);
    CHECK(kv.at("rate").num == 1e-6);
    CHECK(std::isinf(kv.at("bound").num));
    CHECK(kv.at("block.vec").items.size() == 3);
    CHECK(kv.at("block.vec").items[2].num == -3.5);
    CHECK(kv.at("block.mat").items.size() == 2);
    CHECK(kv.at("block.mat").items[1].items[1].num == 2.0);
    CHECK(kv.at("block.sub.word").str == "a b # c");

    CHECK_THROWS_AS(config::parse("key"), ConfigError);
    CHECK_THROWS_AS(config::parse("a = [1, 2"), ConfigError);
    CHECK_THROWS_AS(config::parse("a = oops"), ConfigError);
}

TEST_CASE("bundled paper_sec4 parses and matches the shipped file") {
    const char* text = bundled_scenario_text("paper_sec4");
    REQUIRE(text != nullptr);
    CHECK(bundled_scenario_text("nope") == nullptr);

    const std::string file =
        slurp(std::filesystem::path(MRACSIM_SOURCE_DIR) / "scenarios/paper_sec4.toml");
    CHECK(file == text);

    const Scenario sc = load_scenario_text(text);
    CHECK(sc.name == "paper_sec4");
    CHECK(sc.plant.state_dim() == 7);
    CHECK(sc.plant.input_dim() == 2);
    CHECK(sc.plant.A(4, 4) == 20.2);
    CHECK(sc.plant.A(6, 3) == 12.2958);
    CHECK(sc.plant.B(4, 0) == 10.1);
    CHECK(sc.plant.B(5, 1) == -4.25);
    CHECK(sc.ref.A_r(4, 4) == -20.2);
    CHECK(sc.ref.B_r(4, 0) == 20.2);
    CHECK(sc.cspec.u_max == 2.5);
    CHECK(sc.cspec.beta == 2.0);
    CHECK(sc.cspec.alpha1 == 1.5);
    CHECK(sc.cspec.k_b() == 0.5);
    CHECK(sc.classical.Gamma_x(0, 0) == 25.0);
    CHECK(sc.constrained.Gamma_x(0, 0) == 5.0);
    CHECK(sc.constrained.Gamma_d(3, 3) == 1.0);
    CHECK(sc.sim.dt == 1e-3);
    CHECK(sc.sim.t_final == 40.0);
    CHECK(sc.default_controller == ControllerKind::constrained);
}

TEST_CASE("scenario validation reports field names") {
    const char* base = bundled_scenario_text("paper_sec4");
    {
        std::string text(base);
        // alpha1 above beta (skip the mention inside the header comment)
        const auto pos = text.find("alpha1 = 1.5", text.find("[constraints]"));
        text.replace(pos, 12, "alpha1 = 3.0");
        try {
            load_scenario_text(text);
            FAIL("expected ConfigError");
        } catch (const ConfigError& ex) {
            CHECK(std::string(ex.what()).find("beta") != std::string::npos);
        }
    }
    {
        std::string text(base);
        const auto pos = text.find("u_max = 2.5");
        text.replace(pos, 11, "u_max = 0.0");
        CHECK_THROWS_AS(load_scenario_text(text), ConfigError);
    }
}

TEST_CASE("controller initialization overrides parse from config") {
    std::string text(bundled_scenario_text("paper_sec4"));
    text += R"(
[controller.constrained]
kx_hat0 = [
  [0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
  [0.0, 0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
]
k1_0 = [
  [0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0],
  [0.0, 0.0], [0.0, 0.0], [0.0, 0.0],
]
)";
    const Scenario sc = load_scenario_text(text);
    REQUIRE(sc.constrained.Kx_hat0.has_value());
    CHECK((*sc.constrained.Kx_hat0)(0, 0) == 0.1);
    REQUIRE(sc.constrained.K1_0.has_value());

    const SimSetup setup = make_setup(sc);
    CHECK(setup.constrained0.Kx_hat(1, 1) == 0.2);
    CHECK(setup.constrained0.K1.max_abs() == 0.0);
    // Kd(0) = B - K1(0)
    CHECK((setup.constrained0.Kd - sc.plant.B).max_abs() == 0.0);
}

TEST_CASE("fmt17 round-trips doubles exactly") {
    std::mt19937 rng(55u);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    for (int trial = 0; trial < 1000; ++trial) {
        const double x = dist(rng);
        CHECK(std::stod(fmt17(x)) == x);
    }
    CHECK(std::stod(fmt17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV header and round trip") {
    CHECK(trajectory_csv_header(2, 1) == "t,x1,x2,xr1,xr2,e_norm,u1,u_norm,v1,V,Vdot,barrier_ratio,sat1");

    Scenario sc = paper_scenario();
    sc.sim.t_final = 0.2;
    const SimSetup setup = make_setup(sc);
    const SimResult result = simulate(setup, ControllerKind::classical, sc.sim);
    REQUIRE(result.completed());

    const auto dir = temp_dir("csv");
    const std::string path = (dir / "run.csv").string();
    write_trajectory_csv(result.log, 7, 2, path);

    const CsvTrajectory csv = read_trajectory_csv(path);
    CHECK(csv.n == 7);
    CHECK(csv.m == 2);
    REQUIRE(csv.t.size() == result.log.records.size());
    for (std::size_t i = 0; i < csv.t.size(); ++i) {
        CHECK(csv.t[i] == result.log.records[i].t);
        CHECK(csv.e_norm[i] == result.log.records[i].e.norm());
        for (std::size_t j = 0; j < 7; ++j) CHECK(csv.x[i][j] == result.log.records[i].x[j]);
    }
}

TEST_CASE("cmd_simulate: artifacts, degenerate horizon, bad flags") {
    const auto dir = temp_dir("simulate");
    std::ostringstream out, err;

    RunOverrides opt;
    opt.out_dir = (dir / "a").string();
    opt.controller = "constrained";
    opt.t_final = 0.001;
    const int code = cmd_simulate("paper_sec4", opt, out, err);
    CHECK(code == exit_code::ok);
    CHECK(std::filesystem::exists(dir / "a/paper_sec4_constrained.csv"));
    CHECK(std::filesystem::exists(dir / "a/paper_sec4_constrained_error.svg"));
    CHECK(std::filesystem::exists(dir / "a/paper_sec4_constrained_input.svg"));
    CHECK(std::filesystem::exists(dir / "a/paper_sec4_constrained_states.svg"));
    const CsvTrajectory csv = read_trajectory_csv((dir / "a/paper_sec4_constrained.csv").string());
    CHECK(csv.t.size() == 2);  // one record beyond t = 0

    // invalid dt -> config invalid
    RunOverrides bad;
    bad.out_dir = (dir / "b").string();
    bad.dt = -1.0;
    std::ostringstream err2;
    CHECK(cmd_simulate("paper_sec4", bad, out, err2) == exit_code::config_invalid);
    CHECK(err2.str().find("sim.dt") != std::string::npos);

    // unknown scenario -> config invalid
    CHECK(cmd_simulate("missing_scenario", RunOverrides{}, out, err) == exit_code::config_invalid);

    // full defaults run terminates at the barrier guard -> exit 3
    RunOverrides full;
    full.out_dir = (dir / "c").string();
    std::ostringstream out3;
    CHECK(cmd_simulate("paper_sec4", full, out3, err) == exit_code::barrier_breach);
    CHECK(out3.str().find("status = barrier_breach") != std::string::npos);
}

TEST_CASE("cmd_check_matching exit codes") {
    std::ostringstream out, err;
    CHECK(cmd_check_matching("paper_sec4", out, err) == exit_code::ok);
    CHECK(out.str().find("-4.7529411764705882") != std::string::npos);

    // construct an infeasible pair: B_r outside the column space of B
    std::string text(bundled_scenario_text("paper_sec4"));
    const auto pos = text.find("B_r = [\n  [0.0, 0.0],");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 22, "B_r = [\n  [1.0, 0.0],");
    const auto dir = temp_dir("matching");
    const std::string path = (dir / "infeasible.toml").string();
    {
        std::ofstream f(path);
        f << text;
    }
    std::ostringstream out2, err2;
    CHECK(cmd_check_matching(path, out2, err2) == exit_code::matching_infeasible);
    CHECK(err2.str().find("infeasible") != std::string::npos);
}

TEST_CASE("cmd_compare emits deterministic byte-identical CSVs") {
    const auto dir = temp_dir("compare");
    std::ostringstream out, err;

    RunOverrides opt1;
    opt1.out_dir = (dir / "one").string();
    opt1.t_final = 1.0;
    const int code1 = cmd_compare("paper_sec4", opt1, out, err);

    RunOverrides opt2;
    opt2.out_dir = (dir / "two").string();
    opt2.t_final = 1.0;
    const int code2 = cmd_compare("paper_sec4", opt2, out, err);

    CHECK(code1 == code2);
    for (const char* name : {"paper_sec4_classical.csv", "paper_sec4_constrained.csv"}) {
        const std::string a = slurp(dir / "one" / name);
        const std::string b = slurp(dir / "two" / name);
        CHECK(a == b);
        CHECK(!a.empty());
    }
    CHECK(std::filesystem::exists(dir / "one/paper_sec4_compare_error.svg"));
    CHECK(std::filesystem::exists(dir / "one/paper_sec4_compare_input.svg"));
    CHECK(out.str().find("controller,max_e_norm") != std::string::npos);
}

TEST_CASE("cmd_recheck agrees with the summary for both controllers") {
    const auto dir = temp_dir("recheck");
    std::ostringstream out, err;
    RunOverrides opt;
    opt.out_dir = dir.string();
    opt.t_final = 2.0;
    cmd_compare("paper_sec4", opt, out, err);

    for (const char* kind : {"classical", "constrained"}) {
        std::ostringstream rout, rerr;
        const std::string csv = (dir / ("paper_sec4_" + std::string(kind) + ".csv")).string();
        const std::string summary =
            (dir / ("paper_sec4_" + std::string(kind) + "_summary.txt")).string();
        CHECK(cmd_recheck(csv, summary, rout, rerr) == 0);
        CHECK(rout.str().find("agree") != std::string::npos);
    }
}

TEST_CASE("SVG output is well-formed with labels and legend") {
    LineChart chart("demo <title>", "t [s]", "||e||");
    chart.add_series("classical & co", "#d62728", {0.0, 1.0, 2.0}, {0.0, 0.5, 0.25});
    chart.add_series("constrained", "#1f77b4", {0.0, 1.0, 2.0}, {0.1, 0.2, 0.3}, true);
    chart.add_hline(0.5, "k_b", "#555555");
    const std::string svg = chart.render();

    CHECK(xml_well_formed(svg));
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("t [s]") != std::string::npos);
    CHECK(svg.find("||e||") != std::string::npos);
    CHECK(svg.find("classical &amp; co") != std::string::npos);
    CHECK(svg.find("constrained") != std::string::npos);
    CHECK(svg.find("k_b") != std::string::npos);
    CHECK(svg.find("demo &lt;title&gt;") != std::string::npos);

    // the run artifacts are well-formed too
    const auto dir = temp_dir("svg");
    std::ostringstream out, err;
    RunOverrides opt;
    opt.out_dir = dir.string();
    opt.controller = "classical";
    opt.t_final = 1.0;
    REQUIRE(cmd_simulate("paper_sec4", opt, out, err) == exit_code::ok);
    for (const char* name :
         {"paper_sec4_classical_error.svg", "paper_sec4_classical_input.svg",
          "paper_sec4_classical_states.svg"}) {
        CHECK(xml_well_formed(slurp(dir / name)));
    }
}

TEST_CASE("summary verdict matches report state") {
    const auto dir = temp_dir("summary");
    std::ostringstream out, err;
    RunOverrides opt;
    opt.out_dir = dir.string();
    opt.controller = "classical";
    opt.t_final = 0.5;
    REQUIRE(cmd_simulate("paper_sec4", opt, out, err) == exit_code::ok);
    const auto kv = read_summary((dir / "paper_sec4_classical_summary.txt").string());
    CHECK(kv.at("status") == "completed");
    CHECK(kv.at("controller") == "classical");
    CHECK(kv.at("q_scale") == "1");
    // verdict "pass" iff the run completed with zero breach events
    const long breaches = std::stol(kv.at("breach_count_state")) +
                          std::stol(kv.at("breach_count_input")) +
                          std::stol(kv.at("breach_count_barrier")) +
                          std::stol(kv.at("breach_count_assumption1"));
    CHECK(kv.at("verdict") == (breaches == 0 ? "pass" : "fail"));
}
