#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mracsim/cli.hpp"

namespace {

void add_overrides(CLI::App* cmd, mracsim::RunOverrides& opt) {
    cmd->add_option("--controller", opt.controller, "classical | constrained");
    cmd->add_option("--dt", opt.dt, "integration step [s]");
    cmd->add_option("--t-final", opt.t_final, "horizon [s]");
    cmd->add_option("--u-max", opt.u_max, "input norm bound (inf allowed)");
    cmd->add_option("--q-scale", opt.q_scale, "scales Q = q * I_n");
    cmd->add_option("--out-dir", opt.out_dir, "artifact directory (default: out)");
    cmd->add_option("--seed", opt.seed, "reserved; no randomness in core");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained model reference adaptive control simulator"};
    app.require_subcommand(1);

    std::string scenario;
    mracsim::RunOverrides sim_opt;
    auto* sim_cmd = app.add_subcommand("simulate", "run one controller on a scenario");
    sim_cmd->add_option("scenario", scenario, "scenario name or config path")->required();
    add_overrides(sim_cmd, sim_opt);

    std::string cmp_scenario;
    mracsim::RunOverrides cmp_opt;
    auto* cmp_cmd = app.add_subcommand("compare", "run classical vs constrained side by side");
    cmp_cmd->add_option("scenario", cmp_scenario, "scenario name or config path")->required();
    add_overrides(cmp_cmd, cmp_opt);

    std::string match_scenario;
    auto* match_cmd = app.add_subcommand("check-matching", "verify the matching conditions");
    match_cmd->add_option("scenario", match_scenario, "scenario name or config path")->required();

    std::string recheck_csv, recheck_summary;
    auto* recheck_cmd =
        app.add_subcommand("recheck", "recompute a constraint report from a run CSV");
    recheck_cmd->add_option("csv", recheck_csv, "trajectory CSV path")->required();
    recheck_cmd->add_option("summary", recheck_summary, "summary file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mracsim::exit_code::config_invalid;
    }

    if (sim_cmd->parsed())
        return mracsim::cmd_simulate(scenario, sim_opt, std::cout, std::cerr);
    if (cmp_cmd->parsed())
        return mracsim::cmd_compare(cmp_scenario, cmp_opt, std::cout, std::cerr);
    if (match_cmd->parsed())
        return mracsim::cmd_check_matching(match_scenario, std::cout, std::cerr);
    if (recheck_cmd->parsed())
        return mracsim::cmd_recheck(recheck_csv, recheck_summary, std::cout, std::cerr);
    return mracsim::exit_code::config_invalid;
}
