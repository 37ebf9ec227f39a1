#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "mracsim/runio.hpp"
#include "mracsim/scenario.hpp"

namespace mracsim {

/// Exit codes shared by all subcommands.
///   0 success, 2 config invalid, 3 barrier breach, 4 numerical failure
///   (non-finite state), 5 matching conditions infeasible (check-matching).
namespace exit_code {
constexpr int ok = 0;
constexpr int config_invalid = 2;
constexpr int barrier_breach = 3;
constexpr int numerical_failure = 4;
constexpr int matching_infeasible = 5;
} // namespace exit_code

struct RunOverrides {
    std::optional<std::string> controller;
    std::optional<double> dt;
    std::optional<double> t_final;
    std::optional<double> u_max;
    std::optional<double> q_scale;
    std::string out_dir = "out";
    std::optional<unsigned long> seed;  // reserved; no randomness in core
};

/// Runs one controller on a scenario; writes CSV, summary and three SVG
/// charts (error norm with the k_b line, input norm with the u_max line,
/// actuated states vs reference).
int cmd_simulate(const std::string& scenario_ref, const RunOverrides& overrides,
                 std::ostream& out, std::ostream& err);

/// Runs classical and constrained controllers on identical plant/ICs/signal
/// (concurrently), emits per-run CSVs/summaries, overlaid SVGs and a
/// comparison table. A classical monitor breach is recorded, not fatal.
int cmd_compare(const std::string& scenario_ref, const RunOverrides& overrides,
                std::ostream& out, std::ostream& err);

/// Prints the matching gains K_x, K_r and residuals; exit 5 when the
/// matching conditions fail at 1e-8.
int cmd_check_matching(const std::string& scenario_ref, std::ostream& out, std::ostream& err);

/// Recomputes the constraint report from a run's CSV and compares it against
/// the written summary; exit 0 on exact agreement, 1 otherwise.
int cmd_recheck(const std::string& csv_path, const std::string& summary_path,
                std::ostream& out, std::ostream& err);

/// simulate + artifact writing shared by cmd_simulate / cmd_compare; returns
/// the summary (artifacts listed inside).
RunSummary run_and_write(const Scenario& scenario, ControllerKind kind,
                         const std::string& out_dir);

} // namespace mracsim
