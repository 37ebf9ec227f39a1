#pragma once

#include <map>
#include <string>
#include <vector>

#include "mracsim/simulation.hpp"

namespace mracsim {

/// Shortest representation that round-trips an IEEE double exactly
/// (printf %.17g); used for every float written to CSV and summary files.
std::string fmt17(double x);

/// CSV schema, one file per run:
///   t,x1..xn,xr1..xrn,e_norm,u1..um,u_norm,v1..vm,V,Vdot,barrier_ratio,sat1..satm
std::string trajectory_csv_header(std::size_t n, std::size_t m);
std::string trajectory_csv(const TrajectoryLog& log, std::size_t n, std::size_t m);
void write_trajectory_csv(const TrajectoryLog& log, std::size_t n, std::size_t m,
                          const std::string& path);

/// Parsed-back view of a trajectory CSV.
struct CsvTrajectory {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> t;
    std::vector<Vector> x;
    std::vector<Vector> x_r;
    std::vector<double> e_norm;
    std::vector<double> u_norm;
    std::vector<double> barrier_ratio;
};

CsvTrajectory read_trajectory_csv(const std::string& path);

/// Summary of one run as ordered key/value text.
struct RunSummary {
    std::string scenario;
    ControllerKind controller = ControllerKind::constrained;
    SimConfig sim;
    double u_max = 0.0;
    double beta = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double k_b = 0.0;
    double q_scale = 1.0;
    double kb_prime = 0.0;
    double lambda_min_p = 0.0;
    RunStatus status = RunStatus::completed;
    double t_end = 0.0;
    std::string detail;
    ConstraintReport report;
    std::vector<std::string> artifacts;

    /// pass iff the run completed with zero breach events.
    bool pass() const { return status == RunStatus::completed && report.breach_events.empty(); }
};

std::string render_summary(const RunSummary& summary);
void write_summary(const RunSummary& summary, const std::string& path);

/// Flat key -> value view of a summary file (values kept as written).
std::map<std::string, std::string> read_summary(const std::string& path);

} // namespace mracsim
