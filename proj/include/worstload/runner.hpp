#pragma once

#include <optional>
#include <string>

#include "worstload/concentration.hpp"
#include "worstload/config.hpp"
#include "worstload/kkl.hpp"

namespace worstload {

struct Report {
    // mesh statistics
    int nodes = 0;
    int elements = 0;
    int outer_nodes = 0;
    int clamped_loops = 0;
    double half_perimeter = 0.0;

    // worst-case side
    std::optional<double> V;
    Eigen::VectorXd spectrum;  // clamped into [0, 1] for reporting
    int cluster_size = 0;
    bool grounded = false;

    // random-ensemble side
    std::optional<double> pbar;
    double energy_omega = 0.0;
    double energy_omega_star = 0.0;
    double mean_energy_omega = 0.0;
    double mean_energy_omega_star = 0.0;
    int n_cos = 0, n_sin = 0;
    std::vector<ModeEnergy> modes;

    std::string note;
    double seconds = 0.0;  // wall time; excluded from determinism
};

/// Solves the concentration eigenproblem and writes worst_report.{txt,csv},
/// spectrum.csv, the worst trace/traction tables, and VTK fields for the
/// worst-case solution, all into config.out_dir.
Report run_worst_case(const RunConfig& config);

/// Computes the expected concentration of the random ensemble and writes
/// kkl_report.{txt,csv}, modes.csv, and VTK fields for the mean solution.
/// Adds the comparison rows when worst_report.csv already exists in the
/// output directory.
Report run_kkl(const RunConfig& config);

/// Runs both on a shared factorization and writes compare_report.{txt,csv}
/// in addition to the individual outputs.
Report run_compare(const RunConfig& config);

}  // namespace worstload
