#pragma once

#include <optional>
#include <string>
#include <vector>

#include "worstload/mesh.hpp"

namespace worstload {

enum class MeshSource { disk, annulus, square_hole, file };

/// Mean boundary data given as arc-length segments [s0, s1) -> value;
/// nodes outside all segments get 0.
struct GbarSegment {
    double s0 = 0.0;
    double s1 = 0.0;
    double value = 0.0;
};

struct RunConfig {
    // [mesh]
    MeshSource source = MeshSource::disk;
    double h = 0.05;
    double outer_radius = 1.0;
    double omega_radius = 0.5;
    double inner_radius = 0.0;   // annulus
    double side = 2.0;           // square_hole
    double hole_radius = 0.3;    // square_hole
    std::vector<InclusionSpec> inclusions;
    std::string mesh_path;            // file
    std::optional<Circle> omega_circle;  // file: retag omega from a circle

    // [material]
    double matrix_modulus = 1.0;
    double inclusion_modulus = 1000.0;

    // [kkl]
    double correlation_length = 1.0;
    int n_cos = -1;  // -1: truncate at mu_n/mu_1 >= 1e-3
    int n_sin = -1;
    std::vector<GbarSegment> gbar;

    // [solver]
    double residual_tol = 1e-10;

    // [output]
    std::string out_dir = "out";
    double memory_budget_mb = 1024.0;
    std::string note;

    int threads = 1;
};

/// Plain-text key = value format with [section] headers and '#' comments.
/// Relative mesh paths resolve against the config file's directory.
RunConfig parse_config(const std::string& path);

/// Builds the mesh the config describes (generator call or file load),
/// validated.
Mesh build_mesh(const RunConfig& config);

}  // namespace worstload
