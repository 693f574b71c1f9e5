#include "worstload/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace worstload {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, int line) {
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (...) {
        used = 0;
    }
    if (used != s.size())
        fail(errc::config, "config line " + std::to_string(line) +
                               ": expected a number, got '" + s + "'");
    return v;
}

int to_int(const std::string& s, int line) {
    size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (...) {
        used = 0;
    }
    if (used != s.size())
        fail(errc::config, "config line " + std::to_string(line) +
                               ": expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::config, "cannot open config file: " + path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    RunConfig cfg;
    std::string section, line;
    int lineno = 0;
    bool source_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(errc::config, "config line " + std::to_string(lineno) +
                                       ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "mesh" && section != "material" && section != "kkl" &&
                section != "solver" && section != "output")
                fail(errc::config, "config line " + std::to_string(lineno) +
                                       ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::config, "config line " + std::to_string(lineno) +
                                   ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (section == "mesh") {
            if (key == "source") {
                source_seen = true;
                if (val == "disk") cfg.source = MeshSource::disk;
                else if (val == "annulus") cfg.source = MeshSource::annulus;
                else if (val == "square_hole") cfg.source = MeshSource::square_hole;
                else if (val == "file") cfg.source = MeshSource::file;
                else
                    fail(errc::config, "config line " + std::to_string(lineno) +
                                           ": unknown mesh source '" + val + "'");
            } else if (key == "h") cfg.h = to_double(val, lineno);
            else if (key == "outer_radius") cfg.outer_radius = to_double(val, lineno);
            else if (key == "omega_radius") cfg.omega_radius = to_double(val, lineno);
            else if (key == "inner_radius") cfg.inner_radius = to_double(val, lineno);
            else if (key == "side") cfg.side = to_double(val, lineno);
            else if (key == "hole_radius") cfg.hole_radius = to_double(val, lineno);
            else if (key == "path") {
                cfg.mesh_path = (base / val).string();
            } else if (key == "inclusions") {
                for (const std::string& item : split(val, ';')) {
                    if (item.empty()) continue;
                    std::istringstream is(item);
                    InclusionSpec inc;
                    if (!(is >> inc.center.x >> inc.center.y >> inc.radius))
                        fail(errc::config, "config line " + std::to_string(lineno) +
                                               ": inclusion needs 'x y r'");
                    cfg.inclusions.push_back(inc);
                }
            } else if (key == "omega_circle") {
                std::istringstream is(val);
                Circle c;
                if (!(is >> c.center.x >> c.center.y >> c.radius))
                    fail(errc::config, "config line " + std::to_string(lineno) +
                                           ": omega_circle needs 'cx cy r'");
                cfg.omega_circle = c;
            } else
                fail(errc::config, "config line " + std::to_string(lineno) +
                                       ": unknown [mesh] key '" + key + "'");
        } else if (section == "material") {
            if (key == "matrix") cfg.matrix_modulus = to_double(val, lineno);
            else if (key == "inclusion") cfg.inclusion_modulus = to_double(val, lineno);
            else
                fail(errc::config, "config line " + std::to_string(lineno) +
                                       ": unknown [material] key '" + key + "'");
        } else if (section == "kkl") {
            if (key == "b") cfg.correlation_length = to_double(val, lineno);
            else if (key == "n_cos") cfg.n_cos = to_int(val, lineno);
            else if (key == "n_sin") cfg.n_sin = to_int(val, lineno);
            else if (key == "gbar") {
                for (const std::string& item : split(val, ';')) {
                    if (item.empty()) continue;
                    const auto parts = split(item, ':');
                    if (parts.size() != 3)
                        fail(errc::config, "config line " + std::to_string(lineno) +
                                               ": gbar segment needs 's0:s1:value'");
                    cfg.gbar.push_back({to_double(parts[0], lineno),
                                        to_double(parts[1], lineno),
                                        to_double(parts[2], lineno)});
                }
            } else
                fail(errc::config, "config line " + std::to_string(lineno) +
                                       ": unknown [kkl] key '" + key + "'");
        } else if (section == "solver") {
            if (key == "residual_tol") cfg.residual_tol = to_double(val, lineno);
            else
                fail(errc::config, "config line " + std::to_string(lineno) +
                                       ": unknown [solver] key '" + key + "'");
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val;
            else if (key == "memory_budget_mb") cfg.memory_budget_mb = to_double(val, lineno);
            else if (key == "note") cfg.note = val;
            else
                fail(errc::config, "config line " + std::to_string(lineno) +
                                       ": unknown [output] key '" + key + "'");
        } else {
            fail(errc::config, "config line " + std::to_string(lineno) +
                                   ": key outside of any section");
        }
    }

    if (!source_seen) fail(errc::config, "config is missing [mesh] source");
    if (!(cfg.matrix_modulus > 0.0) || !(cfg.inclusion_modulus > 0.0))
        fail(errc::config, "moduli must be positive");
    if (!(cfg.residual_tol > 0.0)) fail(errc::config, "residual_tol must be positive");
    if (!(cfg.h > 0.0)) fail(errc::config, "h must be positive");
    if (cfg.source == MeshSource::file && cfg.mesh_path.empty())
        fail(errc::config, "mesh source 'file' requires a path");
    if (!(cfg.correlation_length > 0.0))
        fail(errc::config, "correlation length b must be positive");
    return cfg;
}

Mesh build_mesh(const RunConfig& config) {
    Mesh mesh;
    switch (config.source) {
        case MeshSource::disk:
            mesh = generate_disk_mesh(config.outer_radius, config.omega_radius, config.h);
            break;
        case MeshSource::annulus:
            mesh = generate_annulus_mesh(config.outer_radius, config.inner_radius,
                                         config.omega_radius, config.h);
            break;
        case MeshSource::square_hole:
            mesh = generate_square_hole_mesh(config.side, config.hole_radius,
                                             config.omega_radius, config.inclusions,
                                             config.h);
            break;
        case MeshSource::file:
            mesh = load_mesh(config.mesh_path);
            if (config.omega_circle)
                retag_omega_circle(mesh, config.omega_circle->center,
                                   config.omega_circle->radius);
            break;
    }
    require_valid(mesh);
    return mesh;
}

}  // namespace worstload
