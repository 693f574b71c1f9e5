// Generates the mesh files shipped with the geometry presets. The inclusion
// layouts are approximate; concentration values depend on them.
#include <filesystem>
#include <iostream>

#include "worstload/mesh.hpp"

using namespace worstload;

namespace {

void emit(const Mesh& mesh, const std::string& path) {
    require_valid(mesh);
    save_mesh(mesh, path);
    const auto param = boundary_parametrization(mesh);
    std::cout << path << ": " << mesh.nodes.size() << " nodes, "
              << mesh.element_count() << " elements, a = " << param.half_length
              << ", inner loops = "
              << boundary_loops(mesh, BoundaryTag::inner_clamped).size() << "\n";
}

Mesh make_geo2() {
    // rectangle 2 x 6, hole near the top end, omega annulus around it
    PanelSpec spec;
    spec.rects.push_back({-1.0, -3.0, 1.0, 3.0});
    spec.holes.push_back({{0.0, 1.8}, 0.5, 0.85, true});
    const double r = 0.1;
    for (Vec2 c : {Vec2{-0.5, -2.4}, {0.5, -2.2}, {0.0, -1.6}, {-0.55, -0.9},
                   {0.55, -0.75}, {0.0, -0.1}, {-0.6, 0.5}, {0.6, 0.45}})
        spec.inclusions.push_back({c, r});
    return generate_panel_mesh(spec, 0.05);
}

Mesh make_geo3() {
    // cross: central square side 6, arms length 7 and width 6, four holes,
    // omega around the top one
    PanelSpec spec;
    spec.rects.push_back({-10.0, -3.0, 10.0, 3.0});
    spec.rects.push_back({-3.0, -10.0, 3.0, 10.0});
    spec.holes.push_back({{0.0, 7.0}, 1.5, 2.5, true});
    spec.holes.push_back({{0.0, -7.0}, 1.5, 2.5, false});
    spec.holes.push_back({{7.0, 0.0}, 1.5, 2.5, false});
    spec.holes.push_back({{-7.0, 0.0}, 1.5, 2.5, false});
    const double r = 0.45;
    for (Vec2 c : {Vec2{0.0, 0.0}, {2.0, 2.0}, {-2.0, 2.0}, {2.0, -2.0}, {-2.0, -2.0},
                   {3.0, 0.0}, {-3.0, 0.0}, {0.0, -3.0}})
        spec.inclusions.push_back({c, r});
    return generate_panel_mesh(spec, 0.2);
}

Mesh make_geo4() {
    // L bracket: legs of width 2, long edges 6, short edges 4, hole in the
    // top leg
    PanelSpec spec;
    spec.rects.push_back({0.0, 0.0, 2.0, 6.0});
    spec.rects.push_back({0.0, 0.0, 6.0, 2.0});
    spec.holes.push_back({{1.0, 5.0}, 0.35, 0.85, true});
    const double r = 0.1;
    for (Vec2 c : {Vec2{1.0, 3.5}, {0.6, 2.6}, {1.4, 2.2}, {1.0, 1.2}, {2.5, 1.0},
                   {3.4, 0.6}, {4.3, 1.3}, {5.2, 0.9}})
        spec.inclusions.push_back({c, r});
    return generate_panel_mesh(spec, 0.05);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "presets";
    std::filesystem::create_directories(dir);
    try {
        emit(make_geo2(), dir + "/geo2.mesh");
        emit(make_geo3(), dir + "/geo3.mesh");
        emit(make_geo4(), dir + "/geo4.mesh");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Error::exit_code(e.code());
    }
    return 0;
}
