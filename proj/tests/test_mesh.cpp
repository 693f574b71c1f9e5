#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "worstload/mesh.hpp"

using namespace worstload;

namespace {

constexpr double kPi = 3.14159265358979323846;

double region_area(const Mesh& mesh, bool omega_only, ElementTag tag = ElementTag::matrix,
                   bool by_tag = false) {
    double a = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        if (omega_only && !mesh.element_in_omega[e]) continue;
        if (by_tag && mesh.element_region[e] != tag) continue;
        a += mesh.area(e);
    }
    return a;
}

}  // namespace

TEST_CASE("disk mesh: omega area matches the circle area within the polygon deficit") {
    const Mesh mesh = generate_disk_mesh(1.0, 0.5, 0.05);
    CHECK(validate(mesh).empty());
    const double area = region_area(mesh, true);
    CHECK(area == doctest::Approx(kPi * 0.25).epsilon(0.02));
    CHECK(region_area(mesh, false) == doctest::Approx(kPi).epsilon(0.02));

    // refinement shrinks the deficit
    const Mesh fine = generate_disk_mesh(1.0, 0.5, 0.025);
    const double err_c = std::abs(region_area(mesh, true) - kPi * 0.25);
    const double err_f = std::abs(region_area(fine, true) - kPi * 0.25);
    CHECK(err_f < err_c);
}

TEST_CASE("disk mesh: omega must be strictly interior") {
    CHECK_THROWS_AS(generate_disk_mesh(1.0, 1.0, 0.05), Error);
    CHECK_THROWS_AS(generate_disk_mesh(1.0, 1.2, 0.05), Error);
    CHECK_THROWS_AS(generate_disk_mesh(-1.0, 0.5, 0.05), Error);
}

TEST_CASE("disk mesh: too-coarse resolution is rejected") {
    try {
        generate_disk_mesh(1.0, 0.9, 0.8);
        FAIL("expected resolution error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::resolution);
    }
}

TEST_CASE("disk mesh: generator run satisfies the invariants") {
    const Mesh mesh = generate_disk_mesh(1.0, 0.3, 0.02);
    CHECK(validate(mesh).empty());
    CHECK(mesh.quads.empty());
    for (int e = 0; e < mesh.element_count(); ++e) CHECK(mesh.area(e) > 0.0);
}

TEST_CASE("square hole mesh: geometry 1 skeleton") {
    const Mesh mesh = generate_square_hole_mesh(2.0, 0.3, 0.7, {}, 0.05);
    CHECK(validate(mesh).empty());
    const double ann = kPi * (0.7 * 0.7 - 0.3 * 0.3);
    CHECK(region_area(mesh, true) == doctest::Approx(ann).epsilon(0.02));
    CHECK(boundary_loops(mesh, BoundaryTag::inner_clamped).size() == 1);

    const auto param = boundary_parametrization(mesh);
    CHECK(param.half_length == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("square hole mesh: radii ordering precondition") {
    CHECK_THROWS_AS(generate_square_hole_mesh(2.0, 0.7, 0.3, {}, 0.05), Error);
}

TEST_CASE("square hole mesh: conforming inclusion area") {
    const std::vector<InclusionSpec> inc{{{0.8, 0.8}, 0.1, ElementTag::inclusion}};
    const Mesh mesh = generate_square_hole_mesh(2.0, 0.3, 0.7, inc, 0.05);
    CHECK(validate(mesh).empty());
    const double a = region_area(mesh, false, ElementTag::inclusion, true);
    CHECK(a == doctest::Approx(kPi * 0.01).epsilon(0.05));
}

TEST_CASE("square hole mesh: overlapping or straddling inclusions are rejected") {
    const std::vector<InclusionSpec> overlap{{{0.8, 0.8}, 0.1}, {{0.85, 0.8}, 0.1}};
    CHECK_THROWS_AS(generate_square_hole_mesh(2.0, 0.3, 0.7, overlap, 0.05), Error);
    const std::vector<InclusionSpec> on_omega{{{0.75, 0.0}, 0.1}};
    CHECK_THROWS_AS(generate_square_hole_mesh(2.0, 0.3, 0.7, on_omega, 0.05), Error);
    const std::vector<InclusionSpec> on_boundary{{{0.98, 0.0}, 0.1}};
    CHECK_THROWS_AS(generate_square_hole_mesh(2.0, 0.3, 0.7, on_boundary, 0.05), Error);
}

TEST_CASE("mesh file: smallest conforming example round-trips") {
    // four triangles around the center of a unit square
    const char* text =
        "meshv1\n"
        "nodes 5\n"
        "0 0\n1 0\n1 1\n0 1\n0.5 0.5\n"
        "tris 4\n"
        "0 1 4\n1 2 4\n2 3 4\n3 0 4\n"
        "regions\nM M M+w I\n"
        "boundary 4\n"
        "0 1 OUTER\n1 2 OUTER\n2 3 OUTER\n3 0 OUTER\n"
        "anchor 0\n";
    {
        std::ofstream out("tiny.mesh");
        out << text;
    }
    const Mesh mesh = load_mesh("tiny.mesh");
    CHECK(mesh.nodes.size() == 5);
    CHECK(mesh.tris.size() == 4);
    CHECK(mesh.element_in_omega[2] == 1);
    CHECK(mesh.element_region[3] == ElementTag::inclusion);
    CHECK(mesh.outer_anchor == 0);

    save_mesh(mesh, "tiny2.mesh");
    const Mesh again = load_mesh("tiny2.mesh");
    CHECK(again.nodes.size() == mesh.nodes.size());
    CHECK(again.tris == mesh.tris);
    CHECK(again.element_in_omega == mesh.element_in_omega);

    const auto param = boundary_parametrization(mesh);
    CHECK(param.half_length == doctest::Approx(2.0));
    CHECK(param.loop.front() == 0);
    CHECK(param.arc.front() == doctest::Approx(-2.0));
}

TEST_CASE("mesh file: element referencing a missing node is a parse error") {
    {
        std::ofstream out("bad.mesh");
        out << "meshv1\nnodes 3\n0 0\n1 0\n0 1\ntris 1\n0 1 7\nregions\nM\n"
               "boundary 3\n0 1 OUTER\n1 2 OUTER\n2 0 OUTER\n";
    }
    try {
        load_mesh("bad.mesh");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::parse);
        CHECK(std::string(e.what()).find("element 0") != std::string::npos);
        CHECK(std::string(e.what()).find("7") != std::string::npos);
    }
}

TEST_CASE("geometry 3 preset mesh: one outer loop, four clamped loops") {
    const Mesh mesh = load_mesh(std::string(WORSTLOAD_PRESET_DIR) + "/geo3.mesh");
    CHECK(boundary_loops(mesh, BoundaryTag::outer).size() == 1);
    CHECK(boundary_loops(mesh, BoundaryTag::inner_clamped).size() == 4);
    const auto param = boundary_parametrization(mesh);
    CHECK(param.half_length == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("validate: clockwise element is flagged") {
    Mesh mesh = generate_disk_mesh(1.0, 0.5, 0.1);
    std::swap(mesh.tris[0][1], mesh.tris[0][2]);
    const auto diags = validate(mesh);
    bool found = false;
    for (const auto& d : diags)
        if (d.find("nonpositive area") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate: element straddling the omega interface is flagged") {
    Mesh mesh = generate_disk_mesh(1.0, 0.5, 0.1);
    // pull one node of the omega ring outward so its elements cross the circle
    for (size_t n = 0; n < mesh.nodes.size(); ++n) {
        const double r = norm(mesh.nodes[n]);
        if (std::abs(r - 0.5) < 1e-12) {
            mesh.nodes[n].x *= 1.1;
            mesh.nodes[n].y *= 1.1;
            break;
        }
    }
    const auto diags = validate(mesh);
    bool found = false;
    for (const auto& d : diags)
        if (d.find("straddles") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("annulus mesh: clamped inner loop and omega band") {
    const Mesh mesh = generate_annulus_mesh(1.0, 0.3, 0.7, 0.05);
    CHECK(validate(mesh).empty());
    CHECK(boundary_loops(mesh, BoundaryTag::inner_clamped).size() == 1);
    const double ann = kPi * (0.7 * 0.7 - 0.3 * 0.3);
    CHECK(region_area(mesh, true) == doctest::Approx(ann).epsilon(0.02));
    const auto param = boundary_parametrization(mesh);
    CHECK(param.half_length == doctest::Approx(kPi).epsilon(0.01));
}

TEST_CASE("parametrization: consecutive arc differences equal edge lengths") {
    const Mesh mesh = generate_square_hole_mesh(2.0, 0.3, 0.7, {}, 0.1);
    const auto param = boundary_parametrization(mesh);
    const int n = param.size();
    double perim = 0.0;
    for (int i = 0; i < n; ++i) {
        perim += param.edge_length[i];
        if (i + 1 < n) {
            const double ds = param.arc[i + 1] - param.arc[i];
            CHECK(ds == doctest::Approx(param.edge_length[i]).epsilon(1e-12));
        }
    }
    CHECK(param.half_length * 2 == doctest::Approx(perim).epsilon(1e-12));
    // closure: last edge returns to -a modulo 2a
    CHECK(param.arc.back() + param.edge_length.back() ==
          doctest::Approx(param.half_length).epsilon(1e-10));
    // bijection: all loop nodes distinct
    std::vector<int> loop = param.loop;
    std::sort(loop.begin(), loop.end());
    CHECK(std::adjacent_find(loop.begin(), loop.end()) == loop.end());
}

TEST_CASE("property: random valid generator parameters validate cleanly") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const double outer = 0.5 + 1.5 * unit(rng);
        const double omega = outer * (0.3 + 0.4 * unit(rng));
        const double h = omega * (0.15 + 0.1 * unit(rng));
        const Mesh disk = generate_disk_mesh(outer, omega, h);
        CHECK(validate(disk).empty());

        const double side = 1.0 + 2.0 * unit(rng);
        const double hole = side * (0.08 + 0.05 * unit(rng));
        const double om = side * (0.22 + 0.08 * unit(rng));
        const Mesh sq = generate_square_hole_mesh(side, hole, om, {}, side / 30.0);
        CHECK(validate(sq).empty());
    }
}

TEST_CASE("retag: conforming circle retag works, nonconforming is rejected") {
    Mesh mesh = generate_disk_mesh(1.0, 0.5, 0.05);
    // ring radii inside omega are multiples of 0.05
    retag_omega_circle(mesh, {0.0, 0.0}, 0.3);
    CHECK(validate(mesh).empty());
    CHECK(region_area(mesh, true) == doctest::Approx(kPi * 0.09).epsilon(0.02));
    CHECK_THROWS_AS(retag_omega_circle(mesh, {0.0, 0.0}, 0.33), Error);
}
