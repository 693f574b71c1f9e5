#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "worstload/fem.hpp"

using namespace worstload;

namespace {

// plain square [0,1]^2 grid without holes
Mesh unit_square(double h) {
    PanelSpec spec;
    spec.rects.push_back({0.0, 0.0, 1.0, 1.0});
    return generate_panel_mesh(spec, h);
}

Mesh two_tri_square() {
    Mesh m;
    m.nodes = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.tris = {{0, 1, 2}, {0, 2, 3}};
    m.element_region = {ElementTag::matrix, ElementTag::inclusion};
    m.element_in_omega = {1, 0};
    m.boundary_edges = {{0, 1, BoundaryTag::outer},
                        {1, 2, BoundaryTag::outer},
                        {2, 3, BoundaryTag::outer},
                        {3, 0, BoundaryTag::outer}};
    return m;
}

}  // namespace

TEST_CASE("stiffness of the unit right triangle") {
    Mesh m;
    m.nodes = {{0, 0}, {1, 0}, {0, 1}};
    m.tris = {{0, 1, 2}};
    m.element_region = {ElementTag::matrix};
    m.element_in_omega = {0};
    m.boundary_edges = {{0, 1, BoundaryTag::outer},
                        {1, 2, BoundaryTag::outer},
                        {2, 0, BoundaryTag::outer}};
    const SpMat k = assemble_stiffness(m, MaterialField::uniform(m, 1.0),
                                       EnergyRegion::omega_star);
    const Eigen::MatrixXd kd = Eigen::MatrixXd(k);
    Eigen::Matrix3d expect;
    expect << 1.0, -0.5, -0.5, -0.5, 0.5, 0.0, -0.5, 0.0, 0.5;
    CHECK((kd - expect).cwiseAbs().maxCoeff() < 1e-14);
    // row sums vanish: constants are in the kernel
    CHECK(kd.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("constants lie in the stiffness kernel") {
    const Mesh m = generate_square_hole_mesh(2.0, 0.3, 0.7, {}, 0.1);
    const MaterialField mat = MaterialField::from_tags(m, 1.0, 1000.0);
    const SpMat k = assemble_stiffness(m, mat, EnergyRegion::omega_star);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.nodes.size());
    double knorm = 0.0;
    for (int c = 0; c < k.outerSize(); ++c)
        for (SpMat::InnerIterator it(k, c); it; ++it)
            knorm = std::max(knorm, std::abs(it.value()));
    CHECK((k * ones).cwiseAbs().maxCoeff() < 1e-12 * knorm);
}

TEST_CASE("two-element assembly equals the hand-assembled sum") {
    const Mesh m = two_tri_square();
    MaterialField mat;
    mat.value = {1.0, 10.0};
    mat.lower = 1.0;
    mat.upper = 10.0;
    const Eigen::MatrixXd kd =
        Eigen::MatrixXd(assemble_stiffness(m, mat, EnergyRegion::omega_star));
    Eigen::Matrix4d expect;
    // triangle (0,1,2), c = 1:  [[0.5,-0.5,0],[-0.5,1,-0.5],[0,-0.5,0.5]]
    // triangle (0,2,3), c = 10: [[5,0,-5],[0,5,-5],[-5,-5,10]]
    expect << 5.5, -0.5, 0.0, -5.0,
             -0.5,  1.0, -0.5, 0.0,
              0.0, -0.5, 5.5, -5.0,
             -5.0,  0.0, -5.0, 10.0;
    CHECK((kd - expect).cwiseAbs().maxCoeff() < 1e-13);

    // omega region picks only the tagged element
    const Eigen::MatrixXd komega =
        Eigen::MatrixXd(assemble_stiffness(m, mat, EnergyRegion::omega));
    Eigen::Matrix4d e1 = Eigen::Matrix4d::Zero();
    e1.topLeftCorner<3, 3>() << 0.5, -0.5, 0.0, -0.5, 1.0, -0.5, 0.0, -0.5, 0.5;
    CHECK((komega - e1).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("empty omega region is an error") {
    Mesh m = two_tri_square();
    m.element_in_omega = {0, 0};
    MaterialField mat = MaterialField::uniform(m, 1.0);
    try {
        assemble_stiffness(m, mat, EnergyRegion::omega);
        FAIL("expected empty-region error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::empty_region);
    }
}

TEST_CASE("linear boundary data is reproduced exactly") {
    const Mesh m = unit_square(0.125);
    const DirichletSolver solver(m, MaterialField::uniform(m, 3.0));
    Eigen::VectorXd g(solver.outer_nodes().size());
    for (size_t i = 0; i < solver.outer_nodes().size(); ++i)
        g[i] = m.nodes[solver.outer_nodes()[i]].x;
    const NodalField u = solver.solve(g);
    for (size_t n = 0; n < m.nodes.size(); ++n)
        CHECK(u[n] == doctest::Approx(m.nodes[n].x).epsilon(1e-10));

    SUBCASE("zero data gives the zero field") {
        const NodalField z = solver.solve(Eigen::VectorXd::Zero(g.size()));
        CHECK(z.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("quad elements pass the linear patch test") {
    // 2x2 quad grid with a displaced interior node
    Mesh quads;
    quads.nodes = {{0, 0},   {0.5, 0}, {1, 0},  {0, 0.5}, {0.55, 0.45},
                   {1, 0.5}, {0, 1},   {0.5, 1}, {1, 1}};
    quads.quads = {{0, 1, 4, 3}, {1, 2, 5, 4}, {3, 4, 7, 6}, {4, 5, 8, 7}};
    quads.element_region.assign(4, ElementTag::matrix);
    quads.element_in_omega.assign(4, 0);
    quads.boundary_edges = {{0, 1, BoundaryTag::outer}, {1, 2, BoundaryTag::outer},
                            {2, 5, BoundaryTag::outer}, {5, 8, BoundaryTag::outer},
                            {8, 7, BoundaryTag::outer}, {7, 6, BoundaryTag::outer},
                            {6, 3, BoundaryTag::outer}, {3, 0, BoundaryTag::outer}};
    REQUIRE(validate(quads).empty());

    // exercise the quad path of the mesh file format as well
    save_mesh(quads, "quads.mesh");
    const Mesh m = load_mesh("quads.mesh");
    REQUIRE(m.quads.size() == 4);
    const DirichletSolver solver(m, MaterialField::uniform(m, 2.0));
    Eigen::VectorXd g(solver.outer_nodes().size());
    for (size_t i = 0; i < solver.outer_nodes().size(); ++i) {
        const Vec2 p = m.nodes[solver.outer_nodes()[i]];
        g[i] = 0.7 * p.x - 0.3 * p.y + 0.2;
    }
    const NodalField u = solver.solve(g);
    const Vec2 c = m.nodes[4];
    CHECK(u[4] == doctest::Approx(0.7 * c.x - 0.3 * c.y + 0.2).epsilon(1e-12));
}

TEST_CASE("annulus benchmark: log-radial solution and h-convergence") {
    auto max_err = [](double h) {
        const Mesh m = generate_annulus_mesh(1.0, 0.3, 0.7, h);
        const DirichletSolver solver(m, MaterialField::uniform(m, 1.0));
        const Eigen::VectorXd g =
            Eigen::VectorXd::Ones(solver.outer_nodes().size());
        const NodalField u = solver.solve(g);
        double worst = 0.0;
        for (size_t n = 0; n < m.nodes.size(); ++n) {
            const double r = norm(m.nodes[n]);
            const double exact = std::log(r / 0.3) / std::log(1.0 / 0.3);
            worst = std::max(worst, std::abs(u[n] - exact));
        }
        return worst;
    };
    const double e1 = max_err(0.04);
    const double e2 = max_err(0.02);
    CHECK(e2 < 5e-3);
    CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("energy identities") {
    const Mesh m = generate_annulus_mesh(1.0, 0.3, 0.7, 0.05);
    const MaterialField mat = MaterialField::uniform(m, 2.5);
    const DirichletSolver solver(m, mat);
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd g(solver.outer_nodes().size());
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = gauss(rng);
    const NodalField u = solver.solve(g);

    SUBCASE("boundary work equals total energy") {
        const SpMat& k = solver.stiffness(EnergyRegion::omega_star);
        const Eigen::VectorXd ku = k * u;
        double work = 0.0;
        for (size_t i = 0; i < solver.outer_nodes().size(); ++i)
            work += g[i] * ku[solver.outer_nodes()[i]];
        const double energy = solver.energy(u, u, EnergyRegion::omega_star);
        CHECK(work == doctest::Approx(energy).epsilon(1e-8));
    }

    SUBCASE("symmetry and region additivity") {
        Eigen::VectorXd g2(g.size());
        for (Eigen::Index i = 0; i < g.size(); ++i) g2[i] = gauss(rng);
        const NodalField v = solver.solve(g2);
        CHECK(solver.energy(u, v, EnergyRegion::omega_star) ==
              doctest::Approx(solver.energy(v, u, EnergyRegion::omega_star)));
        const double inside = energy_inner_product(m, mat, u, v, EnergyRegion::omega);
        const double outside =
            energy_inner_product(m, mat, u, v, EnergyRegion::complement);
        const double total =
            energy_inner_product(m, mat, u, v, EnergyRegion::omega_star);
        CHECK(inside + outside == doctest::Approx(total).epsilon(1e-12));
    }

    SUBCASE("Galerkin orthogonality and energy minimization") {
        const double unorm = std::sqrt(solver.energy(u, u, EnergyRegion::omega_star));
        std::vector<char> boundary(m.nodes.size(), 0);
        for (const BoundaryEdge& be : m.boundary_edges) {
            boundary[be.a] = 1;
            boundary[be.b] = 1;
        }
        const double eu = solver.energy(u, u, EnergyRegion::omega_star);
        for (int trial = 0; trial < 100; ++trial) {
            NodalField v = NodalField::Zero(m.nodes.size());
            for (size_t n = 0; n < m.nodes.size(); ++n)
                if (!boundary[n]) v[n] = gauss(rng);
            const double vnorm =
                std::sqrt(solver.energy(v, v, EnergyRegion::omega_star));
            const double cross = solver.energy(u, v, EnergyRegion::omega_star);
            CHECK(std::abs(cross) <= 1e-10 * unorm * vnorm);
            const NodalField w = u + v;
            CHECK(solver.energy(w, w, EnergyRegion::omega_star) >= eu - 1e-10);
        }
    }
}

TEST_CASE("concurrent solves share one immutable factorization") {
    const Mesh m = generate_annulus_mesh(1.0, 0.3, 0.7, 0.05);
    const DirichletSolver solver(m, MaterialField::uniform(m, 1.0));
    const int nb = static_cast<int>(solver.outer_nodes().size());

    std::vector<Eigen::VectorXd> data(4);
    std::vector<NodalField> serial(4), parallel(4);
    std::mt19937 rng(5150);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 4; ++t) {
        data[t].resize(nb);
        for (int i = 0; i < nb; ++i) data[t][i] = gauss(rng);
        serial[t] = solver.solve(data[t]);
    }
    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t)
        workers.emplace_back([&, t] { parallel[t] = solver.solve(data[t]); });
    for (auto& w : workers) w.join();
    for (int t = 0; t < 4; ++t)
        CHECK((serial[t] - parallel[t]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient and stress fields") {
    const Mesh m = unit_square(0.25);
    const MaterialField mat = MaterialField::uniform(m, 4.0);
    NodalField u(m.nodes.size());
    for (size_t n = 0; n < m.nodes.size(); ++n) u[n] = m.nodes[n].x;
    const auto d = gradient_and_stress(m, mat, u);
    for (int e = 0; e < m.element_count(); ++e) {
        CHECK(d.grad_mag[e] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(d.stress_mag[e] == doctest::Approx(4.0).epsilon(1e-13));
    }
    const auto z = gradient_and_stress(m, mat, NodalField::Zero(m.nodes.size()));
    for (int e = 0; e < m.element_count(); ++e) CHECK(z.grad_mag[e] == 0.0);

    SUBCASE("annulus gradient matches the analytic magnitude") {
        const Mesh ann = generate_annulus_mesh(1.0, 0.3, 0.7, 0.02);
        const DirichletSolver solver(ann, MaterialField::uniform(ann, 1.0));
        const NodalField ua =
            solver.solve(Eigen::VectorXd::Ones(solver.outer_nodes().size()));
        const auto da = gradient_and_stress(ann, solver.material(), ua);
        const double lg = std::log(1.0 / 0.3);
        for (int e = 0; e < ann.element_count(); e += 97) {
            const double r = norm(ann.centroid(e));
            CHECK(da.grad_mag[e] == doctest::Approx(1.0 / (r * lg)).epsilon(0.05));
        }
    }
}
