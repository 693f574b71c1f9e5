#include "worstload/fem.hpp"

#include <algorithm>
#include <cmath>

namespace worstload {

MaterialField MaterialField::uniform(const Mesh& mesh, double c) {
    MaterialField m;
    m.value.assign(mesh.element_count(), c);
    m.lower = m.upper = c;
    return m;
}

MaterialField MaterialField::from_tags(const Mesh& mesh, double matrix_c,
                                       double inclusion_c) {
    MaterialField m;
    m.value.resize(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e)
        m.value[e] = mesh.element_region[e] == ElementTag::inclusion ? inclusion_c
                                                                     : matrix_c;
    m.lower = std::min(matrix_c, inclusion_c);
    m.upper = std::max(matrix_c, inclusion_c);
    return m;
}

void MaterialField::check(const Mesh& mesh) const {
    if (static_cast<int>(value.size()) != mesh.element_count())
        fail(errc::parameter, "material field size does not match element count");
    if (!(lower > 0.0) || !(upper >= lower))
        fail(errc::parameter, "material bounds must satisfy 0 < lower <= upper");
    for (double c : value)
        if (!(c >= lower) || !(c <= upper))
            fail(errc::parameter, "element modulus outside declared bounds");
}

namespace {

// 3x3 stiffness of a P1 triangle: c/(4A) * B^T B with B the gradient matrix.
void tri_stiffness(const Vec2& a, const Vec2& b, const Vec2& c, double mod,
                   double ke[4][4]) {
    const double bx[3] = {b.y - c.y, c.y - a.y, a.y - b.y};
    const double by[3] = {c.x - b.x, a.x - c.x, b.x - a.x};
    const double area2 = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    const double f = mod / (2.0 * area2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ke[i][j] = f * (bx[i] * bx[j] + by[i] * by[j]);
}

// 4x4 stiffness of an isoparametric Q1 quad with 2x2 Gauss quadrature.
void quad_stiffness(const Vec2 p[4], double mod, double ke[4][4]) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ke[i][j] = 0.0;
    const double g = 1.0 / std::sqrt(3.0);
    const double pts[2] = {-g, g};
    for (double xi : pts) {
        for (double eta : pts) {
            const double dxi[4] = {-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4,
                                   -(1 + eta) / 4};
            const double deta[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4,
                                    (1 - xi) / 4};
            double j11 = 0, j12 = 0, j21 = 0, j22 = 0;
            for (int k = 0; k < 4; ++k) {
                j11 += dxi[k] * p[k].x;
                j12 += dxi[k] * p[k].y;
                j21 += deta[k] * p[k].x;
                j22 += deta[k] * p[k].y;
            }
            const double det = j11 * j22 - j12 * j21;
            double gx[4], gy[4];
            for (int k = 0; k < 4; ++k) {
                gx[k] = (j22 * dxi[k] - j12 * deta[k]) / det;
                gy[k] = (-j21 * dxi[k] + j11 * deta[k]) / det;
            }
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    ke[i][j] += mod * (gx[i] * gx[j] + gy[i] * gy[j]) * det;
        }
    }
}

bool in_region(const Mesh& mesh, int e, EnergyRegion region) {
    switch (region) {
        case EnergyRegion::omega: return mesh.element_in_omega[e] != 0;
        case EnergyRegion::complement: return mesh.element_in_omega[e] == 0;
        case EnergyRegion::omega_star: return true;
    }
    return true;
}

}  // namespace

SpMat assemble_stiffness(const Mesh& mesh, const MaterialField& material,
                         EnergyRegion region) {
    material.check(mesh);
    if (region == EnergyRegion::omega) {
        bool any = false;
        for (int e = 0; e < mesh.element_count(); ++e)
            if (mesh.element_in_omega[e]) { any = true; break; }
        if (!any) fail(errc::empty_region, "no elements are tagged inside omega");
    }

    const int nn = static_cast<int>(mesh.nodes.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(mesh.element_count()) * 12);
    double ke[4][4];
    for (int e = 0; e < mesh.element_count(); ++e) {
        if (!in_region(mesh, e, region)) continue;
        const int nv = mesh.vertex_count(e);
        if (nv == 3) {
            tri_stiffness(mesh.nodes[mesh.vertex(e, 0)], mesh.nodes[mesh.vertex(e, 1)],
                          mesh.nodes[mesh.vertex(e, 2)], material.value[e], ke);
        } else {
            Vec2 p[4];
            for (int k = 0; k < 4; ++k) p[k] = mesh.nodes[mesh.vertex(e, k)];
            quad_stiffness(p, material.value[e], ke);
        }
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j)
                trip.emplace_back(mesh.vertex(e, i), mesh.vertex(e, j), ke[i][j]);
    }
    SpMat k(nn, nn);
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
}

double energy_inner_product(const Mesh& mesh, const MaterialField& material,
                            const NodalField& u, const NodalField& v,
                            EnergyRegion region) {
    if (u.size() != static_cast<Eigen::Index>(mesh.nodes.size()) || u.size() != v.size())
        fail(errc::parameter, "field size does not match node count");
    const SpMat k = assemble_stiffness(mesh, material, region);
    return v.dot(k * u);
}

std::array<double, 2> element_gradient(const Mesh& mesh, const NodalField& u, int e) {
    double gx = 0, gy = 0;
    if (mesh.vertex_count(e) == 3) {
        const Vec2 a = mesh.nodes[mesh.vertex(e, 0)];
        const Vec2 b = mesh.nodes[mesh.vertex(e, 1)];
        const Vec2 c = mesh.nodes[mesh.vertex(e, 2)];
        const double area2 = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        const double bx[3] = {b.y - c.y, c.y - a.y, a.y - b.y};
        const double by[3] = {c.x - b.x, a.x - c.x, b.x - a.x};
        for (int k = 0; k < 3; ++k) {
            gx += bx[k] / area2 * u[mesh.vertex(e, k)];
            gy += by[k] / area2 * u[mesh.vertex(e, k)];
        }
    } else {
        // centroid xi = eta = 0
        const double dxi[4] = {-0.25, 0.25, 0.25, -0.25};
        const double deta[4] = {-0.25, -0.25, 0.25, 0.25};
        double j11 = 0, j12 = 0, j21 = 0, j22 = 0, uxi = 0, ueta = 0;
        for (int k = 0; k < 4; ++k) {
            const Vec2 p = mesh.nodes[mesh.vertex(e, k)];
            j11 += dxi[k] * p.x;
            j12 += dxi[k] * p.y;
            j21 += deta[k] * p.x;
            j22 += deta[k] * p.y;
            uxi += dxi[k] * u[mesh.vertex(e, k)];
            ueta += deta[k] * u[mesh.vertex(e, k)];
        }
        const double det = j11 * j22 - j12 * j21;
        gx = (j22 * uxi - j12 * ueta) / det;
        gy = (-j21 * uxi + j11 * ueta) / det;
    }
    return {gx, gy};
}

ElementDerivatives gradient_and_stress(const Mesh& mesh, const MaterialField& material,
                                       const NodalField& u) {
    if (u.size() != static_cast<Eigen::Index>(mesh.nodes.size()))
        fail(errc::parameter, "field size does not match node count");
    ElementDerivatives d;
    d.grad_mag.resize(mesh.element_count());
    d.stress_mag.resize(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto [gx, gy] = element_gradient(mesh, u, e);
        d.grad_mag[e] = std::hypot(gx, gy);
        d.stress_mag[e] = material.value[e] * d.grad_mag[e];
    }
    return d;
}

DirichletSolver::DirichletSolver(const Mesh& mesh, MaterialField material,
                                 double residual_tol)
    : mesh_(mesh), material_(std::move(material)), residual_tol_(residual_tol) {
    material_.check(mesh);
    param_ = boundary_parametrization(mesh);

    const int nn = static_cast<int>(mesh.nodes.size());
    node_class_.assign(nn, -1);
    for (size_t i = 0; i < param_.loop.size(); ++i) node_class_[param_.loop[i]] = 0;
    for (const BoundaryEdge& be : mesh.boundary_edges) {
        if (be.tag != BoundaryTag::inner_clamped) continue;
        for (int n : {be.a, be.b}) {
            if (node_class_[n] == 0)
                fail(errc::topology, "node " + std::to_string(n) +
                                         " is on both OUTER and INNER boundaries");
            node_class_[n] = 1;
        }
    }
    for (int n = 0; n < nn; ++n)
        if (node_class_[n] == 1) clamped_.push_back(n);
    for (int n = 0; n < nn; ++n)
        if (node_class_[n] == -1) free_.push_back(n);

    k_star_ = assemble_stiffness(mesh_, material_, EnergyRegion::omega_star);
    for (int k = 0; k < k_star_.outerSize(); ++k)
        for (SpMat::InnerIterator it(k_star_, k); it; ++it)
            k_scale_ = std::max(k_scale_, std::abs(it.value()));

    // Interior block and interior x outer coupling (clamped columns drop:
    // their data is identically zero).
    std::vector<int> where(nn, -1);  // free position
    for (size_t i = 0; i < free_.size(); ++i) where[free_[i]] = static_cast<int>(i);
    std::vector<int> outer_pos(nn, -1);
    for (size_t i = 0; i < param_.loop.size(); ++i)
        outer_pos[param_.loop[i]] = static_cast<int>(i);

    std::vector<Eigen::Triplet<double>> tff, tfb;
    for (int col = 0; col < k_star_.outerSize(); ++col) {
        for (SpMat::InnerIterator it(k_star_, col); it; ++it) {
            const int r = static_cast<int>(it.row());
            if (where[r] < 0) continue;
            if (where[col] >= 0)
                tff.emplace_back(where[r], where[col], it.value());
            else if (outer_pos[col] >= 0)
                tfb.emplace_back(where[r], outer_pos[col], it.value());
        }
    }
    const int nf = static_cast<int>(free_.size());
    const int nb = static_cast<int>(param_.loop.size());
    k_ff_.resize(nf, nf);
    k_ff_.setFromTriplets(tff.begin(), tff.end());
    k_fb_.resize(nf, nb);
    k_fb_.setFromTriplets(tfb.begin(), tfb.end());

    factor_.compute(k_ff_);
    if (factor_.info() != Eigen::Success)
        fail(errc::solver, "factorization of the interior stiffness block failed");
}

const SpMat& DirichletSolver::stiffness(EnergyRegion region) const {
    if (region == EnergyRegion::omega_star) return k_star_;
    if (region == EnergyRegion::omega) {
        if (!k_omega_)
            k_omega_ = std::make_unique<SpMat>(
                assemble_stiffness(mesh_, material_, EnergyRegion::omega));
        return *k_omega_;
    }
    fail(errc::parameter, "complement stiffness is not cached; assemble it directly");
}

double DirichletSolver::energy(const NodalField& u, const NodalField& v,
                               EnergyRegion region) const {
    return v.dot(stiffness(region) * u);
}

double DirichletSolver::interior_residual(const NodalField& u) const {
    const Eigen::VectorXd r = k_star_ * u;
    double worst = 0.0;
    for (int n : free_) worst = std::max(worst, std::abs(r[n]));
    const double scale = k_scale_ * std::max(1.0, u.cwiseAbs().maxCoeff());
    return worst / scale;
}

Eigen::MatrixXd DirichletSolver::solve_many(const Eigen::MatrixXd& outer_values) const {
    const int nb = static_cast<int>(param_.loop.size());
    if (outer_values.rows() != nb)
        fail(errc::parameter, "boundary data must have one row per outer node");
    const Eigen::MatrixXd rhs = -(k_fb_ * outer_values);
    Eigen::MatrixXd uf = factor_.solve(rhs);
    if (factor_.info() != Eigen::Success)
        fail(errc::solver, "sparse backsolve failed");
    uf += factor_.solve(rhs - k_ff_ * uf);  // one refinement pass

    Eigen::MatrixXd full(mesh_.nodes.size(), outer_values.cols());
    full.setZero();
    for (size_t i = 0; i < free_.size(); ++i) full.row(free_[i]) = uf.row(i);
    for (int i = 0; i < nb; ++i) full.row(param_.loop[i]) = outer_values.row(i);

    for (int c = 0; c < full.cols(); ++c) {
        const double res = interior_residual(full.col(c));
        if (!(res <= residual_tol_))
            fail(errc::solver, "interior residual " + std::to_string(res) +
                                   " exceeds tolerance");
    }
    return full;
}

NodalField DirichletSolver::solve(const Eigen::VectorXd& outer_values) const {
    return solve_many(outer_values).col(0);
}

}  // namespace worstload
