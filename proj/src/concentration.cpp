#include "worstload/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace worstload {

Eigen::MatrixXd assemble_gram(const DirichletSolver& solver, const HarmonicBasis& basis,
                              EnergyRegion region) {
    if (basis.fields.rows() != static_cast<Eigen::Index>(solver.mesh().nodes.size()) ||
        basis.centers != solver.outer_nodes())
        fail(errc::parameter, "basis does not belong to this solver's mesh");
    const Eigen::MatrixXd w = solver.stiffness(region) * basis.fields;
    Eigen::MatrixXd m = basis.fields.transpose() * w;
    m = 0.5 * (m + m.transpose()).eval();
    return m;
}

GeneralizedEig solve_generalized_eig(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || b.rows() != n || b.cols() != n)
        fail(errc::parameter, "gram matrices must be square and of equal size");

    // Upper Cholesky A = U^T U, reporting the failing pivot.
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double d = a(k, k) - u.col(k).head(k).squaredNorm();
        if (!(d > 0.0))
            fail(errc::solver, "matrix A is not positive definite: Cholesky pivot " +
                                   std::to_string(k) + " is " + std::to_string(d));
        u(k, k) = std::sqrt(d);
        for (Eigen::Index j = k + 1; j < n; ++j)
            u(k, j) = (a(k, j) - u.col(k).head(k).dot(u.col(j).head(k))) / u(k, k);
    }

    // C = U^-T B U^-1, symmetrized against roundoff.
    const auto lower = u.transpose().triangularView<Eigen::Lower>();
    Eigen::MatrixXd c = lower.solve(b);
    c = lower.solve(c.transpose().eval());
    c = 0.5 * (c + c.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    if (es.info() != Eigen::Success) fail(errc::solver, "symmetric eigensolve failed");

    GeneralizedEig out;
    out.values = es.eigenvalues().reverse();
    Eigen::MatrixXd y = es.eigenvectors().rowwise().reverse();
    out.vectors = u.triangularView<Eigen::Upper>().solve(y);
    // y columns are unit vectors, so x^T A x = 1 already; renormalize to be safe.
    for (Eigen::Index j = 0; j < n; ++j) {
        const double s = std::sqrt(out.vectors.col(j).dot(a * out.vectors.col(j)));
        if (s > 0.0) out.vectors.col(j) /= s;
    }
    return out;
}

namespace {

// c grad(u) . n on each outer edge, from the single adjacent element.
Eigen::VectorXd edge_tractions(const DirichletSolver& solver, const NodalField& u) {
    const Mesh& mesh = solver.mesh();
    const BoundaryParametrization& param = solver.parametrization();

    std::map<std::pair<int, int>, int> owner;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const int nv = mesh.vertex_count(e);
        for (int k = 0; k < nv; ++k) {
            const int a = mesh.vertex(e, k), b = mesh.vertex(e, (k + 1) % nv);
            owner[{std::min(a, b), std::max(a, b)}] = e;
        }
    }

    const int n = param.size();
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) {
        const int a = param.loop[i], b = param.loop[(i + 1) % n];
        const auto it = owner.find({std::min(a, b), std::max(a, b)});
        if (it == owner.end()) fail(errc::topology, "outer edge without adjacent element");
        const int e = it->second;
        const auto [gx, gy] = element_gradient(mesh, u, e);

        // outward normal of a CCW loop
        const Vec2 pa = mesh.nodes[a], pb = mesh.nodes[b];
        const double len = dist(pa, pb);
        const double nx = (pb.y - pa.y) / len, ny = -(pb.x - pa.x) / len;
        t[i] = solver.material().value[e] * (gx * nx + gy * ny);
    }
    return t;
}

}  // namespace

ConcentrationResult worst_case(const DirichletSolver& solver) {
    const HarmonicBasis basis = build_basis(solver);
    const Eigen::MatrixXd a = assemble_gram(solver, basis, EnergyRegion::omega_star);
    const Eigen::MatrixXd b = assemble_gram(solver, basis, EnergyRegion::omega);
    const int n = basis.size();

    ConcentrationResult r;
    r.grounded = solver.clamped_nodes().empty();

    GeneralizedEig eig;
    Eigen::VectorXd x;
    if (r.grounded) {
        // No clamped holes: the constant field is in the kernel of both Gram
        // matrices (concentration is invariant under adding constants to the
        // load). Ground the pencil by pinning the anchor hat's coefficient.
        eig = solve_generalized_eig(a.bottomRightCorner(n - 1, n - 1),
                                    b.bottomRightCorner(n - 1, n - 1));
        x = Eigen::VectorXd::Zero(n);
        x.tail(n - 1) = eig.vectors.col(0);
    } else {
        eig = solve_generalized_eig(a, b);
        x = eig.vectors.col(0);
    }

    r.spectrum = eig.values;
    r.V = r.spectrum[0];

    // Reproducible sign: largest-magnitude trace entry positive.
    Eigen::Index imax;
    x.cwiseAbs().maxCoeff(&imax);
    if (x[imax] < 0.0) x = -x;

    r.coeffs = x;
    r.worst_field = expand(basis, x);
    r.worst_trace = x;
    r.worst_traction = edge_tractions(solver, r.worst_field);

    for (int k = 0; k < r.spectrum.size(); ++k)
        if (r.spectrum[k] >= r.V * (1.0 - kClusterTol)) r.degenerate_cluster.push_back(k);
    return r;
}

ConcentrationResult worst_case(const Mesh& mesh, const MaterialField& material) {
    DirichletSolver solver(mesh, material);
    return worst_case(solver);
}

double concentration_of(const DirichletSolver& solver,
                        const Eigen::VectorXd& outer_values) {
    const NodalField u = solver.solve(outer_values);
    const double e_star = solver.energy(u, u, EnergyRegion::omega_star);
    const double scale = std::max(1.0, outer_values.cwiseAbs().maxCoeff());
    if (!(e_star > 1e-28 * scale * scale))
        fail(errc::undefined_ratio, "boundary data has zero elastic energy");
    return solver.energy(u, u, EnergyRegion::omega) / e_star;
}

double concentration_of(const Mesh& mesh, const MaterialField& material,
                        const Eigen::VectorXd& outer_values) {
    DirichletSolver solver(mesh, material);
    return concentration_of(solver, outer_values);
}

}  // namespace worstload
