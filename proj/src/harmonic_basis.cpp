#include "worstload/harmonic_basis.hpp"

namespace worstload {

std::size_t basis_storage_bytes(const DirichletSolver& solver) {
    return sizeof(double) * solver.mesh().nodes.size() * solver.outer_nodes().size();
}

HarmonicBasis build_basis(const DirichletSolver& solver) {
    const int n = static_cast<int>(solver.outer_nodes().size());
    if (n < 3) fail(errc::parameter, "basis needs at least 3 outer nodes");
    HarmonicBasis basis;
    basis.centers = solver.outer_nodes();
    basis.fields = solver.solve_many(Eigen::MatrixXd::Identity(n, n));
    return basis;
}

NodalField expand(const HarmonicBasis& basis, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != basis.fields.cols())
        fail(errc::parameter, "coefficient count does not match basis dimension");
    return basis.fields * coeffs;
}

}  // namespace worstload
