#pragma once

#include <Eigen/Dense>

#include "worstload/fem.hpp"
#include "worstload/harmonic_basis.hpp"

namespace worstload {

/// Relative width of the eigenvalue cluster treated as degenerate with the
/// maximum (the worst-case field is then not unique).
inline constexpr double kClusterTol = 1e-6;

struct ConcentrationResult {
    Eigen::VectorXd spectrum;  // descending; size n, or n-1 on grounded meshes
    double V = 0.0;            // spectrum[0]
    Eigen::VectorXd coeffs;    // n basis coefficients, x^T A x = 1
    NodalField worst_field;    // expand(basis, coeffs); energy over omega* = 1
    Eigen::VectorXd worst_trace;     // per outer node, loop order (= coeffs)
    Eigen::VectorXd worst_traction;  // per outer edge i: loop[i] -> loop[i+1]
    std::vector<int> degenerate_cluster;  // spectrum indices within kClusterTol of V
    bool grounded = false;  // no clamped holes: pencil grounded at the anchor hat
};

/// M_ij = (psi_i, psi_j) in the region energy product; symmetrized on output.
Eigen::MatrixXd assemble_gram(const DirichletSolver& solver, const HarmonicBasis& basis,
                              EnergyRegion region);

struct GeneralizedEig {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // columns, A-orthonormal
};

/// lambda A x = B x by Cholesky reduction: A = U^T U, C = U^-T B U^-1,
/// standard symmetric eigensolve of C, then back-substitution U x = y.
/// Throws errc::solver naming the failing pivot when A is not positive
/// definite.
GeneralizedEig solve_generalized_eig(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

ConcentrationResult worst_case(const DirichletSolver& solver);
ConcentrationResult worst_case(const Mesh& mesh, const MaterialField& material);

/// P(g) = energy over omega / energy over omega* for the Dirichlet solution
/// with the given outer data. Throws errc::undefined_ratio when the data has
/// zero elastic energy.
double concentration_of(const DirichletSolver& solver,
                        const Eigen::VectorXd& outer_values);
double concentration_of(const Mesh& mesh, const MaterialField& material,
                        const Eigen::VectorXd& outer_values);

}  // namespace worstload
