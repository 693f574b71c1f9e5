#pragma once

#include <Eigen/Dense>

#include "worstload/fem.hpp"

namespace worstload {

/// Discrete solutions of div(c grad psi) = 0, one per outer node, driven by
/// the hat function at that node and clamped on hole boundaries. Column i of
/// fields is psi_i; its center is outer node i in loop order.
struct HarmonicBasis {
    Eigen::MatrixXd fields;    // node_count x n
    std::vector<int> centers;  // outer node of column i

    int size() const { return static_cast<int>(fields.cols()); }
};

/// Estimated storage for the basis of a given problem, in bytes.
std::size_t basis_storage_bytes(const DirichletSolver& solver);

HarmonicBasis build_basis(const DirichletSolver& solver);

/// Linear combination sum_i coeffs[i] * psi_i. Its outer trace is the
/// piecewise-linear boundary function with nodal values = coeffs.
NodalField expand(const HarmonicBasis& basis, const Eigen::VectorXd& coeffs);

}  // namespace worstload
