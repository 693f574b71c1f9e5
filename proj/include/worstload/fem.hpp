#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <vector>

#include "worstload/mesh.hpp"

namespace worstload {

using NodalField = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

/// Per-element shear modulus c(x) with user-declared ellipticity bounds.
struct MaterialField {
    std::vector<double> value;
    double lower = 0.0;
    double upper = 0.0;

    static MaterialField uniform(const Mesh& mesh, double c);
    static MaterialField from_tags(const Mesh& mesh, double matrix_c, double inclusion_c);
    void check(const Mesh& mesh) const;  // throws errc::parameter on violation
};

enum class EnergyRegion { omega, omega_star, complement };

/// K with v^T K u = integral over the region of c grad(u) . grad(v).
/// P1 on triangles (exact), Q1 isoparametric with 2x2 Gauss on quads.
SpMat assemble_stiffness(const Mesh& mesh, const MaterialField& material,
                         EnergyRegion region);

/// v^T K_region u. Convenience wrapper that assembles on each call; use
/// DirichletSolver::energy when evaluating many products.
double energy_inner_product(const Mesh& mesh, const MaterialField& material,
                            const NodalField& u, const NodalField& v,
                            EnergyRegion region);

struct ElementDerivatives {
    std::vector<double> grad_mag;    // |grad u| per element
    std::vector<double> stress_mag;  // |c grad u| per element
};

/// Constant gradient on triangles, centroid-evaluated on quads.
std::array<double, 2> element_gradient(const Mesh& mesh, const NodalField& u, int e);

ElementDerivatives gradient_and_stress(const Mesh& mesh, const MaterialField& material,
                                       const NodalField& u);

/// Dirichlet problem div(c grad u) = 0 with data on the outer loop and u = 0
/// on clamped hole loops. Factors the interior block once; every solve and
/// every hat-basis column reuses the factorization.
class DirichletSolver {
  public:
    DirichletSolver(const Mesh& mesh, MaterialField material,
                    double residual_tol = 1e-10);

    const Mesh& mesh() const { return mesh_; }
    const MaterialField& material() const { return material_; }
    const BoundaryParametrization& parametrization() const { return param_; }

    /// Outer nodes in loop order (anchor first); solve() takes one value per
    /// entry of this list.
    const std::vector<int>& outer_nodes() const { return param_.loop; }
    const std::vector<int>& clamped_nodes() const { return clamped_; }

    NodalField solve(const Eigen::VectorXd& outer_values) const;
    /// One solve per column; columns are independent right-hand sides.
    Eigen::MatrixXd solve_many(const Eigen::MatrixXd& outer_values) const;

    const SpMat& stiffness(EnergyRegion region) const;
    double energy(const NodalField& u, const NodalField& v, EnergyRegion region) const;

    /// Max interior residual of K u relative to the stiffness scale.
    double interior_residual(const NodalField& u) const;

  private:
    const Mesh& mesh_;
    MaterialField material_;
    double residual_tol_;
    BoundaryParametrization param_;
    std::vector<int> clamped_;
    std::vector<int> free_;
    std::vector<int> node_class_;  // -1 free, otherwise position in loop / clamped
    SpMat k_star_;
    mutable std::unique_ptr<SpMat> k_omega_;  // lazy
    SpMat k_ff_, k_fb_;                       // interior block, interior x outer
    Eigen::SimplicialLDLT<SpMat> factor_;
    double k_scale_ = 0.0;  // max |K| entry, for residual scaling
};

}  // namespace worstload
