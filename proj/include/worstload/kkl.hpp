#pragma once

#include <Eigen/Dense>
#include <vector>

#include "worstload/fem.hpp"

namespace worstload {

enum class ModeFamily { cosine, sine };

/// First `count` positive roots of the transcendental equation of the family
/// for the exponential covariance exp(-|x1-x2|/b) on (-a, a), c = 1/b:
///   cosine: c - gamma tan(gamma a) = 0, root n in ((n-1)pi/a, (n-1/2)pi/a)
///   sine:   gamma + c tan(gamma a) = 0, root n in ((n-1/2)pi/a, n pi/a)
std::vector<double> solve_transcendental(double a, double c, int count,
                                         ModeFamily family);

/// Closed-form KKL eigenpairs for the exponential covariance on (-a, a):
/// mu = 2c/(gamma^2 + c^2) with unit-L2-norm eigenfunctions
///   cos(gamma_n x) / sqrt(a + sin(2 gamma_n a)/(2 gamma_n))
///   sin(gamma'_n x) / sqrt(a - sin(2 gamma'_n a)/(2 gamma'_n)).
struct KklEnsemble {
    double a = 0.0;  // half-length of the interval
    double b = 0.0;  // correlation length
    double c = 0.0;  // 1/b

    std::vector<double> cos_roots, cos_mu, cos_norm;
    std::vector<double> sin_roots, sin_mu, sin_norm;

    int count(ModeFamily f) const {
        return static_cast<int>(f == ModeFamily::cosine ? cos_roots.size()
                                                        : sin_roots.size());
    }
    double mu(ModeFamily f, int n) const {  // n is 1-based
        return f == ModeFamily::cosine ? cos_mu[n - 1] : sin_mu[n - 1];
    }
    double eval(ModeFamily f, int n, double x) const;
};

KklEnsemble build_ensemble(double a, double b, int n_cos, int n_sin);

/// Mode counts under the default truncation rule mu_n / mu_1 >= ratio.
std::pair<int, int> default_truncation(double a, double b, double ratio = 1e-3);

/// Nodal values of the mode on the outer loop via the arc-length coordinate.
Eigen::VectorXd map_to_boundary(const BoundaryParametrization& param,
                                const KklEnsemble& ensemble, ModeFamily family,
                                int index);

struct RandomLoadSpec {
    Eigen::VectorXd gbar;  // mean boundary data, one value per outer loop node
    KklEnsemble ensemble;
};

struct ModeEnergy {
    ModeFamily family;
    int index = 0;  // 1-based within its family
    double mu = 0.0;
    double energy_omega = 0.0;
    double energy_omega_star = 0.0;
};

struct ExpectedConcentration {
    double pbar = 0.0;               // E_N(omega) / E_N(omega*)
    double energy_omega = 0.0;       // E_N(omega)
    double energy_omega_star = 0.0;  // E_N(omega*)
    double mean_energy_omega = 0.0;
    double mean_energy_omega_star = 0.0;
    std::vector<ModeEnergy> modes;
    NodalField mean_field;
};

/// Solves the mean problem and one Dirichlet problem per mapped mode, and
/// combines the energies with weights mu_n. Throws errc::undefined_ratio when
/// the spec carries no energy at all.
ExpectedConcentration expected_concentration(const DirichletSolver& solver,
                                             const RandomLoadSpec& spec);

}  // namespace worstload
