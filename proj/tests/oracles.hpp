// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace oracles {

// Largest generalized eigenvalue of B x = lambda A x via power iteration on
// A^-1 B with Rayleigh-quotient convergence.
inline double power_iteration_lambda_max(const Eigen::MatrixXd& a,
                                         const Eigen::MatrixXd& b,
                                         unsigned seed = 12345,
                                         int max_iter = 200000,
                                         double tol = 1e-13) {
    const Eigen::LLT<Eigen::MatrixXd> llt(a);
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd x(a.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = gauss(rng);
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        const Eigen::VectorXd y = llt.solve(b * x);
        const double norm = y.norm();
        if (norm == 0.0) return 0.0;
        x = y / norm;
        const double num = x.dot(b * x);
        const double den = x.dot(a * x);
        const double next = num / den;
        if (it > 3 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
            return next;
        }
        lambda = next;
    }
    return lambda;
}

// Max of the generalized Rayleigh quotient over random directions; a lower
// bound on lambda_max that no computed spectrum may fall below.
inline double random_rayleigh_max(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  int samples, unsigned seed = 54321) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd x(a.rows());
    for (int s = 0; s < samples; ++s) {
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = gauss(rng);
        best = std::max(best, x.dot(b * x) / x.dot(a * x));
    }
    return best;
}

// Eigenvalues of the covariance integral operator with kernel
// exp(-|x-y|/b) on (-a, a), by midpoint-rule Nystrom discretization,
// descending.
inline Eigen::VectorXd nystrom_exponential_eigs(double a, double b, int points) {
    const double h = 2.0 * a / points;
    Eigen::MatrixXd k(points, points);
    for (int i = 0; i < points; ++i) {
        const double xi = -a + (i + 0.5) * h;
        for (int j = 0; j < points; ++j) {
            const double xj = -a + (j + 0.5) * h;
            k(i, j) = std::exp(-std::abs(xi - xj) / b) * h;
        }
    }
    k = 0.5 * (k + k.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    return es.eigenvalues().reverse();
}

// Composite Simpson quadrature on [-a, a]; n must be even.
template <typename F>
double simpson(F f, double a, int n = 20000) {
    const double h = 2.0 * a / n;
    double sum = f(-a) + f(a);
    for (int i = 1; i < n; ++i) sum += f(-a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace oracles
