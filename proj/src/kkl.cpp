#include "worstload/kkl.hpp"

#include <algorithm>
#include <cmath>

namespace worstload {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Both equations are multiplied through by cos(gamma a) so they stay finite
// across the tan poles at the bracket endpoints:
//   cosine: f = c cos(ga) - g sin(ga)
//   sine:   f = g cos(ga) + c sin(ga)
double eval_f(double g, double a, double c, ModeFamily fam) {
    return fam == ModeFamily::cosine ? c * std::cos(g * a) - g * std::sin(g * a)
                                     : g * std::cos(g * a) + c * std::sin(g * a);
}

double eval_df(double g, double a, double c, ModeFamily fam) {
    const double s = std::sin(g * a), co = std::cos(g * a);
    return fam == ModeFamily::cosine ? -c * a * s - s - g * a * co
                                     : co - g * a * s + c * a * co;
}

}  // namespace

std::vector<double> solve_transcendental(double a, double c, int count,
                                         ModeFamily family) {
    if (!(a > 0.0) || !(c > 0.0)) fail(errc::parameter, "need a > 0 and c > 0");
    if (count < 1) fail(errc::parameter, "root count must be at least 1");

    std::vector<double> roots;
    roots.reserve(count);
    for (int n = 1; n <= count; ++n) {
        double lo = family == ModeFamily::cosine ? (n - 1) * kPi / a
                                                 : (n - 0.5) * kPi / a;
        double hi = family == ModeFamily::cosine ? (n - 0.5) * kPi / a
                                                 : n * kPi / a;
        // nudge off the pole/zero endpoints
        const double eps = 1e-14 * hi;
        lo += eps;
        hi -= eps;

        double flo = eval_f(lo, a, c, family);
        double g = 0.5 * (lo + hi);
        // bisection to ~1e-14 relative bracket width, then Newton polish
        for (int it = 0; it < 80 && (hi - lo) > 1e-15 * g; ++it) {
            g = 0.5 * (lo + hi);
            const double fg = eval_f(g, a, c, family);
            if ((fg > 0) == (flo > 0)) {
                lo = g;
                flo = fg;
            } else {
                hi = g;
            }
        }
        for (int it = 0; it < 4; ++it) {
            const double fg = eval_f(g, a, c, family);
            const double dfg = eval_df(g, a, c, family);
            if (dfg == 0.0) break;
            const double step = fg / dfg;
            const double next = g - step;
            if (next <= lo || next >= hi) break;  // keep the bracket
            g = next;
        }
        const double scale = c + g;  // magnitude of the two terms of f
        if (!(std::abs(eval_f(g, a, c, family)) <= 1e-12 * scale))
            fail(errc::solver, "transcendental root refinement stalled at n = " +
                                   std::to_string(n));
        roots.push_back(g);
    }
    return roots;
}

double KklEnsemble::eval(ModeFamily f, int n, double x) const {
    if (n < 1 || n > count(f)) fail(errc::parameter, "mode index outside truncation");
    if (f == ModeFamily::cosine) return std::cos(cos_roots[n - 1] * x) * cos_norm[n - 1];
    return std::sin(sin_roots[n - 1] * x) * sin_norm[n - 1];
}

KklEnsemble build_ensemble(double a, double b, int n_cos, int n_sin) {
    if (!(a > 0.0) || !(b > 0.0)) fail(errc::parameter, "need a > 0 and b > 0");
    if (n_cos < 0 || n_sin < 0) fail(errc::parameter, "mode counts must be >= 0");
    KklEnsemble e;
    e.a = a;
    e.b = b;
    e.c = 1.0 / b;
    if (n_cos > 0) {
        e.cos_roots = solve_transcendental(a, e.c, n_cos, ModeFamily::cosine);
        for (double g : e.cos_roots) {
            e.cos_mu.push_back(2.0 * e.c / (g * g + e.c * e.c));
            e.cos_norm.push_back(1.0 / std::sqrt(a + std::sin(2.0 * g * a) / (2.0 * g)));
        }
    }
    if (n_sin > 0) {
        e.sin_roots = solve_transcendental(a, e.c, n_sin, ModeFamily::sine);
        for (double g : e.sin_roots) {
            e.sin_mu.push_back(2.0 * e.c / (g * g + e.c * e.c));
            e.sin_norm.push_back(1.0 / std::sqrt(a - std::sin(2.0 * g * a) / (2.0 * g)));
        }
    }
    return e;
}

std::pair<int, int> default_truncation(double a, double b, double ratio) {
    const double c = 1.0 / b;
    const double mu1 = 2.0 * c / (solve_transcendental(a, c, 1, ModeFamily::cosine)[0] *
                                      solve_transcendental(a, c, 1, ModeFamily::cosine)[0] +
                                  c * c);
    auto count_family = [&](ModeFamily fam) {
        int n = 0;
        for (int batch = 8;; batch *= 2) {
            const auto roots = solve_transcendental(a, c, batch, fam);
            n = 0;
            for (double g : roots) {
                const double mu = 2.0 * c / (g * g + c * c);
                if (mu / mu1 >= ratio) ++n;
            }
            if (n < batch) return n;
            if (batch > 4096) return n;  // defensive cap
        }
    };
    return {count_family(ModeFamily::cosine), count_family(ModeFamily::sine)};
}

Eigen::VectorXd map_to_boundary(const BoundaryParametrization& param,
                                const KklEnsemble& ensemble, ModeFamily family,
                                int index) {
    const int n = param.size();
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = ensemble.eval(family, index, param.arc[i]);
    return v;
}

ExpectedConcentration expected_concentration(const DirichletSolver& solver,
                                             const RandomLoadSpec& spec) {
    const BoundaryParametrization& param = solver.parametrization();
    const int nb = param.size();
    if (spec.gbar.size() != nb)
        fail(errc::parameter, "gbar must have one value per outer node");
    const KklEnsemble& ens = spec.ensemble;
    const int nc = ens.count(ModeFamily::cosine);
    const int ns = ens.count(ModeFamily::sine);
    const bool has_mean = spec.gbar.cwiseAbs().maxCoeff() > 0.0;
    if (!has_mean && nc + ns == 0)
        fail(errc::undefined_ratio, "random load spec carries no energy");

    // All mode solves share one factorization; order: mean, cosines, sines.
    Eigen::MatrixXd data(nb, (has_mean ? 1 : 0) + nc + ns);
    int col = 0;
    if (has_mean) data.col(col++) = spec.gbar;
    for (int n = 1; n <= nc; ++n)
        data.col(col++) = map_to_boundary(param, ens, ModeFamily::cosine, n);
    for (int n = 1; n <= ns; ++n)
        data.col(col++) = map_to_boundary(param, ens, ModeFamily::sine, n);
    const Eigen::MatrixXd fields = solver.solve_many(data);

    const SpMat& k_star = solver.stiffness(EnergyRegion::omega_star);
    const SpMat& k_omega = solver.stiffness(EnergyRegion::omega);

    ExpectedConcentration out;
    out.modes.reserve(nc + ns);
    col = 0;
    if (has_mean) {
        out.mean_field = fields.col(col);
        out.mean_energy_omega = out.mean_field.dot(k_omega * out.mean_field);
        out.mean_energy_omega_star = out.mean_field.dot(k_star * out.mean_field);
        ++col;
    } else {
        out.mean_field = NodalField::Zero(solver.mesh().nodes.size());
    }
    double num = out.mean_energy_omega;
    double den = out.mean_energy_omega_star;
    for (int pass = 0; pass < 2; ++pass) {
        const ModeFamily fam = pass == 0 ? ModeFamily::cosine : ModeFamily::sine;
        const int cnt = pass == 0 ? nc : ns;
        for (int n = 1; n <= cnt; ++n, ++col) {
            ModeEnergy me;
            me.family = fam;
            me.index = n;
            me.mu = ens.mu(fam, n);
            const NodalField u = fields.col(col);
            me.energy_omega = u.dot(k_omega * u);
            me.energy_omega_star = u.dot(k_star * u);
            num += me.mu * me.energy_omega;
            den += me.mu * me.energy_omega_star;
            out.modes.push_back(me);
        }
    }
    if (!(den > 0.0))
        fail(errc::undefined_ratio, "expected total energy is zero");
    out.energy_omega = num;
    out.energy_omega_star = den;
    out.pbar = num / den;
    return out;
}

}  // namespace worstload
