#include "worstload/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "worstload/vtk.hpp"

namespace worstload {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Session {
    RunConfig cfg;
    // heap-held so the solver's mesh reference survives moves of the Session
    std::unique_ptr<Mesh> mesh;
    MaterialField material;
    std::unique_ptr<DirichletSolver> solver;
    std::chrono::steady_clock::time_point start;
};

Session open_session(const RunConfig& cfg) {
    Session s;
    s.start = std::chrono::steady_clock::now();
    s.cfg = cfg;
    s.mesh = std::make_unique<Mesh>(build_mesh(cfg));
    s.material = MaterialField::from_tags(*s.mesh, cfg.matrix_modulus,
                                          cfg.inclusion_modulus);
    s.solver = std::make_unique<DirichletSolver>(*s.mesh, s.material, cfg.residual_tol);

    const double mb = static_cast<double>(basis_storage_bytes(*s.solver)) / (1 << 20);
    if (mb > cfg.memory_budget_mb)
        std::cerr << "warning: harmonic basis needs about " << fmt(mb)
                  << " MB, over the budget of " << fmt(cfg.memory_budget_mb)
                  << " MB\n";
    fs::create_directories(cfg.out_dir);
    return s;
}

double elapsed(const Session& s) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - s.start)
        .count();
}

std::ofstream open_out(const Session& s, const std::string& name) {
    const fs::path p = fs::path(s.cfg.out_dir) / name;
    std::ofstream out(p);
    if (!out) fail(errc::io, "cannot write " + p.string());
    return out;
}

void fill_mesh_stats(Report& r, const Session& s) {
    r.nodes = static_cast<int>(s.mesh->nodes.size());
    r.elements = s.mesh->element_count();
    r.outer_nodes = static_cast<int>(s.solver->outer_nodes().size());
    r.clamped_loops =
        static_cast<int>(boundary_loops(*s.mesh, BoundaryTag::inner_clamped).size());
    r.half_perimeter = s.solver->parametrization().half_length;
    r.note = s.cfg.note;
}

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void write_mesh_stats_txt(std::ofstream& out, const Report& r) {
    out << "mesh: " << r.nodes << " nodes, " << r.elements << " elements, "
        << r.outer_nodes << " outer nodes, " << r.clamped_loops << " clamped loops\n";
    out << "half perimeter a = " << fmt(r.half_perimeter) << "\n";
    if (!r.note.empty()) out << "note: " << r.note << "\n";
}

void write_mesh_stats_csv(std::ofstream& out, const Report& r) {
    out << "nodes," << r.nodes << "\n";
    out << "elements," << r.elements << "\n";
    out << "outer_nodes," << r.outer_nodes << "\n";
    out << "clamped_loops," << r.clamped_loops << "\n";
    out << "half_perimeter," << fmt(r.half_perimeter) << "\n";
}

void write_worst_outputs(const Session& s, const ConcentrationResult& c, Report& r) {
    r.V = clamp01(c.V);
    r.spectrum = c.spectrum.unaryExpr([](double v) { return clamp01(v); });
    r.cluster_size = static_cast<int>(c.degenerate_cluster.size());
    r.grounded = c.grounded;

    {
        auto out = open_out(s, "spectrum.csv");
        out << "k,lambda_k\n";
        for (int k = 0; k < r.spectrum.size(); ++k)
            out << (k + 1) << "," << fmt(r.spectrum[k]) << "\n";
    }
    {
        auto out = open_out(s, "worst_report.csv");
        out << "quantity,value\n";
        out << "V," << fmt(*r.V) << "\n";
        out << "n_basis," << c.coeffs.size() << "\n";
        out << "degenerate_cluster," << r.cluster_size << "\n";
        out << "grounded," << (r.grounded ? 1 : 0) << "\n";
        write_mesh_stats_csv(out, r);
    }
    {
        auto out = open_out(s, "worst_report.txt");
        out << "worst-case energy concentration report\n";
        write_mesh_stats_txt(out, r);
        out << "V = " << fmt(*r.V) << "\n";
        if (r.grounded)
            out << "pencil grounded at the anchor node (no clamped holes)\n";
        if (r.cluster_size > 1)
            out << "degenerate cluster of size " << r.cluster_size
                << ": the worst-case field is not unique\n";
        out << "spectrum head:";
        for (int k = 0; k < std::min<Eigen::Index>(8, r.spectrum.size()); ++k)
            out << " " << fmt(r.spectrum[k]);
        out << "\n";
        out << "decay lambda_k/V at k = 2, 4, 8, 16:";
        for (int k : {2, 4, 8, 16})
            if (k <= r.spectrum.size())
                out << " " << fmt(r.spectrum[k - 1] / std::max(1e-300, *r.V));
        out << "\n";
        out << "timing: " << elapsed(s) << " s\n";
    }
    {
        const auto& param = s.solver->parametrization();
        auto out = open_out(s, "worst_trace.csv");
        out << "s,node,gtilde\n";
        for (int i = 0; i < param.size(); ++i)
            out << fmt(param.arc[i]) << "," << param.loop[i] << ","
                << fmt(c.worst_trace[i]) << "\n";
        auto out2 = open_out(s, "worst_traction.csv");
        out2 << "s_mid,edge,ttilde\n";
        for (int i = 0; i < param.size(); ++i)
            out2 << fmt(param.arc[i] + 0.5 * param.edge_length[i]) << "," << i << ","
                 << fmt(c.worst_traction[i]) << "\n";
    }
    const auto d = gradient_and_stress(*s.mesh, s.material, c.worst_field);
    write_vtk_point_scalar(*s.mesh, c.worst_field, "u_tilde",
                           (fs::path(s.cfg.out_dir) / "worst_u.vtk").string());
    write_vtk_cell_scalar(*s.mesh, d.grad_mag, "strain",
                          (fs::path(s.cfg.out_dir) / "worst_strain.vtk").string());
    write_vtk_cell_scalar(*s.mesh, d.stress_mag, "stress",
                          (fs::path(s.cfg.out_dir) / "worst_stress.vtk").string());
}

RandomLoadSpec make_load_spec(const Session& s) {
    const auto& param = s.solver->parametrization();
    RandomLoadSpec spec;
    spec.gbar = Eigen::VectorXd::Zero(param.size());
    for (int i = 0; i < param.size(); ++i)
        for (const GbarSegment& seg : s.cfg.gbar)
            if (param.arc[i] >= seg.s0 && param.arc[i] < seg.s1)
                spec.gbar[i] = seg.value;

    int n_cos = s.cfg.n_cos, n_sin = s.cfg.n_sin;
    if (n_cos < 0 || n_sin < 0) {
        const auto [dc, ds] =
            default_truncation(param.half_length, s.cfg.correlation_length);
        if (n_cos < 0) n_cos = dc;
        if (n_sin < 0) n_sin = ds;
    }
    spec.ensemble =
        build_ensemble(param.half_length, s.cfg.correlation_length, n_cos, n_sin);
    return spec;
}

void write_kkl_outputs(const Session& s, const RandomLoadSpec& spec,
                       const ExpectedConcentration& e, Report& r) {
    r.pbar = e.pbar;
    r.energy_omega = e.energy_omega;
    r.energy_omega_star = e.energy_omega_star;
    r.mean_energy_omega = e.mean_energy_omega;
    r.mean_energy_omega_star = e.mean_energy_omega_star;
    r.n_cos = spec.ensemble.count(ModeFamily::cosine);
    r.n_sin = spec.ensemble.count(ModeFamily::sine);
    r.modes = e.modes;

    {
        auto out = open_out(s, "modes.csv");
        out << "family,n,mu,energy_omega,energy_omegastar\n";
        for (const ModeEnergy& m : e.modes)
            out << (m.family == ModeFamily::cosine ? "cos" : "sin") << "," << m.index
                << "," << fmt(m.mu) << "," << fmt(m.energy_omega) << ","
                << fmt(m.energy_omega_star) << "\n";
    }

    // Comparison against an existing worst-case run in the same directory.
    std::optional<double> v_existing = r.V;
    if (!v_existing) {
        std::ifstream in(fs::path(s.cfg.out_dir) / "worst_report.csv");
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.rfind("V,", 0) == 0) {
                v_existing = std::stod(line.substr(2));
                break;
            }
        }
    }

    {
        auto out = open_out(s, "kkl_report.csv");
        out << "quantity,value\n";
        out << "pbar," << fmt(e.pbar) << "\n";
        out << "energy_omega," << fmt(e.energy_omega) << "\n";
        out << "energy_omegastar," << fmt(e.energy_omega_star) << "\n";
        out << "mean_energy_omega," << fmt(e.mean_energy_omega) << "\n";
        out << "mean_energy_omegastar," << fmt(e.mean_energy_omega_star) << "\n";
        out << "b," << fmt(s.cfg.correlation_length) << "\n";
        out << "n_cos," << r.n_cos << "\n";
        out << "n_sin," << r.n_sin << "\n";
        if (v_existing) {
            out << "V," << fmt(*v_existing) << "\n";
            out << "pbar_over_V," << fmt(e.pbar / *v_existing) << "\n";
        }
        write_mesh_stats_csv(out, r);
    }
    {
        auto out = open_out(s, "kkl_report.txt");
        out << "expected energy concentration report\n";
        write_mesh_stats_txt(out, r);
        out << "correlation length b = " << fmt(s.cfg.correlation_length)
            << ", modes: " << r.n_cos << " cosine + " << r.n_sin << " sine\n";
        out << "P_bar_N = " << fmt(e.pbar) << "\n";
        out << "E_N(omega) = " << fmt(e.energy_omega)
            << ", E_N(omega*) = " << fmt(e.energy_omega_star) << "\n";
        if (v_existing)
            out << "V = " << fmt(*v_existing)
                << ", P_bar_N / V = " << fmt(e.pbar / *v_existing) << "\n";
        out << "timing: " << elapsed(s) << " s\n";
    }

    if (e.mean_energy_omega_star > 0.0) {
        const NodalField mean_unit =
            e.mean_field / std::sqrt(e.mean_energy_omega_star);
        const auto d = gradient_and_stress(*s.mesh, s.material, mean_unit);
        write_vtk_point_scalar(*s.mesh, mean_unit, "u_bar",
                               (fs::path(s.cfg.out_dir) / "mean_u.vtk").string());
        write_vtk_cell_scalar(*s.mesh, d.grad_mag, "strain",
                              (fs::path(s.cfg.out_dir) / "mean_strain.vtk").string());
        write_vtk_cell_scalar(*s.mesh, d.stress_mag, "stress",
                              (fs::path(s.cfg.out_dir) / "mean_stress.vtk").string());
    }
}

}  // namespace

Report run_worst_case(const RunConfig& config) {
    Session s = open_session(config);
    Report r;
    fill_mesh_stats(r, s);
    const ConcentrationResult c = worst_case(*s.solver);
    write_worst_outputs(s, c, r);
    r.seconds = elapsed(s);
    return r;
}

Report run_kkl(const RunConfig& config) {
    Session s = open_session(config);
    Report r;
    fill_mesh_stats(r, s);
    const RandomLoadSpec spec = make_load_spec(s);
    const ExpectedConcentration e = expected_concentration(*s.solver, spec);
    write_kkl_outputs(s, spec, e, r);
    r.seconds = elapsed(s);
    return r;
}

Report run_compare(const RunConfig& config) {
    Session s = open_session(config);
    Report r;
    fill_mesh_stats(r, s);

    const ConcentrationResult c = worst_case(*s.solver);
    write_worst_outputs(s, c, r);
    const RandomLoadSpec spec = make_load_spec(s);
    const ExpectedConcentration e = expected_concentration(*s.solver, spec);
    write_kkl_outputs(s, spec, e, r);

    const double ratio = *r.pbar / *r.V;
    const bool inequality_ok = *r.pbar <= *r.V + 1e-8;
    {
        auto out = open_out(s, "compare_report.csv");
        out << "quantity,value\n";
        out << "V," << fmt(*r.V) << "\n";
        out << "pbar," << fmt(*r.pbar) << "\n";
        out << "pbar_over_V," << fmt(ratio) << "\n";
        out << "inequality_ok," << (inequality_ok ? 1 : 0) << "\n";
        write_mesh_stats_csv(out, r);
    }
    {
        auto out = open_out(s, "compare_report.txt");
        out << "worst-case vs expected concentration\n";
        write_mesh_stats_txt(out, r);
        out << "V = " << fmt(*r.V) << "\n";
        out << "P_bar_N = " << fmt(*r.pbar) << "\n";
        out << "P_bar_N / V = " << fmt(ratio) << "\n";
        out << "inequality P_bar_N <= V: " << (inequality_ok ? "holds" : "VIOLATED")
            << "\n";
        out << "spectrum head:";
        for (int k = 0; k < std::min<Eigen::Index>(8, r.spectrum.size()); ++k)
            out << " " << fmt(r.spectrum[k]);
        out << "\n";
        out << "timing: " << elapsed(s) << " s\n";
    }
    r.seconds = elapsed(s);
    return r;
}

}  // namespace worstload
