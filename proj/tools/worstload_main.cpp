#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdlib>
#include <iostream>

#include "worstload/runner.hpp"

using namespace worstload;

int main(int argc, char** argv) {
    CLI::App app{"worst-case and expected boundary-load energy concentration"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string mesh_path;
    int threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--mesh", mesh_path, "mesh file (overrides config)");
        sub->add_option("--threads", threads, "worker threads for dense kernels");
    };

    CLI::App* worst = app.add_subcommand("worst", "solve the concentration eigenproblem");
    CLI::App* kkl = app.add_subcommand("kkl", "expected concentration of the random ensemble");
    CLI::App* compare = app.add_subcommand("compare", "both, with the inequality check");
    add_common(worst);
    add_common(kkl);
    add_common(compare);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = parse_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        else if (const char* env = std::getenv("WORSTLOAD_OUT"); env && *env)
            cfg.out_dir = env;
        if (!mesh_path.empty()) {
            cfg.source = MeshSource::file;
            cfg.mesh_path = mesh_path;
        }
        cfg.threads = threads;
        Eigen::setNbThreads(threads);

        Report r;
        if (worst->parsed()) r = run_worst_case(cfg);
        else if (kkl->parsed()) r = run_kkl(cfg);
        else r = run_compare(cfg);

        if (r.V) std::cout << "V = " << *r.V << "\n";
        if (r.pbar) std::cout << "P_bar_N = " << *r.pbar << "\n";
        if (r.V && r.pbar) std::cout << "P_bar_N / V = " << *r.pbar / *r.V << "\n";
        std::cout << "reports written to " << cfg.out_dir << "\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Error::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
