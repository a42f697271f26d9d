// eigenrank <command> --config <path> [--out <dir>] [--threads N]
//
// Exit codes: 0 success, 1 a check or computation failed, 2 usage or config
// error.

#include "eigenrank/error.h"
#include "eigenrank/pipeline.h"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <Eigen/Core>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char **argv) {
    CLI::App app{"Eigenfunction-product rank experiments"};
    app.require_subcommand(1);
    std::string config_path, out_dir, command;
    int threads = 0;

    const std::pair<const char *, const char *> commands[] = {
        {"spectrum", "lowest eigenpairs of L and the Laplacian"},
        {"rank-scan", "cutoff, empirical and oracle ranks over the (n, eps) sweep"},
        {"tail-curves", "per-pair and max-pair tail curves"},
        {"eri-bench", "exact versus fitted Coulomb integrals"},
        {"verify-all", "every output plus the full invariant suite"},
    };
    for (const auto &[name, help] : commands) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file or preset:<name>")
            ->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    eigenrank::ExperimentConfig config;
    try {
        config = config_path.rfind("preset:", 0) == 0
                     ? eigenrank::preset(config_path.substr(7))
                     : eigenrank::load_config(config_path);
    } catch (const eigenrank::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!out_dir.empty())
        config.output_dir = out_dir;

    if (threads > 0) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#endif
        Eigen::setNbThreads(threads);
    }

    try {
        eigenrank::Experiment experiment(config);
        const auto result = eigenrank::run(experiment, eigenrank::command_from_string(command),
                                           config.output_dir);
        for (const auto &check : result.checks)
            std::cout << (check.passed ? "pass " : "FAIL ") << check.name << "  value "
                      << check.value << "  limit " << check.limit << "\n";
        for (const auto &file : result.files)
            std::cout << "wrote " << file.string() << "\n";
        return result.exit_code;
    } catch (const eigenrank::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: [pipeline] " << e.what() << "\n";
        return 1;
    }
}
