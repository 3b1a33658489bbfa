#include <CLI11.hpp>
#include <Eigen/Core>

#include <iostream>

#include "hklab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hklab: heat-kernel and Hardy-inequality laboratory for singular "
                 "and degenerate diffusion operators on bounded domains"};
    app.require_subcommand(1);

    hklab::CliOptions opts;
    const std::vector<std::string> commands = {"eig",  "kernel",  "green",  "harnack", "hardy",
                                               "poincare", "moser", "volume", "logsob", "certify"};
    std::vector<CLI::App*> subs;
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "JSON run configuration")->required();
        sub->add_option("--out", opts.out_dir, "output directory (overrides config)");
        sub->add_option("--threads", opts.threads, "worker threads for linear algebra");
        sub->add_option("--budget", opts.budget_seconds, "time budget in seconds (certify)");
        sub->add_option("--cache-dir", opts.cache_dir, "spectral cache directory");
        sub->add_flag("--no-cache", opts.no_cache, "disable the spectral cache");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (opts.threads > 0) Eigen::setNbThreads(opts.threads);

    for (std::size_t i = 0; i < commands.size(); ++i)
        if (subs[i]->parsed()) return hklab::run_command(commands[i], opts, std::cout);
    std::cerr << "no command selected\n";
    return 2;
}
