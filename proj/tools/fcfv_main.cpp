#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fcfv/study.hpp"

namespace {

int run(const std::string& command, const std::string& config_path, const std::string& out_dir)
{
    fcfv::StudyConfig cfg;
    try {
        cfg = fcfv::load_config(config_path);
        if (!out_dir.empty()) cfg.output = out_dir;
        if (command == "tau-sweep" && cfg.tau_sweep.empty())
            throw fcfv::ConfigError("config: tau-sweep needs a nonempty 'tau_sweep'");
    } catch (const fcfv::Error& e) {
        std::cerr << "fcfv: invalid config: " << e.what() << '\n';
        return 2;
    }

    std::filesystem::create_directories(cfg.output);
    if (command == "solve") {
        const auto summary = fcfv::run_single(cfg);
        const std::string text = summary.dump(2);
        std::ofstream(cfg.output / "summary.json") << text << '\n';
        std::cout << text << '\n';
        return summary["status"] == "ok" ? 0 : 1;
    }
    const auto table = command == "converge" ? fcfv::run_convergence(cfg) : fcfv::run_tau_sweep(cfg);
    const std::string csv = fcfv::to_csv(table);
    std::ofstream(cfg.output / (command == "converge" ? "convergence.csv" : "tau_sweep.csv")) << csv;
    std::cout << csv;
    for (const auto& r : table.rows)
        if (r.status != "ok") return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Face-centred finite volume solver for Poisson and Stokes problems"};
    app.require_subcommand(1);
    std::string config, out;
    for (const char* name : {"solve", "converge", "tau-sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "Study configuration (JSON)")->required();
        sub->add_option("--out", out, "Output directory (overrides the config)");
    }
    app.get_subcommand("solve")->description("Solve one mesh and print a JSON summary");
    app.get_subcommand("converge")->description("Convergence study over the configured levels");
    app.get_subcommand("tau-sweep")->description("Errors against the stabilisation parameter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, config, out);
    } catch (const fcfv::ConfigError& e) {
        std::cerr << "fcfv: invalid config: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fcfv: " << e.what() << '\n';
        return 1;
    }
}
