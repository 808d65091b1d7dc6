#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "hypmono_cli/commands.hpp"
#include "hypmono_cli/config.hpp"

int main(int argc, char** argv) {
    using namespace hypmono::cli;
    CLI::App app{"Approximate hyperbolic monopoles: gluing, bounds, spectra and the continuity solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::optional<std::uint64_t> seed;
    for (const auto& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "Configuration file")->required();
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Seed for randomized probes (overrides [run] seed)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const ConfigFile cfg = ConfigFile::load(config_path);
        CommandOptions opt;
        opt.out_dir = out_dir;
        opt.seed = seed;
        return run_command(command, cfg, opt, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
