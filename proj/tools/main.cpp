#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "app/manifest.hpp"

int main(int argc, char** argv) {
    using namespace dsf::app;

    CLI::App app{"Dirac fields on de Sitter: mode solver, signature operator and two-point scalars", "dsf"};
    app.set_version_flag("--version", tool_version());
    app.require_subcommand(1);

    // Every flag is captured as text; typing and validation happen in RunConfig
    // so that config-file values and flags follow the same rules.
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;
    app.add_option("--config", config_path, "JSON file of flag values; flags given on the command line win");
    for (const auto& f : global_flags()) {
        options["global:" + f.name] = app.add_option("--" + f.name, values[f.name], f.help);
    }
    std::map<std::string, CLI::App*> subcommands;
    for (const auto& spec : command_specs()) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        sub->fallthrough();
        for (const auto& f : spec.flags) {
            options[spec.name + ":" + f.name] = sub->add_option("--" + f.name, values[f.name], f.help);
        }
        subcommands[spec.name] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    Invocation inv{"", RunConfig{}, std::nullopt};
    for (const auto& [name, sub] : subcommands) {
        if (sub->parsed()) inv.command = name;
    }

    std::map<std::string, std::string> given;
    for (const auto& [key, opt] : options) {
        if (opt->count() == 0) continue;
        const auto colon = key.find(':');
        const std::string scope = key.substr(0, colon);
        if (scope != "global" && scope != inv.command) continue;
        const std::string name = key.substr(colon + 1);
        given[name] = values[name];
    }

    json file_values = json::object();
    if (app.count("--config")) {
        inv.config_file = config_path;
        try {
            file_values = load_config_file(config_path);
        } catch (const dsf::PreconditionError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitConfigError;
        }
    }
    inv.config = RunConfig(std::move(file_values), given);
    return run_command(inv, std::cout, std::cerr);
}
