// wsnsis: SIS spreading on sleep-scheduled sensor networks.
//
//   wsnsis <command> [--config FILE] [--out DIR] [--beta X] ...
//
// Commands: generate-graph run-mmc run-mc temporal sweep-beta sweep-gamma
// sweep-ratio threshold. Flags override values from the config file.

#include "wsnsis/config.hpp"
#include "wsnsis/error.hpp"
#include "wsnsis/execute.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw wsnsis::ValidationError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIS epidemic spreading on wireless sensor networks with sleep scheduling"};
    app.set_version_flag("--version", std::string(wsnsis::kVersion));

    std::string command;
    std::string config_path;
    app.add_option("command", command,
                   "generate-graph | run-mmc | run-mc | temporal | sweep-beta | sweep-gamma | sweep-ratio | threshold");
    app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);

    // Flag name, config section, config key. Values stay strings so the
    // config parser does all validation and reports every error the same way.
    struct FlagDef {
        const char* flag;
        const char* section;
        const char* key;
        const char* help;
    };
    const FlagDef defs[] = {
        {"--out", "output", "dir", "output directory"},
        {"--jobs", "output", "jobs", "worker threads"},
        {"--graph", "graph", "file", "edge-list file instead of a generated graph"},
        {"--graph-seed", "graph", "seed", "Price graph seed"},
        {"--n", "graph", "n", "node count"},
        {"--m", "graph", "m", "links per new node"},
        {"--sim-seed", "run", "sim_seed", "simulation base seed"},
        {"--beta", "model", "beta", "infection probability"},
        {"--gamma", "model", "gamma", "recovery probability"},
        {"--u", "model", "u", "active -> sleep probability"},
        {"--v", "model", "v", "sleep -> active probability"},
        {"--runs", "run", "runs", "ensemble size"},
        {"--steps", "run", "steps", "simulation horizon"},
        {"--seeds", "run", "seeds", "initially infected nodes"},
        {"--init-active", "run", "init_active", "stationary | all_active"},
        {"--beta-grid", "sweep", "beta_grid", "comma-separated beta values"},
        {"--simulate", "sweep", "simulate", "true | false: run Monte Carlo in sweeps"},
    };
    std::vector<std::optional<std::string>> values(std::size(defs));
    for (std::size_t i = 0; i < std::size(defs); ++i) app.add_option(defs[i].flag, values[i], defs[i].help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? wsnsis::kExitOk : wsnsis::kExitValidation;
    }

    try {
        std::vector<wsnsis::Override> overrides;
        if (!command.empty()) overrides.push_back({"general", "command", command});
        for (std::size_t i = 0; i < std::size(defs); ++i) {
            if (values[i]) overrides.push_back({defs[i].section, defs[i].key, *values[i]});
        }
        const std::string text = config_path.empty() ? std::string() : read_text(config_path);
        const wsnsis::ExperimentSpec spec = wsnsis::parse_config(text, overrides);
        return wsnsis::execute(spec, std::cout, std::cerr);
    } catch (const wsnsis::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return wsnsis::kExitValidation;
    }
}
