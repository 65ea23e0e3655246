// decohere: scenario runner.
//   decohere run <scenario> --config <path> [--seed N] [--out DIR]
//   decohere verify <scenario>
//   decohere schema <scenario>
//   decohere list
// Exit codes: 0 success, 1 I/O or usage error, 2 config error, 3 numerical failure.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "decohere/scenarios.hpp"

using namespace decohere;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file '" + path + "'");
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

void print_checks(const ScenarioResult& r) {
    for (const auto& c : r.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const AdmissibilityError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const InvariantError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decoherence scenario runner"};
    app.require_subcommand(1);

    std::string scenario_name, config_path, out_dir;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "run a scenario and write CSV/JSON artifacts with a manifest");
    run->add_option("scenario", scenario_name, "scenario name")->required();
    run->add_option("--config", config_path, "config JSON file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
    run->add_option("--out", out_dir, "output directory (overrides the config)");

    auto* verify = app.add_subcommand("verify", "run a scenario's acceptance checks on its default config");
    verify->add_option("scenario", scenario_name, "scenario name")->required();
    verify->add_option("--out", out_dir, "also write the artifacts here");

    auto* schema = app.add_subcommand("schema", "print the config JSON schema of a scenario");
    schema->add_option("scenario", scenario_name, "scenario name")->required();

    auto* list = app.add_subcommand("list", "list scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitIo;
    }

    if (list->parsed()) {
        for (auto s : all_scenarios()) std::cout << to_string(s) << "\n";
        return 0;
    }

    return guarded([&] {
        const Scenario s = parse_scenario(scenario_name);
        if (schema->parsed()) {
            std::cout << config_schema(s).dump(2) << "\n";
            return 0;
        }
        ScenarioConfig cfg = run->parsed() ? load_config(s, read_json_file(config_path)) : default_config(s);
        if (*seed_opt) cfg.seed = seed;
        if (!out_dir.empty()) cfg.output_dir = out_dir;

        const ScenarioResult result = run_scenario(cfg);
        print_checks(result);
        if (run->parsed() || !out_dir.empty()) {
            write_outputs(cfg, result);
            std::cout << "wrote " << result.files.size() << " files and manifest.json to " << cfg.output_dir.string()
                      << "\n";
        }
        if (!result.all_passed()) {
            for (const auto& c : result.checks)
                if (!c.passed) std::cerr << "numerical failure: check '" << c.name << "' failed: " << c.detail << "\n";
            return kExitNumerical;
        }
        return 0;
    });
}
