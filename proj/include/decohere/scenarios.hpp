#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "decohere/io.hpp"

namespace decohere {

/// Bad or incomplete scenario configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Scenario {
    ChiralMolecule,
    ChargeSuperselection,
    CatDephasing,
    ExponentialDecay,
    QuantumZeno,
    PointerBasis,
    WignerCat,
};

const std::vector<Scenario>& all_scenarios();
std::string to_string(Scenario s);
/// Accepts the CLI spelling ("cat-dephasing"); throws ConfigError otherwise.
Scenario parse_scenario(const std::string& name);

/// Version of the CSV column layout of each scenario; bumped on breaking changes.
int csv_schema_version(Scenario s);

enum class ParamKind { Number, Integer, Boolean, NumberList, ComplexList, Vec3, Matrix3, Object };

struct ParamSpec {
    std::string name;
    ParamKind kind;
    bool required = false;
    json default_value;  // null: no default (absent stays absent)
    std::string description;
    std::optional<double> minimum;
    std::optional<double> maximum;
    bool exclusive_minimum = false;
    std::vector<ParamSpec> fields;  // for Object
};

const std::vector<ParamSpec>& parameter_specs(Scenario s);

/// Draft-07 JSON schema of a config file for the scenario.
json config_schema(Scenario s);

struct ScenarioConfig {
    Scenario scenario;
    json parameters;  // validated, defaults filled
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
};

/// Accepts {"scenario"?, "seed"?, "output_dir"?, "parameters": {...}}. Unknown
/// keys, missing required parameters, wrong types and out-of-range values throw
/// ConfigError naming the parameter.
ScenarioConfig load_config(Scenario s, const json& document);
ScenarioConfig default_config(Scenario s);

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

struct OutputFile {
    std::string name;
    std::string kind;  // "csv", "json" or "binary"
    std::string content;
};

struct ScenarioResult {
    json report;
    std::vector<OutputFile> files;
    std::vector<Check> checks;

    bool all_passed() const;
};

/// Numerical failures propagate as NumericalError / InvariantError /
/// AdmissibilityError (CLI exit code 3).
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Writes every output plus manifest.json into config.output_dir, each atomically.
json write_outputs(const ScenarioConfig& config, const ScenarioResult& result);

/// Manifest without touching the file system.
json make_manifest(const ScenarioConfig& config, const ScenarioResult& result);

}  // namespace decohere
