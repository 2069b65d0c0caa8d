#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "opg/types.hpp"

namespace opg::scenario {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PumpDescriptor {
    std::string kind;  // coherent | thermal | displaced_thermal |
                       // phase_sensitive_noisy_coherent | dephased_coherent |
                       // phase_averaged_coherent | kerr_coherent |
                       // kerr_displaced_thermal
    double alpha0 = 0.0, theta0 = 0.0;
    double nbar = 0.0, nbar1 = 0.0, nbar2 = 0.0, phi = 0.0;
    double dtheta = 0.0;
    double kerr = 0.0;
    std::string route;  // kerr pumps: "phase_series" (default) or "husimi_grid"
};

struct Sweep {
    std::string variable;  // gt | gt_alpha0 | kerr | delta_theta | nbar
    double from = 0.0, to = 0.0, step = 1.0;
};

struct GridRequest {
    int n = 400;
    double r_max = 0.0;  // 0: use the pump's radial bound
};

struct Scenario {
    std::string name;
    std::string type = "sweep";  // sweep | phase_curve | p_grid | schmidt | oracle_compare
    PumpDescriptor pump;
    std::string engine = "gpa";  // perturbative | gpa | oracle
    double gt = 0.0;             // base value when the sweep does not drive gt
    Sweep sweep;
    std::vector<std::string> outputs;  // negativity | linear_entropy | var2dX | squeezing_db
    double tol = 1e-9;
    int cutoff = 1;
    GridRequest grid;
};

struct ScenarioTiming {
    std::string name;
    double seconds = 0.0;
    bool validity_all_ok = true;
    double exp_condition = 0.0;
};

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 2 config error, 3 numerical failure
    std::string detail;
    std::vector<ScenarioTiming> timings;
};

std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
std::vector<Scenario> preset(const std::string& name);

/// Parses and validates the JSON config text (throws ConfigError).
std::vector<Scenario> parse_config(const std::string& json_text);

/// Canonical JSON of a scenario list (drives the manifest hash).
std::string canonical_config(const std::vector<Scenario>& scenarios);

/// FNV-1a over the canonical config.
std::uint64_t config_hash(const std::string& canonical);

/// Executes scenarios into out_dir (one CSV per scenario + manifest.json).
RunOutcome run_scenarios(const std::vector<Scenario>& scenarios,
                         const std::filesystem::path& out_dir, bool parallel_scenarios = false);

}  // namespace opg::scenario
