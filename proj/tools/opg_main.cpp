#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "opg/scenario.hpp"

namespace {

int run_and_report(const std::vector<opg::scenario::Scenario>& scenarios,
                   const std::filesystem::path& out_dir, bool parallel) {
    const auto outcome = opg::scenario::run_scenarios(scenarios, out_dir, parallel);
    if (outcome.exit_code != 0) {
        std::cerr << "error: " << outcome.detail << '\n';
        return outcome.exit_code;
    }
    for (const auto& t : outcome.timings) {
        std::cout << t.name << ": " << t.seconds << " s"
                  << (t.validity_all_ok ? "" : "  [validity flags raised]") << '\n';
    }
    std::cout << "outputs written to " << out_dir.string() << '\n';
    return 0;
}

void apply_overrides(std::vector<opg::scenario::Scenario>& scenarios, double tol, int cutoff) {
    for (auto& sc : scenarios) {
        if (tol > 0.0) sc.tol = tol;
        if (cutoff > 0) sc.cutoff = cutoff;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-mode optical parametric generation with incoherent pumps"};
    app.require_subcommand(1);

    double tol = 0.0;
    int cutoff = 0;
    bool parallel = false;
    app.add_option("--tol", tol, "override quadrature tolerance for all scenarios");
    app.add_option("--cutoff", cutoff, "override the minimum pair-number cutoff");
    app.add_flag("--parallel", parallel, "run independent scenarios concurrently");

    auto* list_cmd = app.add_subcommand("list", "list available presets");

    std::string preset_name;
    std::string preset_out = "out";
    auto* preset_cmd = app.add_subcommand("preset", "run a named preset");
    preset_cmd->add_option("name", preset_name, "preset name (see `opg list`)")->required();
    preset_cmd->add_option("--out", preset_out, "output directory");

    std::string config_path;
    std::string run_out = "out";
    auto* run_cmd = app.add_subcommand("run", "run scenarios from a JSON config");
    run_cmd->add_option("config", config_path, "config file path")->required();
    run_cmd->add_option("--out", run_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& name : opg::scenario::preset_names()) std::cout << name << '\n';
            return 0;
        }
        if (preset_cmd->parsed()) {
            if (!opg::scenario::is_preset(preset_name)) {
                std::cerr << "error: unknown preset '" << preset_name << "'\n";
                return 2;
            }
            auto scenarios = opg::scenario::preset(preset_name);
            apply_overrides(scenarios, tol, cutoff);
            return run_and_report(scenarios, preset_out, parallel);
        }
        if (run_cmd->parsed()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) {
                std::cerr << "error: cannot open config " << config_path << '\n';
                return 2;
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            auto scenarios = opg::scenario::parse_config(buf.str());
            apply_overrides(scenarios, tol, cutoff);
            return run_and_report(scenarios, run_out, parallel);
        }
    } catch (const opg::scenario::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
