// Scenario runner for the free-electron cavity simulator.
//
//   fejc run configs/single_photon.yaml --out-dir out
//   fejc report configs/phase_match_report.yaml
//   fejc selftest
//
// `run` writes one CSV per table plus <scenario>_manifest.json.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fejc/config.hpp"
#include "fejc/errors.hpp"
#include "fejc/output.hpp"
#include "fejc/scenarios.hpp"

#include "selftest.hpp"

namespace {

struct Overrides {
    std::string out_dir = "out";
    std::optional<double> tolerance;
    bool override_criterion = false;
};

fejc::ScenarioConfig resolve(const std::string& path, const Overrides& o) {
    auto cfg = fejc::load_config(path);
    if (o.tolerance) {
        if (!(*o.tolerance >= 1e-12 && *o.tolerance <= 1e-6)) throw fejc::ConfigError("--tol must lie in [1e-12, 1e-6]");
        cfg.model.integrator.tolerance = *o.tolerance;
    }
    if (o.override_criterion) cfg.model.override_criterion = true;
    return cfg;
}

void print_summary(const fejc::ScenarioResult& result) {
    for (const auto& [key, value] : result.manifest) {
        std::cout << "  " << key << " = ";
        std::visit([](const auto& v) { std::cout << v; }, value);
        std::cout << '\n';
    }
}

int execute(const fejc::ScenarioConfig& cfg, const Overrides& o, bool verbose) {
    const auto result = fejc::run_scenario(cfg);
    const auto files = fejc::write_outputs(result, o.out_dir);
    if (verbose) print_summary(result);
    for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-electron cavity QED simulator"};
    app.require_subcommand(1);

    Overrides overrides;
    std::string config_path;

    auto* run = app.add_subcommand("run", "run the scenario described by a config file");
    run->add_option("config", config_path, "YAML scenario file")->required()->check(CLI::ExistingFile);

    auto* report = app.add_subcommand("report", "phase-matching and detuning report for a config file");
    report->add_option("config", config_path, "YAML scenario file")->required()->check(CLI::ExistingFile);

    for (auto* sub : {run, report}) {
        sub->add_option("--out-dir", overrides.out_dir, "output directory")->capture_default_str();
        sub->add_option("--tol", overrides.tolerance, "integrator tolerance, overrides the config");
        sub->add_flag("--override-criterion", overrides.override_criterion,
                      "run even if the detuning criterion rejects the few-level reduction");
    }

    auto* selftest = app.add_subcommand("selftest", "oracle equivalence and invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return execute(resolve(config_path, overrides), overrides, false);
        if (report->parsed()) {
            auto cfg = resolve(config_path, overrides);
            cfg.kind = fejc::ScenarioKind::phase_match_report;
            return execute(cfg, overrides, true);
        }
        if (selftest->parsed()) return fejc_tools::run_selftest(std::cout) ? 0 : 1;
    } catch (const fejc::CriterionError& e) {
        std::cerr << "criterion failure: " << e.what() << " (use --override-criterion to proceed)\n";
        return 3;
    } catch (const fejc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
