#include "fejc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fejc/errors.hpp"
#include "fejc/phasematch.hpp"

namespace fejc {

namespace {

void reject_unknown(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
    if (!node.IsMap()) throw ConfigError("'" + where + "' must be a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& target) {
    if (!node[key]) return;
    try {
        target = node[key].as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(std::string("cannot parse value of '") + key + "'");
    }
}

SweepSpec default_sweep(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::single_photon: return {33, 0.0, kPi};
    case ScenarioKind::detuning_sweep: return {12, 0.05, 0.5};
    case ScenarioKind::photon_pair: return {33, 0.0, kPi * std::sqrt(2.0)};
    // Each lambda point integrates ~1.4e4 amplitudes; 33 of them would take half an hour.
    case ScenarioKind::swap: return {5, 0.0, kPi * std::sqrt(2.0)};
    default: return {0, 0.0, 0.0};
    }
}

double default_coupling(ScenarioKind kind) {
    return kind == ScenarioKind::photon_pair || kind == ScenarioKind::swap ? kPi / std::sqrt(2.0) : kPi / 2.0;
}

} // namespace

double grating_recoil_mismatch(const PhysicalSetup& setup) {
    const auto sol = solve_grating_period(setup.kinetic_energy_ev, setup.design_wavelength_m, setup.refractive_index);
    const double given = sol.photon_wavenumber_rad_m + kTwoPi / setup.grating_period_m;
    return std::abs(given - sol.recoil_rad_m) / sol.recoil_rad_m;
}

ScenarioConfig validate_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed YAML: ") + e.what());
    }
    if (!root || root.IsNull()) throw ConfigError("empty configuration");
    reject_unknown(root, "top level", {"scenario", "setup", "numerics", "sweep", "electron_counts"});
    if (!root["scenario"]) throw ConfigError("missing required field 'scenario'");

    ScenarioConfig cfg;
    cfg.kind = parse_scenario_kind(root["scenario"].as<std::string>());
    cfg.sweep = default_sweep(cfg.kind);
    cfg.setup.coupling_gq = default_coupling(cfg.kind);

    bool grating_given = false;
    if (const auto s = root["setup"]) {
        reject_unknown(s, "setup",
                       {"kinetic_energy_ev", "energy_uncertainty_ev", "cavity_length_m", "design_wavelength_m",
                        "refractive_index", "grating_period_m", "free_spectral_range_rad_s", "coupling_gq",
                        "loss_probability"});
        read(s, "kinetic_energy_ev", cfg.setup.kinetic_energy_ev);
        read(s, "energy_uncertainty_ev", cfg.setup.energy_uncertainty_ev);
        read(s, "cavity_length_m", cfg.setup.cavity_length_m);
        read(s, "design_wavelength_m", cfg.setup.design_wavelength_m);
        read(s, "refractive_index", cfg.setup.refractive_index);
        read(s, "grating_period_m", cfg.setup.grating_period_m);
        read(s, "free_spectral_range_rad_s", cfg.setup.free_spectral_range_rad_s);
        read(s, "coupling_gq", cfg.setup.coupling_gq);
        read(s, "loss_probability", cfg.setup.loss_probability);
        grating_given = static_cast<bool>(s["grating_period_m"]);
    }

    if (const auto n = root["numerics"]) {
        reject_unknown(n, "numerics",
                       {"points_per_recoil", "photon_cutoff", "signal_modes", "loss_modes", "lambda_points_per_recoil",
                        "lambda_offset_cells", "loss_calibration", "tolerance", "samples", "criterion_threshold",
                        "override_criterion", "workers"});
        auto& m = cfg.model;
        read(n, "points_per_recoil", m.points_per_recoil);
        read(n, "photon_cutoff", m.photon_cutoff);
        read(n, "signal_modes", m.signal_modes);
        read(n, "loss_modes", m.loss_modes);
        read(n, "lambda_points_per_recoil", m.lambda_points_per_recoil);
        read(n, "lambda_offset_cells", m.lambda_offset_cells);
        if (n["loss_calibration"]) m.loss_calibration = parse_loss_calibration(n["loss_calibration"].as<std::string>());
        read(n, "tolerance", m.integrator.tolerance);
        read(n, "samples", m.integrator.samples);
        read(n, "criterion_threshold", m.criterion_threshold);
        read(n, "override_criterion", m.override_criterion);
        read(n, "workers", cfg.workers);
    }

    if (const auto w = root["sweep"]) {
        reject_unknown(w, "sweep", {"points", "min", "max"});
        read(w, "points", cfg.sweep.points);
        read(w, "min", cfg.sweep.min);
        read(w, "max", cfg.sweep.max);
    }
    if (const auto e = root["electron_counts"]) {
        try {
            cfg.electron_counts = e.as<std::vector<int>>();
        } catch (const YAML::Exception&) {
            throw ConfigError("electron_counts must be a list of integers");
        }
    }

    // Physical ranges first, with a placeholder period if none was given.
    PhysicalSetup probe = cfg.setup;
    if (!grating_given) probe.grating_period_m = 1.0;
    try {
        probe.validate();
        if (grating_given) {
            if (grating_recoil_mismatch(cfg.setup) > 0.01) {
                throw ConfigError("grating_period_m conflicts with phase matching by more than 1% in recoil");
            }
        } else {
            cfg.setup = with_phase_matched_grating(cfg.setup);
        }
        cfg.setup.validate();
    } catch (const PhysicsError& e) {
        throw ConfigError(std::string("invalid setup: ") + e.what());
    }

    const auto& m = cfg.model;
    if (m.points_per_recoil < 1) throw ConfigError("points_per_recoil must be at least 1");
    if (m.photon_cutoff < 1) throw ConfigError("photon_cutoff must be at least 1");
    if (m.signal_modes < 1) throw ConfigError("signal_modes must be at least 1");
    if (m.loss_modes < 0) throw ConfigError("loss_modes must be non-negative");
    if (m.lambda_points_per_recoil < 1) throw ConfigError("lambda_points_per_recoil must be at least 1");
    if (m.lambda_offset_cells == 0) throw ConfigError("lambda_offset_cells must be non-zero");
    if (!(m.integrator.tolerance >= 1e-12 && m.integrator.tolerance <= 1e-6)) {
        throw ConfigError("tolerance must lie in [1e-12, 1e-6]");
    }
    if (m.integrator.samples < 200) throw ConfigError("samples must be at least 200");
    if (!(m.criterion_threshold >= 0.0)) throw ConfigError("criterion_threshold must be non-negative");

    const bool sweeps = cfg.kind != ScenarioKind::symmetric_n && cfg.kind != ScenarioKind::phase_match_report;
    if (sweeps) {
        if (cfg.sweep.points < 1) throw ConfigError("sweep needs at least one point");
        if (!(cfg.sweep.max >= cfg.sweep.min)) throw ConfigError("sweep max must not be below min");
        if (cfg.kind == ScenarioKind::detuning_sweep && !(cfg.sweep.min > 0.0)) {
            throw ConfigError("detuning ratios must be positive");
        }
    }
    for (int n : cfg.electron_counts) {
        if (n < 1) throw ConfigError("electron counts must be positive");
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return validate_config(text.str());
}

} // namespace fejc
