#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fejc/analytic.hpp"
#include "fejc/dynamics.hpp"
#include "fejc/hamiltonian.hpp"
#include "fejc/metrics.hpp"
#include "fejc/model.hpp"
#include "fejc/phasematch.hpp"

namespace fejc {

/// Numerical knobs shared by every scenario.
struct ModelOptions {
    int points_per_recoil = 8;
    int photon_cutoff = 3;
    int signal_modes = 3;
    int loss_modes = 1;
    int lambda_points_per_recoil = 32;
    int lambda_offset_cells = 2;
    LossCalibration loss_calibration = LossCalibration::amplitude;
    IntegratorOptions integrator;
    double criterion_threshold = kDefaultCriterionThreshold;
    bool override_criterion = false;
};

/// A fully assembled electron-cavity system ready to integrate over [0, T].
struct Experiment {
    PhysicalSetup setup;
    CavityModeSet modes;
    CouplingTable table;
    JointState initial;
    std::vector<StateLabel> labels;
    Eigen::VectorXd momentum_profile;
    double transit_time_s = 0.0;
    double label_window_rad_m = 0.0;
};

/// Fabry-Perot modes, electron at k0 with the cavity empty.
[[nodiscard]] Experiment two_level_experiment(const PhysicalSetup& setup, const ModelOptions& options,
                                              bool recoil_free = false);
/// Ladder modes, electron at k0 with the cavity empty.
[[nodiscard]] Experiment ladder_experiment(const PhysicalSetup& setup, const ModelOptions& options);
/// Lambda modes, started in |E0,0,1> or |E2,1,0>.
[[nodiscard]] Experiment lambda_experiment(const PhysicalSetup& setup, const ModelOptions& options,
                                           LambdaStart start);

[[nodiscard]] std::vector<LabeledStateProbability> label_probabilities(const Experiment& experiment,
                                                                       const JointState& psi);
[[nodiscard]] double probability_of(const std::vector<LabeledStateProbability>& probabilities,
                                    const std::string& label);
[[nodiscard]] double analytic_fidelity(const Experiment& experiment, const JointState& psi,
                                       const FewLevelState& reference);

struct SinglePhotonPoint {
    double coupling_gq = 0.0;
    double p_excited = 0.0; // E1,0
    double p_emitted = 0.0; // E0,1
    double fidelity = 0.0;
    IntegrationDiagnostics diagnostics;
};
[[nodiscard]] SinglePhotonPoint single_photon_point(const PhysicalSetup& setup, const ModelOptions& options);

struct DetuningPoint {
    double ratio = 0.0;
    double wavelength_m = 0.0;
    double grating_period_m = 0.0;
    double criterion_value = 0.0;
    double p_emitted = 0.0;
    double fidelity = 0.0;
    IntegrationDiagnostics diagnostics;
};
/// Single-photon run at g_Q = pi/2 after retuning the wavelength to the given ratio.
[[nodiscard]] DetuningPoint detuning_point(const PhysicalSetup& setup, double ratio, const ModelOptions& options);

struct PairPoint {
    double coupling_gq = 0.0;
    double p_start = 0.0;  // E2,0,0
    double p_middle = 0.0; // E1,1,0
    double p_pair = 0.0;   // E0,1,1
    double fidelity = 0.0;
    IntegrationDiagnostics diagnostics;
};
[[nodiscard]] PairPoint photon_pair_point(const PhysicalSetup& setup, const ModelOptions& options);

struct SwapPoint {
    double coupling_gq = 0.0;
    double p_start = 0.0;   // E0,0,1
    double p_excited = 0.0; // E1,0,0
    double p_target = 0.0;  // E2,1,0
    double fidelity = 0.0;  // against the lambda closed form
    double target_overlap = 0.0; // Re <-E2,1,0|psi>, positive when the sign flip happened
    IntegrationDiagnostics diagnostics;
};
[[nodiscard]] SwapPoint swap_point(const PhysicalSetup& setup, const ModelOptions& options);

struct PoissonPoint {
    double coupling_gq = 0.0;
    Eigen::VectorXd distribution;
    Eigen::VectorXd reference;
    double total_variation = 0.0;
    IntegrationDiagnostics diagnostics;
};
/// Emission with every detuning evaluated at k0, so successive photons stay resonant.
[[nodiscard]] PoissonPoint zero_recoil_point(const PhysicalSetup& setup, const ModelOptions& options);

enum class ScenarioKind { single_photon, detuning_sweep, photon_pair, swap, symmetric_n, phase_match_report };

[[nodiscard]] std::string to_string(ScenarioKind kind);
[[nodiscard]] ScenarioKind parse_scenario_kind(const std::string& text);

struct SweepSpec {
    std::size_t points = 0;
    double min = 0.0;
    double max = 0.0;

    [[nodiscard]] double value(std::size_t i) const {
        return points < 2 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::single_photon;
    PhysicalSetup setup;
    ModelOptions model;
    SweepSpec sweep;
    std::vector<int> electron_counts{1, 2, 4, 9};
    std::size_t workers = 0; // 0: hardware concurrency
};

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

using ManifestValue = std::variant<double, std::int64_t, bool, std::string>;

struct ScenarioResult {
    ScenarioKind kind = ScenarioKind::single_photon;
    std::vector<ResultTable> tables;
    std::vector<std::pair<std::string, ManifestValue>> manifest;
};

/// Runs the configured scenario; CriterionError propagates unless overridden.
[[nodiscard]] ScenarioResult run_scenario(const ScenarioConfig& config);

} // namespace fejc
