#include "fejc/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>

#include <unsupported/Eigen/MatrixFunctions>

#include "fejc/errors.hpp"
#include "fejc/parallel.hpp"

namespace fejc {

namespace {

std::vector<int> photons(std::size_t modes, std::initializer_list<std::pair<std::size_t, int>> set) {
    std::vector<int> occ(modes, 0);
    for (const auto& [mode, n] : set) occ[mode] = n;
    return occ;
}

CouplingOptions coupling_options(const ModelOptions& options, bool recoil_free) {
    CouplingOptions c;
    c.photon_cutoff = options.photon_cutoff;
    c.loss_calibration = options.loss_calibration;
    c.recoil_free = recoil_free;
    return c;
}

Experiment assemble(const PhysicalSetup& setup, CavityModeSet modes, int points_per_recoil, const ModelOptions& options,
                    bool recoil_free, std::vector<StateLabel> labels_in_cells_of_target, int start_offset,
                    const std::vector<int>& start_photons) {
    const auto grid = build_momentum_grid(setup, modes, points_per_recoil);
    auto table = build_coupling_table(setup, modes, grid, coupling_options(options, recoil_free));
    const FockSpace& fock = table.basis().fock;
    auto centred = initial_state(grid, fock, setup.energy_uncertainty_ev, start_photons);

    Eigen::VectorXd profile = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
    const std::size_t start_fock = fock.flatten(start_photons);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        profile(static_cast<Eigen::Index>(i)) =
            centred.amplitudes()(static_cast<Eigen::Index>(table.basis().index(i, start_fock))).real();
    }

    JointState initial = centred;
    if (start_offset != 0) {
        Eigen::VectorXcd shifted = Eigen::VectorXcd::Zero(centred.amplitudes().size());
        double kept = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto to = grid.index_of_offset(grid.offset(i) + start_offset);
            if (!to) continue;
            const double amp = profile(static_cast<Eigen::Index>(i));
            shifted(static_cast<Eigen::Index>(table.basis().index(*to, start_fock))) = amp;
            kept += amp * amp;
        }
        if (std::abs(kept - 1.0) > 1e-6) throw GridError("shifted initial wavepacket leaves the grid");
        initial = JointState(table.basis(), shifted / std::sqrt(kept));
    }

    const auto kin = electron_kinematics(setup.kinetic_energy_ev);
    const double window = 0.5 * modes.target_mode().total_recoil_rad_m;
    return Experiment{setup,
                      std::move(modes),
                      std::move(table),
                      std::move(initial),
                      std::move(labels_in_cells_of_target),
                      std::move(profile),
                      kin.transit_time(setup.cavity_length_m),
                      window};
}

struct Evolution {
    JointState final_state;
    std::vector<double> times_s;
    std::vector<JointState> trace;
    IntegrationDiagnostics diagnostics;
};

Evolution evolve(const Experiment& ex, const IntegratorOptions& options, bool keep_trace) {
    const auto& basis = ex.initial.basis();
    const SparseGenerator generator(ex.table, reachable_subspace(ex.table, support(ex.initial.amplitudes())));
    const auto traj = integrate(generator, generator.restrict(ex.initial.amplitudes()), 0.0, ex.transit_time_s, options);
    Evolution out{JointState(basis, generator.embed(traj.final_state(), basis.dimension())), {}, {}, traj.diagnostics};
    if (keep_trace) {
        out.times_s = traj.times_s;
        for (const auto& s : traj.states) out.trace.emplace_back(basis, generator.embed(s, basis.dimension()));
    }
    return out;
}

void require_reduction(const Experiment& ex, ReducedSystem system, const ModelOptions& options) {
    (void)rwa_reduce(ex.setup, ex.modes, system, options.override_criterion, options.criterion_threshold);
}

} // namespace

Experiment two_level_experiment(const PhysicalSetup& setup, const ModelOptions& options, bool recoil_free) {
    auto modes = fabry_perot_modes(setup, options.signal_modes, options.loss_modes);
    const std::size_t m = modes.size();
    const std::size_t target = modes.target;
    const int q = options.points_per_recoil;
    std::vector<StateLabel> labels{{"E1,0", 0, photons(m, {})}, {"E0,1", -q, photons(m, {{target, 1}})}};
    return assemble(setup, std::move(modes), q, options, recoil_free, std::move(labels), 0, photons(m, {}));
}

Experiment ladder_experiment(const PhysicalSetup& setup, const ModelOptions& options) {
    auto modes = ladder_modes(setup, options.loss_modes);
    const std::size_t m = modes.size();
    const int q = options.points_per_recoil;
    std::vector<StateLabel> labels{{"E2,0,0", 0, photons(m, {})},
                                   {"E1,1,0", -q, photons(m, {{0, 1}})},
                                   {"E0,1,1", -2 * q, photons(m, {{0, 1}, {1, 1}})}};
    return assemble(setup, std::move(modes), q, options, false, std::move(labels), 0, photons(m, {}));
}

Experiment lambda_experiment(const PhysicalSetup& setup, const ModelOptions& options, LambdaStart start) {
    const int q = options.lambda_points_per_recoil;
    auto modes = lambda_modes(setup, q, options.lambda_offset_cells, options.loss_modes);
    const std::size_t m = modes.size();
    const int qb = q + options.lambda_offset_cells;
    std::vector<StateLabel> labels{{"E0,0,1", -qb, photons(m, {{1, 1}})},
                                   {"E1,0,0", 0, photons(m, {})},
                                   {"E2,1,0", -q, photons(m, {{0, 1}})}};
    const bool from_e0 = start == LambdaStart::E0_0_1;
    const auto start_photons = from_e0 ? photons(m, {{1, 1}}) : photons(m, {{0, 1}});
    return assemble(setup, std::move(modes), q, options, false, std::move(labels), from_e0 ? -qb : -q, start_photons);
}

std::vector<LabeledStateProbability> label_probabilities(const Experiment& experiment, const JointState& psi) {
    return labeled_probabilities(psi, experiment.labels, experiment.label_window_rad_m);
}

double probability_of(const std::vector<LabeledStateProbability>& probabilities, const std::string& label) {
    for (const auto& p : probabilities) {
        if (p.label == label) return p.probability;
    }
    throw BasisError("no probability for label '" + label + "'");
}

double analytic_fidelity(const Experiment& experiment, const JointState& psi, const FewLevelState& reference) {
    return fidelity(psi, reference, experiment.labels, experiment.momentum_profile);
}

SinglePhotonPoint single_photon_point(const PhysicalSetup& setup, const ModelOptions& options) {
    const auto ex = two_level_experiment(setup, options);
    require_reduction(ex, ReducedSystem::two_level, options);
    const auto run = evolve(ex, options.integrator, false);
    const auto probs = label_probabilities(ex, run.final_state);
    const cplx g(setup.coupling_gq / ex.transit_time_s, 0.0);
    return {setup.coupling_gq, probability_of(probs, "E1,0"), probability_of(probs, "E0,1"),
            analytic_fidelity(ex, run.final_state, jc_two_level(g, ex.transit_time_s)), run.diagnostics};
}

DetuningPoint detuning_point(const PhysicalSetup& base, double ratio, const ModelOptions& options) {
    PhysicalSetup setup = base;
    setup.design_wavelength_m = wavelength_for_detuning_ratio(base, ratio);
    setup = with_phase_matched_grating(setup);
    const auto ex = two_level_experiment(setup, options);
    const auto report = detuning_table(setup, ex.modes, options.criterion_threshold);
    const auto run = evolve(ex, options.integrator, false);
    const auto probs = label_probabilities(ex, run.final_state);
    const cplx g(setup.coupling_gq / ex.transit_time_s, 0.0);
    return {ratio,
            setup.design_wavelength_m,
            setup.grating_period_m,
            report.criterion_value,
            probability_of(probs, "E0,1"),
            analytic_fidelity(ex, run.final_state, jc_two_level(g, ex.transit_time_s)),
            run.diagnostics};
}

PairPoint photon_pair_point(const PhysicalSetup& setup, const ModelOptions& options) {
    const auto ex = ladder_experiment(setup, options);
    require_reduction(ex, ReducedSystem::ladder, options);
    const auto run = evolve(ex, options.integrator, false);
    const auto probs = label_probabilities(ex, run.final_state);
    const double g = setup.coupling_gq / ex.transit_time_s;
    return {setup.coupling_gq,
            probability_of(probs, "E2,0,0"),
            probability_of(probs, "E1,1,0"),
            probability_of(probs, "E0,1,1"),
            analytic_fidelity(ex, run.final_state, ladder_three_level(g, ex.transit_time_s)),
            run.diagnostics};
}

namespace {

double target_overlap(const Experiment& ex, const JointState& psi) {
    FewLevelState flipped{{"E2,1,0"}, Eigen::VectorXcd::Constant(1, -1.0)};
    const auto& label = *std::find_if(ex.labels.begin(), ex.labels.end(),
                                      [](const StateLabel& l) { return l.name == "E2,1,0"; });
    const auto& basis = psi.basis();
    const std::size_t fock = basis.fock.flatten(label.occupation);
    cplx overlap = 0.0;
    const auto npts = static_cast<Eigen::Index>(basis.grid.size());
    for (Eigen::Index i = 0; i < npts; ++i) {
        const Eigen::Index source = i - label.momentum_offset_cells;
        if (source < 0 || source >= npts) continue;
        overlap += std::conj(flipped.amplitudes(0)) * ex.momentum_profile(source) *
                   psi.amplitudes()(static_cast<Eigen::Index>(basis.index(static_cast<std::size_t>(i), fock)));
    }
    return overlap.real();
}

} // namespace

SwapPoint swap_point(const PhysicalSetup& setup, const ModelOptions& options) {
    const auto ex = lambda_experiment(setup, options, LambdaStart::E0_0_1);
    require_reduction(ex, ReducedSystem::lambda, options);
    const auto run = evolve(ex, options.integrator, false);
    const auto probs = label_probabilities(ex, run.final_state);
    const double g = setup.coupling_gq / ex.transit_time_s;
    return {setup.coupling_gq,
            probability_of(probs, "E0,0,1"),
            probability_of(probs, "E1,0,0"),
            probability_of(probs, "E2,1,0"),
            analytic_fidelity(ex, run.final_state, lambda_three_level(g, ex.transit_time_s, LambdaStart::E0_0_1)),
            target_overlap(ex, run.final_state),
            run.diagnostics};
}

PoissonPoint zero_recoil_point(const PhysicalSetup& setup, const ModelOptions& options) {
    const auto ex = two_level_experiment(setup, options, true);
    const auto run = evolve(ex, options.integrator, false);
    PoissonPoint out;
    out.coupling_gq = setup.coupling_gq;
    out.distribution = photon_number_distribution(run.final_state, ex.modes.target);
    out.reference = poissonian_reference(setup.coupling_gq * setup.coupling_gq, options.photon_cutoff);
    out.total_variation = total_variation(out.distribution, out.reference);
    out.diagnostics = run.diagnostics;
    return out;
}

std::string to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::single_photon: return "single_photon";
    case ScenarioKind::detuning_sweep: return "detuning_sweep";
    case ScenarioKind::photon_pair: return "photon_pair";
    case ScenarioKind::swap: return "swap";
    case ScenarioKind::symmetric_n: return "symmetric_n";
    case ScenarioKind::phase_match_report: return "phase_match_report";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& text) {
    for (auto kind : {ScenarioKind::single_photon, ScenarioKind::detuning_sweep, ScenarioKind::photon_pair,
                      ScenarioKind::swap, ScenarioKind::symmetric_n, ScenarioKind::phase_match_report}) {
        if (to_string(kind) == text) return kind;
    }
    throw ConfigError("unknown scenario '" + text + "'");
}

namespace {

struct DiagnosticsTotal {
    std::size_t runs = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double max_drift = 0.0;

    void add(const IntegrationDiagnostics& d) {
        ++runs;
        accepted += d.accepted_steps;
        rejected += d.rejected_steps;
        max_drift = std::max(max_drift, d.max_norm_drift);
    }
};

class Manifest {
public:
    void add(std::string key, double value) { entries_.emplace_back(std::move(key), value); }
    void add(std::string key, bool value) { entries_.emplace_back(std::move(key), value); }
    void add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
    void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
    void add_count(std::string key, std::int64_t value) { entries_.emplace_back(std::move(key), value); }
    std::vector<std::pair<std::string, ManifestValue>> take() { return std::move(entries_); }

private:
    std::vector<std::pair<std::string, ManifestValue>> entries_;
};

void describe_inputs(const ScenarioConfig& config, Manifest& m) {
    const auto& s = config.setup;
    const auto& o = config.model;
    m.add("scenario", to_string(config.kind));
    m.add("kinetic_energy_ev", s.kinetic_energy_ev);
    m.add("energy_uncertainty_ev", s.energy_uncertainty_ev);
    m.add("cavity_length_m", s.cavity_length_m);
    m.add("design_wavelength_m", s.design_wavelength_m);
    m.add("refractive_index", s.refractive_index);
    m.add("grating_period_m", s.grating_period_m);
    m.add("free_spectral_range_rad_s", s.free_spectral_range_rad_s);
    m.add("coupling_gq", s.coupling_gq);
    m.add("loss_probability", s.loss_probability);
    m.add_count("points_per_recoil", o.points_per_recoil);
    m.add_count("photon_cutoff", o.photon_cutoff);
    m.add_count("signal_modes", o.signal_modes);
    m.add_count("loss_modes", o.loss_modes);
    m.add_count("lambda_points_per_recoil", o.lambda_points_per_recoil);
    m.add_count("lambda_offset_cells", o.lambda_offset_cells);
    m.add("loss_calibration", to_string(o.loss_calibration));
    m.add("tolerance", o.integrator.tolerance);
    m.add_count("samples", static_cast<std::int64_t>(o.integrator.samples));
    m.add("criterion_threshold", o.criterion_threshold);
    m.add("override_criterion", o.override_criterion);
    m.add_count("sweep_points", static_cast<std::int64_t>(config.sweep.points));
    m.add("sweep_min", config.sweep.min);
    m.add("sweep_max", config.sweep.max);
    std::string counts;
    for (int n : config.electron_counts) counts += (counts.empty() ? "" : ",") + std::to_string(n);
    m.add("electron_counts", counts);
}

void describe_derived(const PhysicalSetup& setup, double threshold, Manifest& m) {
    const auto kin = electron_kinematics(setup.kinetic_energy_ev);
    const auto sol = solve_grating_period(setup.kinetic_energy_ev, setup.design_wavelength_m, setup.refractive_index);
    const auto modes = fabry_perot_modes(setup, 3, 0);
    const auto report = detuning_table(setup, modes, threshold);
    m.add("beta", kin.beta);
    m.add("velocity_m_s", kin.velocity_m_s);
    m.add("electron_wavenumber_rad_m", kin.wavenumber_rad_m);
    m.add("transit_time_s", kin.transit_time(setup.cavity_length_m));
    m.add("design_frequency_rad_s", sol.frequency_rad_s);
    m.add("recoil_rad_m", sol.recoil_rad_m);
    m.add("photon_wavenumber_rad_m", sol.photon_wavenumber_rad_m);
    m.add("phase_matching_residual_rad_s", sol.residual_rad_s);
    m.add("recoil_detuning_rad_s", report.recoil_detuning_rad_s);
    m.add("exact_recoil_detuning_rad_s", report.exact_recoil_detuning_rad_s);
    m.add("detuning_ratio", report.recoil_detuning_rad_s / setup.free_spectral_range_rad_s);
    m.add("min_detuning_rad_s", report.min_detuning_rad_s);
    m.add("min_detuning_fraction", report.fraction);
    m.add("criterion_value", report.criterion_value);
    m.add("criterion_passes", report.passes);
    m.add("resonant_coupling_rad_s", setup.coupling_gq / kin.transit_time(setup.cavity_length_m));
}

template <class Point, class Fn>
std::vector<Point> sweep(const ScenarioConfig& config, Fn&& fn) {
    std::vector<std::optional<Point>> slots(config.sweep.points);
    parallel_for(
        config.sweep.points, [&](std::size_t i) { slots[i] = fn(config.sweep.value(i)); },
        config.workers == 0 ? std::thread::hardware_concurrency() : config.workers);
    std::vector<Point> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::string column_label(const std::string& label) {
    std::string out = label;
    std::replace(out.begin(), out.end(), ',', '_');
    return out;
}

ResultTable trace_table(const Experiment& ex, const Evolution& run, const std::vector<std::string>& labels) {
    ResultTable t{"time_trace", {"time_s", "time_over_transit"}, {}};
    for (const auto& l : labels) t.columns.push_back("P_" + column_label(l));
    t.columns.push_back("P_other");
    for (std::size_t s = 0; s < run.trace.size(); ++s) {
        const auto probs = label_probabilities(ex, run.trace[s]);
        std::vector<double> row{run.times_s[s], run.times_s[s] / ex.transit_time_s};
        for (const auto& l : labels) row.push_back(probability_of(probs, l));
        row.push_back(probability_of(probs, "other"));
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
    ScenarioResult result;
    result.kind = config.kind;
    Manifest manifest;
    describe_inputs(config, manifest);
    config.setup.validate();
    describe_derived(config.setup, config.model.criterion_threshold, manifest);
    DiagnosticsTotal diag;
    const auto& opts = config.model;

    switch (config.kind) {
    case ScenarioKind::single_photon: {
        const auto ex = two_level_experiment(config.setup, opts);
        const auto reduced = rwa_reduce(config.setup, ex.modes, ReducedSystem::two_level, opts.override_criterion,
                                        opts.criterion_threshold);
        manifest.add("reduction_criterion_value", reduced.criterion_value);
        const auto points = sweep<SinglePhotonPoint>(config, [&](double gq) {
            PhysicalSetup s = config.setup;
            s.coupling_gq = gq;
            return single_photon_point(s, opts);
        });
        ResultTable t{"rabi_sweep", {"coupling_gq", "P_E1_0", "P_E0_1", "analytic_P_E0_1", "fidelity"}, {}};
        for (const auto& p : points) {
            diag.add(p.diagnostics);
            t.rows.push_back({p.coupling_gq, p.p_excited, p.p_emitted, std::pow(std::sin(p.coupling_gq), 2),
                              p.fidelity});
        }
        result.tables.push_back(std::move(t));
        const auto run = evolve(ex, opts.integrator, true);
        diag.add(run.diagnostics);
        result.tables.push_back(trace_table(ex, run, {"E1,0", "E0,1"}));
        break;
    }
    case ScenarioKind::detuning_sweep: {
        const auto points = sweep<DetuningPoint>(config, [&](double r) { return detuning_point(config.setup, r, opts); });
        ResultTable t{"detuning_sweep",
                      {"detuning_ratio", "design_wavelength_m", "grating_period_m", "criterion_value", "P_E0_1",
                       "fidelity"},
                      {}};
        for (const auto& p : points) {
            diag.add(p.diagnostics);
            t.rows.push_back({p.ratio, p.wavelength_m, p.grating_period_m, p.criterion_value, p.p_emitted, p.fidelity});
        }
        result.tables.push_back(std::move(t));
        break;
    }
    case ScenarioKind::photon_pair: {
        const auto ex = ladder_experiment(config.setup, opts);
        const auto reduced = rwa_reduce(config.setup, ex.modes, ReducedSystem::ladder, opts.override_criterion,
                                        opts.criterion_threshold);
        manifest.add("reduction_criterion_value", reduced.criterion_value);
        manifest.add("second_mode_frequency_rad_s", ex.modes.modes[1].frequency_rad_s);
        const auto points = sweep<PairPoint>(config, [&](double gq) {
            PhysicalSetup s = config.setup;
            s.coupling_gq = gq;
            return photon_pair_point(s, opts);
        });
        ResultTable t{"pair_sweep",
                      {"coupling_gq", "P_E2_0_0", "P_E1_1_0", "P_E0_1_1", "analytic_P_E0_1_1", "fidelity"},
                      {}};
        for (const auto& p : points) {
            diag.add(p.diagnostics);
            t.rows.push_back({p.coupling_gq, p.p_start, p.p_middle, p.p_pair,
                              std::pow(std::sin(p.coupling_gq / std::sqrt(2.0)), 4), p.fidelity});
        }
        result.tables.push_back(std::move(t));
        const auto run = evolve(ex, opts.integrator, true);
        diag.add(run.diagnostics);
        result.tables.push_back(trace_table(ex, run, {"E2,0,0", "E1,1,0", "E0,1,1"}));
        break;
    }
    case ScenarioKind::swap: {
        const auto ex = lambda_experiment(config.setup, opts, LambdaStart::E0_0_1);
        const auto reduced = rwa_reduce(config.setup, ex.modes, ReducedSystem::lambda, opts.override_criterion,
                                        opts.criterion_threshold);
        manifest.add("reduction_criterion_value", reduced.criterion_value);
        manifest.add("second_mode_frequency_rad_s", ex.modes.modes[1].frequency_rad_s);
        manifest.add("second_mode_recoil_rad_m", ex.modes.modes[1].total_recoil_rad_m);
        const auto points = sweep<SwapPoint>(config, [&](double gq) {
            PhysicalSetup s = config.setup;
            s.coupling_gq = gq;
            return swap_point(s, opts);
        });
        ResultTable t{"swap_sweep",
                      {"coupling_gq", "P_E0_0_1", "P_E1_0_0", "P_E2_1_0", "fidelity", "target_overlap"},
                      {}};
        for (const auto& p : points) {
            diag.add(p.diagnostics);
            t.rows.push_back({p.coupling_gq, p.p_start, p.p_excited, p.p_target, p.fidelity, p.target_overlap});
        }
        result.tables.push_back(std::move(t));
        const auto run = evolve(ex, opts.integrator, true);
        diag.add(run.diagnostics);
        result.tables.push_back(trace_table(ex, run, {"E0,0,1", "E1,0,0", "E2,1,0"}));
        break;
    }
    case ScenarioKind::symmetric_n: {
        const double transit = electron_kinematics(config.setup.kinetic_energy_ev).transit_time(config.setup.cavity_length_m);
        const cplx g(config.setup.coupling_gq / transit, 0.0);
        const std::size_t samples = std::max<std::size_t>(opts.integrator.samples, 2);
        ResultTable summary{"collective", {"electrons", "emission_coupling_gq", "emission_time_s", "max_abs_deviation"}, {}};
        ResultTable traces{"collective_trace", {"time_s", "time_over_transit"}, {}};
        for (int n : config.electron_counts) traces.columns.push_back("P_photon_N" + std::to_string(n));
        traces.rows.assign(samples, {});
        for (std::size_t s = 0; s < samples; ++s) {
            const double t = transit * static_cast<double>(s) / static_cast<double>(samples - 1);
            traces.rows[s] = {t, t / transit};
        }
        for (int n : config.electron_counts) {
            Eigen::Matrix2cd a;
            const cplx gn = std::sqrt(static_cast<double>(n)) * g;
            a << 0.0, gn, -std::conj(gn), 0.0;
            double worst = 0.0;
            for (std::size_t s = 0; s < samples; ++s) {
                const double t = traces.rows[s][0];
                const Eigen::Vector2cd numeric = (a * t).exp() * Eigen::Vector2cd(1.0, 0.0);
                const auto closed = tavis_cummings_single_excitation(n, g, t);
                worst = std::max(worst, (numeric - closed.amplitudes).cwiseAbs().maxCoeff());
                traces.rows[s].push_back(std::norm(closed.amplitudes(1)));
            }
            summary.rows.push_back({static_cast<double>(n), kPi / (2.0 * std::sqrt(static_cast<double>(n))),
                                    collective_emission_time(n, g), worst});
        }
        result.tables.push_back(std::move(summary));
        result.tables.push_back(std::move(traces));
        break;
    }
    case ScenarioKind::phase_match_report: {
        const auto modes = fabry_perot_modes(config.setup, opts.signal_modes, 0);
        const auto report = detuning_table(config.setup, modes, opts.criterion_threshold);
        ResultTable t{"modes",
                      {"mode_index", "frequency_rad_s", "wavenumber_rad_m", "total_recoil_rad_m",
                       "emission_detuning_rad_s", "absorption_detuning_rad_s", "kernel_at_design_recoil"},
                      {}};
        for (std::size_t j = 0; j < modes.size(); ++j) {
            const auto& m = modes.modes[j];
            t.rows.push_back({static_cast<double>(m.index), m.frequency_rad_s, m.wavenumber_rad_m,
                              m.total_recoil_rad_m, report.modes[j].emission_rad_s, report.modes[j].absorption_rad_s,
                              coupling_kernel(modes.target_mode().total_recoil_rad_m, m, config.setup.cavity_length_m)});
        }
        result.tables.push_back(std::move(t));
        const auto kin = electron_kinematics(config.setup.kinetic_energy_ev);
        PhysicalSetup matched = config.setup;
        matched.free_spectral_range_rad_s =
            kPi * kCodata2018.light_speed_m_s / (config.setup.refractive_index * config.setup.cavity_length_m);
        const auto fsr_report = detuning_table(matched, modes, opts.criterion_threshold);
        manifest.add("matched_fsr_rad_s", matched.free_spectral_range_rad_s);
        manifest.add("matched_fsr_criterion_value", fsr_report.criterion_value);
        manifest.add("matched_fsr_closed_form",
                     closed_form_criterion(fsr_report.fraction, config.setup.refractive_index, kin.beta));
        break;
    }
    }

    manifest.add_count("integration_runs", static_cast<std::int64_t>(diag.runs));
    manifest.add_count("integrator_accepted_steps", static_cast<std::int64_t>(diag.accepted));
    manifest.add_count("integrator_rejected_steps", static_cast<std::int64_t>(diag.rejected));
    manifest.add("max_norm_drift", diag.max_drift);
    result.manifest = manifest.take();
    return result;
}

} // namespace fejc
