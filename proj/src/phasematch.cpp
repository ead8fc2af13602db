#include "fejc/phasematch.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "fejc/errors.hpp"

namespace fejc {

namespace {

double resonance_frequency(double velocity, double transfer, double hbar_over_mass) {
    return velocity * transfer - 0.5 * hbar_over_mass * transfer * transfer;
}

CavityMode loss_mode_like(const CavityMode& mode) {
    CavityMode loss = mode;
    loss.role = ModeRole::loss;
    return loss;
}

} // namespace

ElectronKinematics electron_kinematics(double kinetic_energy_ev, const PhysicalConstants& pc) {
    if (!(kinetic_energy_ev > 0.0)) throw PhysicsError("kinetic energy must be positive");
    ElectronKinematics kin;
    kin.beta = std::sqrt(2.0 * kinetic_energy_ev / pc.electron_rest_energy_ev);
    if (kin.beta >= 0.1) throw PhysicsError("electron is not slow: beta >= 0.1");
    kin.velocity_m_s = kin.beta * pc.light_speed_m_s;
    kin.wavenumber_rad_m = pc.electron_mass_kg * kin.velocity_m_s / pc.hbar_js;
    kin.time_per_length_s_m = 1.0 / kin.velocity_m_s;
    return kin;
}

GratingSolution solve_grating_period(double kinetic_energy_ev, double design_wavelength_m, double refractive_index,
                                     const PhysicalConstants& pc) {
    if (!(design_wavelength_m > 0.0) || !(refractive_index > 0.0)) {
        throw PhysicsError("wavelength and refractive index must be positive");
    }
    const auto kin = electron_kinematics(kinetic_energy_ev, pc);
    const double v = kin.velocity_m_s;
    const double a = 0.5 * pc.hbar_over_mass();

    GratingSolution sol;
    sol.frequency_rad_s = kTwoPi * pc.light_speed_m_s / design_wavelength_m;
    const double disc = v * v - 4.0 * a * sol.frequency_rad_s;
    if (disc < 0.0) throw PhysicsError("electron too slow to emit at the design wavelength");
    // Smaller root of a Q^2 - v Q + w0 = 0, written without cancellation.
    sol.recoil_rad_m = 2.0 * sol.frequency_rad_s / (v + std::sqrt(disc));
    sol.photon_wavenumber_rad_m = refractive_index * sol.frequency_rad_s / pc.light_speed_m_s;
    const double grating_wavenumber = sol.recoil_rad_m - sol.photon_wavenumber_rad_m;
    if (!(grating_wavenumber > 0.0)) throw PhysicsError("no positive grating period phase-matches this mode");
    sol.period_m = kTwoPi / grating_wavenumber;
    sol.residual_rad_s =
        pc.hbar_over_mass() * kin.wavenumber_rad_m * sol.recoil_rad_m -
        0.5 * pc.hbar_over_mass() * sol.recoil_rad_m * sol.recoil_rad_m - sol.frequency_rad_s;
    return sol;
}

PhysicalSetup with_phase_matched_grating(PhysicalSetup setup, const PhysicalConstants& pc) {
    setup.grating_period_m =
        solve_grating_period(setup.kinetic_energy_ev, setup.design_wavelength_m, setup.refractive_index, pc).period_m;
    return setup;
}

double wavelength_for_detuning_ratio(const PhysicalSetup& setup, double ratio, const PhysicalConstants& pc) {
    if (!(ratio > 0.0)) throw PhysicsError("detuning ratio must be positive");
    const auto kin = electron_kinematics(setup.kinetic_energy_ev, pc);
    // Below this wavelength the resonance quadratic has no real root.
    const double shortest =
        kTwoPi * pc.light_speed_m_s * 2.0 * pc.hbar_over_mass() / (kin.velocity_m_s * kin.velocity_m_s);

    auto excess = [&](double log_wavelength) {
        const double lambda = std::exp(log_wavelength);
        const auto sol = solve_grating_period(setup.kinetic_energy_ev, lambda, setup.refractive_index, pc);
        const double grating = sol.recoil_rad_m - sol.photon_wavenumber_rad_m;
        return pc.hbar_over_mass() * grating * grating / setup.free_spectral_range_rad_s - ratio;
    };

    double lo = std::log(shortest * (1.0 + 1e-9));
    double hi = std::log(1.0);
    if (excess(lo) < 0.0 || excess(hi) > 0.0) throw PhysicsError("detuning ratio not reachable by tuning the wavelength");
    std::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(excess, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                           iterations);
    return std::exp(0.5 * (bracket.first + bracket.second));
}

DetuningReport detuning_table(const PhysicalSetup& setup, const CavityModeSet& modes, double criterion_threshold,
                              const PhysicalConstants& pc) {
    const auto kin = electron_kinematics(setup.kinetic_energy_ev, pc);
    const auto sol = solve_grating_period(setup.kinetic_energy_ev, setup.design_wavelength_m, setup.refractive_index, pc);
    const double grating = kTwoPi / setup.grating_period_m;
    const double dw = setup.free_spectral_range_rad_s;

    DetuningReport report;
    report.recoil_detuning_rad_s = pc.hbar_over_mass() * grating * grating;
    report.exact_recoil_detuning_rad_s = pc.hbar_over_mass() * sol.recoil_rad_m * sol.recoil_rad_m;
    for (const auto& m : modes.modes) {
        if (m.role != ModeRole::signal) continue;
        report.modes.push_back({m.index, std::abs(report.recoil_detuning_rad_s + m.index * dw),
                                std::abs(report.recoil_detuning_rad_s - m.index * dw)});
    }
    const double r = report.recoil_detuning_rad_s / dw;
    report.fraction = std::abs(r - std::round(r));
    report.min_detuning_rad_s = report.fraction * dw;
    report.transit_time_s = kin.transit_time(setup.cavity_length_m);
    report.criterion_value = report.min_detuning_rad_s * report.transit_time_s;
    report.criterion_threshold = criterion_threshold;
    report.passes = report.criterion_value >= criterion_threshold;
    return report;
}

double closed_form_criterion(double fraction, double refractive_index, double beta) {
    return fraction * kPi / (refractive_index * beta);
}

double coupling_kernel(double transfer_rad_m, const CavityMode& mode, double length_m) {
    if (!(length_m > 0.0)) throw PhysicsError("cavity length must be positive");
    const double x = 0.5 * (mode.total_recoil_rad_m - transfer_rad_m) * length_m;
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

CavityModeSet fabry_perot_modes(const PhysicalSetup& setup, int signal_count, int loss_count,
                                const PhysicalConstants& pc) {
    if (signal_count < 1 || loss_count < 0) throw PhysicsError("need at least one signal mode");
    const double w0 = kTwoPi * pc.light_speed_m_s / setup.design_wavelength_m;
    const double grating = kTwoPi / setup.grating_period_m;

    CavityModeSet set;
    const int lowest = -(signal_count / 2);
    for (int j = lowest; j < lowest + signal_count; ++j) {
        CavityMode m;
        m.index = j;
        m.frequency_rad_s = w0 + j * setup.free_spectral_range_rad_s;
        if (!(m.frequency_rad_s > 0.0)) throw PhysicsError("mode frequency must be positive");
        m.wavenumber_rad_m = setup.refractive_index * m.frequency_rad_s / pc.light_speed_m_s;
        m.total_recoil_rad_m = m.wavenumber_rad_m + grating;
        if (j == 0) set.target = set.modes.size();
        set.modes.push_back(m);
    }
    const CavityMode design = set.target_mode();
    for (int l = 0; l < loss_count; ++l) set.modes.push_back(loss_mode_like(design));
    return set;
}

CavityModeSet ladder_modes(const PhysicalSetup& setup, int loss_count, const PhysicalConstants& pc) {
    if (loss_count < 0) throw PhysicsError("loss count must be non-negative");
    const auto sol = solve_grating_period(setup.kinetic_energy_ev, setup.design_wavelength_m, setup.refractive_index, pc);
    const double grating = kTwoPi / setup.grating_period_m;

    CavityMode first;
    first.index = 0;
    first.frequency_rad_s = sol.frequency_rad_s;
    first.wavenumber_rad_m = sol.photon_wavenumber_rad_m;
    first.total_recoil_rad_m = first.wavenumber_rad_m + grating;

    // Emission from k0 - Q with the same recoil loses hbar Q^2 / m of energy
    // relative to the first photon.
    CavityMode second = first;
    second.index = 1;
    second.frequency_rad_s =
        first.frequency_rad_s - pc.hbar_over_mass() * first.total_recoil_rad_m * first.total_recoil_rad_m;
    if (!(second.frequency_rad_s > 0.0)) throw PhysicsError("second ladder mode has no positive frequency");

    CavityModeSet set{{first, second}, 0};
    for (int l = 0; l < loss_count; ++l) set.modes.push_back(loss_mode_like(first));
    return set;
}

CavityModeSet lambda_modes(const PhysicalSetup& setup, int points_per_recoil, int offset_cells, int loss_count,
                           const PhysicalConstants& pc) {
    if (points_per_recoil < 1 || loss_count < 0) throw PhysicsError("invalid lambda mode parameters");
    if (offset_cells == 0) throw PhysicsError("lambda modes need distinct recoils");
    const auto kin = electron_kinematics(setup.kinetic_energy_ev, pc);
    const auto sol = solve_grating_period(setup.kinetic_energy_ev, setup.design_wavelength_m, setup.refractive_index, pc);
    const double grating = kTwoPi / setup.grating_period_m;

    CavityMode first;
    first.index = 0;
    first.frequency_rad_s = sol.frequency_rad_s;
    first.wavenumber_rad_m = sol.photon_wavenumber_rad_m;
    first.total_recoil_rad_m = first.wavenumber_rad_m + grating;

    CavityMode second;
    second.index = 1;
    second.total_recoil_rad_m =
        first.total_recoil_rad_m * (1.0 + static_cast<double>(offset_cells) / points_per_recoil);
    second.wavenumber_rad_m = second.total_recoil_rad_m - grating;
    second.frequency_rad_s = resonance_frequency(kin.velocity_m_s, second.total_recoil_rad_m, pc.hbar_over_mass());
    if (!(second.frequency_rad_s > 0.0) || !(second.wavenumber_rad_m > 0.0)) {
        throw PhysicsError("second lambda mode is not physical");
    }

    CavityModeSet set{{first, second}, 0};
    for (int l = 0; l < loss_count; ++l) set.modes.push_back(loss_mode_like(first));
    return set;
}

} // namespace fejc
